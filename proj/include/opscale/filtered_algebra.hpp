#pragma once

#include <complex>
#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "opscale/operators.hpp"
#include "opscale/order_estimation.hpp"
#include "opscale/weyl.hpp"

namespace opscale {

template <class Element>
struct SpanElement {
    Element value;
    std::string word;
    int degree = 0;
    bool odd = false;  // parity under the grading, for graded tensor use
};

/// Finite spanning sets, one list per degree, each element carrying its
/// construction word. Membership in the abstract algebra is represented by
/// explicit generator words, never by closed subspaces.
template <class Element>
struct FilteredSpan {
    std::vector<std::vector<SpanElement<Element>>> degrees;

    int depth() const { return static_cast<int>(degrees.size()) - 1; }
    const std::vector<SpanElement<Element>>& at_degree(int k) const {
        return degrees.at(static_cast<std::size_t>(k));
    }
    std::size_t total_size() const {
        std::size_t n = 0;
        for (const auto& d : degrees) n += d.size();
        return n;
    }
};

template <class Element>
struct GeneratorSpec {
    std::string label;
    Element element;
    int degree = 0;
    bool odd = false;
};

/// Inductive construction of the degree filtration from generators:
///   degree 0: words in the degree-0 generators (and the unit),
///   degree 1: D^0 + [Delta, D^0] + D^0 [Delta, D^0],
///   degree k: D^{k-1} + sum_j D^j D^{k-j} + [Delta, D^{k-1}]
///             + D^0 [Delta, D^{k-1}],
/// plus any generators declared at higher degree. Spanning lists are
/// deduplicated by fingerprint and capped by the blow-up guard.
template <class Element, class Ops>
FilteredSpan<Element> build_filtered_algebra(const std::vector<GeneratorSpec<Element>>& generators,
                                             int depth, const Ops& ops, int zero_word_cap = 3,
                                             std::size_t span_cap = 128) {
    if (depth < 0) throw std::invalid_argument("build_filtered_algebra: negative depth");

    FilteredSpan<Element> span;
    span.degrees.resize(static_cast<std::size_t>(depth) + 1);

    std::vector<std::string> seen;
    auto push = [&](int k, SpanElement<Element> e) {
        if (ops.is_zero(e.value)) return;
        const std::string fp = ops.fingerprint(e.value) + ",deg=" + std::to_string(k);
        for (const auto& s : seen)
            if (s == fp) return;
        seen.push_back(fp);
        auto& bucket = span.degrees[static_cast<std::size_t>(k)];
        bucket.push_back(std::move(e));
        if (bucket.size() > span_cap)
            throw BlowupGuardError("spanning set at degree " + std::to_string(k) +
                                   " exceeded the cap of " + std::to_string(span_cap));
    };

    // Degree 0: the unit plus words in degree-0 generators.
    push(0, SpanElement<Element>{ops.identity(), "1", 0, false});
    std::vector<SpanElement<Element>> frontier;
    for (const auto& g : generators)
        if (g.degree == 0) {
            SpanElement<Element> e{g.element, g.label, 0, g.odd};
            push(0, e);
            frontier.push_back(std::move(e));
        }
    for (int len = 2; len <= zero_word_cap; ++len) {
        std::vector<SpanElement<Element>> next;
        for (const auto& w : frontier)
            for (const auto& g : generators)
                if (g.degree == 0) {
                    SpanElement<Element> e{ops.multiply(w.value, g.element), w.word + "*" + g.label, 0,
                                           w.odd != g.odd};
                    push(0, e);
                    next.push_back(std::move(e));
                }
        frontier = std::move(next);
    }

    for (int k = 1; k <= depth; ++k) {
        // Everything of lower degree.
        for (const auto& e : span.degrees[static_cast<std::size_t>(k - 1)]) push(k, e);
        // Generators declared at this degree.
        for (const auto& g : generators)
            if (g.degree == k)
                push(k, SpanElement<Element>{g.element, g.label, k, g.odd});
        // Products D^j * D^{k-j}.
        for (int j = 1; j <= k - 1; ++j)
            for (const auto& a : span.degrees[static_cast<std::size_t>(j)])
                for (const auto& b : span.degrees[static_cast<std::size_t>(k - j)])
                    push(k, SpanElement<Element>{ops.multiply(a.value, b.value),
                                                 "(" + a.word + ")*(" + b.word + ")", k,
                                                 a.odd != b.odd});
        // [Delta, D^{k-1}] and D^0 [Delta, D^{k-1}].
        for (const auto& e : span.degrees[static_cast<std::size_t>(k - 1)]) {
            SpanElement<Element> comm{ops.delta_commutator(e.value), "[Delta," + e.word + "]", k,
                                      e.odd};
            push(k, comm);
            if (!ops.is_zero(comm.value))
                for (const auto& z : span.degrees[0])
                    push(k, SpanElement<Element>{ops.multiply(z.value, comm.value),
                                                 "(" + z.word + ")*(" + comm.word + ")", k,
                                                 z.odd != comm.odd});
        }
    }
    return span;
}

// ---------------------------------------------------------------------------
// Numeric instantiation: matrices at a fixed build dimension against a
// diagonal scale.
// ---------------------------------------------------------------------------

struct NumericAlgebraOps {
    Eigen::VectorXd delta;  // scale eigenvalues at the build dimension
    int fingerprint_block = 48;

    SpMat identity() const { return identity_matrix(static_cast<int>(delta.size())); }
    SpMat multiply(const SpMat& a, const SpMat& b) const { return SpMat(a * b); }
    SpMat delta_commutator(const SpMat& a) const { return commutator_with_diag(delta, a); }
    bool is_zero(const SpMat& a) const { return max_abs(a) == 0.0; }

    std::string fingerprint(const SpMat& a) const {
        const SpMat probe = crop(a, std::min<int>(fingerprint_block, static_cast<int>(a.rows())));
        std::ostringstream os;
        os.precision(17);
        for (int k = 0; k < probe.outerSize(); ++k)
            for (SpMat::InnerIterator it(probe, k); it; ++it)
                os << it.row() << ":" << it.col() << ":" << it.value().real() << ":"
                   << it.value().imag() << ";";
        return os.str();
    }
};

using NumericSpan = FilteredSpan<SpMat>;
using NumericGenerator = GeneratorSpec<SpMat>;

/// Generator families with their degrees and the closure caps; the numeric
/// counterpart of a declared filtered algebra.
struct FilteredAlgebraSpec {
    std::vector<NumericGenerator> generators;
    Eigen::VectorXd delta;
    SpectrumPtr spectrum;
    int closure_depth = 3;     // word-length cap inside degree 0
    std::size_t span_cap = 128;
};

inline NumericSpan build_differential_algebra(const FilteredAlgebraSpec& spec, int depth) {
    for (const auto& g : spec.generators)
        if (g.degree < 0)
            throw std::invalid_argument("build_differential_algebra: degrees must be nonnegative");
    NumericAlgebraOps ops{spec.delta};
    return build_filtered_algebra(spec.generators, depth, ops, spec.closure_depth, spec.span_cap);
}

/// Slope-test certification that every spanning element at degree k has
/// analytic order at most k.
struct SpanOrderReport {
    std::vector<std::pair<std::string, OrderReport>> elements;  // word -> report
    bool pass = true;
};

inline SpanOrderReport certify_span_orders(const NumericSpan& span, const SpectrumPtr& spectrum,
                                           const std::vector<int>& truncations,
                                           const OrderOptions& options = {}) {
    SpanOrderReport report;
    for (int k = 0; k <= span.depth(); ++k) {
        for (const auto& e : span.at_degree(k)) {
            OperatorFamily family =
                family_from_matrix(e.word, e.value, spectrum, static_cast<double>(k));
            OrderReport r = estimate_analytic_order(family, static_cast<double>(k), truncations, options);
            report.pass = report.pass && r.pass;
            report.elements.emplace_back(e.word, std::move(r));
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Symbolic instantiation over the polynomial algebra.
// ---------------------------------------------------------------------------

struct WeylAlgebraOps {
    int n_vars = 1;

    WeylElement identity() const { return WeylElement::one(n_vars); }
    WeylElement multiply(const WeylElement& a, const WeylElement& b) const { return a * b; }
    WeylElement delta_commutator(const WeylElement& a) const {
        return commutator(weyl_laplacian(n_vars), a);
    }
    bool is_zero(const WeylElement& a) const { return a.is_zero(); }
    std::string fingerprint(const WeylElement& a) const { return a.to_string(); }
};

using WeylSpan = FilteredSpan<WeylElement>;

/// Builds the symbolic filtration with generators at their declared
/// degrees and checks order(element) <= degree by exact order read-off.
struct WeylSpanReport {
    WeylSpan span;
    std::vector<std::pair<std::string, int>> orders;  // word -> symbolic order
    bool pass = true;
};

inline WeylSpanReport build_weyl_algebra_span(const std::vector<GeneratorSpec<WeylElement>>& gens,
                                              int depth, int zero_word_cap = 3,
                                              std::size_t span_cap = 256) {
    if (gens.empty()) throw std::invalid_argument("build_weyl_algebra_span: no generators");
    WeylAlgebraOps ops{gens.front().element.n_vars()};
    WeylSpanReport report;
    report.span = build_filtered_algebra(gens, depth, ops, zero_word_cap, span_cap);
    for (int k = 0; k <= report.span.depth(); ++k)
        for (const auto& e : report.span.at_degree(k)) {
            const int order = e.value.order().value_or(0);
            report.orders.emplace_back(e.word, order);
            if (order > k) report.pass = false;
        }
    return report;
}

// ---------------------------------------------------------------------------
// Pseudo-differential spans X Delta^{(z-m)/2} from a differential span.
// ---------------------------------------------------------------------------

struct PdoSpanElement {
    std::string word;
    int source_degree = 0;
    std::complex<double> exponent;  // the z in X Delta^{(z-m)/2}
    OrderReport order_report;
};

struct PdoBuildReport {
    double order_bound = 0.0;      // the t of Psi^t
    double remainder_order = 0.0;  // the l tracked for the remainder class
    std::vector<PdoSpanElement> elements;
    bool pass = true;
};

/// Emits spanning elements X Delta^{(z-m)/2}, Re(z) <= t, X in degree m of
/// the differential span, certifying each against the slope test at order
/// t. The remainder class is tracked only as the tag "order <= l".
inline PdoBuildReport build_pdo_from_do(const NumericSpan& span, const SpectrumPtr& spectrum,
                                        double t, double l, const std::vector<int>& truncations,
                                        const OrderOptions& options = {}) {
    PdoBuildReport report;
    report.order_bound = t;
    report.remainder_order = l;
    for (int m = 0; m <= span.depth(); ++m) {
        for (const auto& e : span.at_degree(m)) {
            const std::complex<double> z(t, 0.0);
            const double half_exponent = (t - static_cast<double>(m)) / 2.0;
            OperatorFamily base = family_from_matrix(e.word, e.value, spectrum, static_cast<double>(m));
            OperatorFamily element = family_right_power(base, spectrum, half_exponent);
            element.label = "(" + e.word + ")*Delta^(" + std::to_string(half_exponent) + ")";
            element.claimed_order = t;
            PdoSpanElement out;
            out.word = element.label;
            out.source_degree = m;
            out.exponent = z;
            out.order_report = estimate_analytic_order(element, t, truncations, options);
            report.pass = report.pass && out.order_report.pass;
            report.elements.push_back(std::move(out));
        }
    }
    return report;
}

}  // namespace opscale
