#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "opscale/filtered_algebra.hpp"
#include "opscale/operators.hpp"
#include "opscale/triples.hpp"

namespace opscale {

/// Product triple on the graded tensor product, together with the basis
/// bookkeeping: pairs[p] = (i, j) is the factor index pair sitting at
/// sorted position p. The basis is ordered by the product scale eigenvalue
/// delta1_i + delta2_j - 1 with (i, j) as the tie-break.
struct ProductTriple {
    SpectralTripleModel triple;
    std::vector<std::pair<int, int>> pairs;
    std::string ordering = "lambda-sum, then (i, j)";

    int factor_dim_2 = 0;

    /// Sorted-basis position of the kron index i * dim2 + j.
    std::vector<int> kron_to_sorted;

    /// Moves a matrix assembled in plain kron layout into the sorted basis.
    SpMat from_kron(const SpMat& m) const {
        std::vector<int> order(pairs.size());
        for (std::size_t p = 0; p < pairs.size(); ++p)
            order[p] = pairs[p].first * factor_dim_2 + pairs[p].second;
        return relabel_basis(m, order);
    }
};

/// Graded tensor product of operators: (P1 ox P2) with the Koszul sign
/// folded in as P1 * gamma1^{|P2|} ox P2. Result is in kron layout.
inline SpMat graded_kron(const SpMat& p1, const Eigen::VectorXd& grading1, bool p2_odd,
                         const SpMat& p2) {
    if (!p2_odd) return sparse_kron(p1, p2);
    const SpMat signed_p1 = SpMat(p1 * grading1.cast<Complex>().asDiagonal());
    return sparse_kron(signed_p1, p2);
}

/// Constructs the product of two graded triples: D = D1 ox 1 + gamma1 ox D2,
/// gamma = gamma1 ox gamma2, generators all pairs a1 ox a2, scale
/// delta = delta1 + delta2 - 1, with the basis sorted by scale eigenvalue.
inline ProductTriple product_triple(const SpectralTripleModel& t1, const SpectralTripleModel& t2) {
    const int d1 = t1.dim();
    const int d2 = t2.dim();

    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(static_cast<std::size_t>(d1) * static_cast<std::size_t>(d2));
    for (int i = 0; i < d1; ++i)
        for (int j = 0; j < d2; ++j) pairs.emplace_back(i, j);
    std::stable_sort(pairs.begin(), pairs.end(), [&](const auto& a, const auto& b) {
        const double la = t1.delta()[a.first] + t2.delta()[a.second];
        const double lb = t1.delta()[b.first] + t2.delta()[b.second];
        if (la != lb) return la < lb;
        return a < b;
    });

    const int dim = d1 * d2;
    Eigen::VectorXd delta(dim), grading(dim);
    for (int p = 0; p < dim; ++p) {
        const auto [i, j] = pairs[static_cast<std::size_t>(p)];
        delta[p] = t1.delta()[i] + t2.delta()[j] - 1.0;
        grading[p] = t1.grading()[i] * t2.grading()[j];
    }

    std::vector<int> order(static_cast<std::size_t>(dim));
    for (int p = 0; p < dim; ++p)
        order[static_cast<std::size_t>(p)] =
            pairs[static_cast<std::size_t>(p)].first * d2 + pairs[static_cast<std::size_t>(p)].second;

    const SpMat dirac_kron =
        SpMat(sparse_kron(t1.dirac(), identity_matrix(d2)) +
              graded_kron(identity_matrix(d1), t1.grading(), true, t2.dirac()));
    const SpMat dirac = relabel_basis(dirac_kron, order);

    std::vector<std::pair<std::string, SpMat>> generators;
    for (const auto& [n1, a1] : t1.generators())
        for (const auto& [n2, a2] : t2.generators())
            generators.emplace_back(n1 + "(x)" + n2, relabel_basis(sparse_kron(a1, a2), order));

    ProductTriple out{SpectralTripleModel(t1.label() + " x " + t2.label(), std::move(delta),
                                          std::move(grading), dirac, std::move(generators), 0),
                      std::move(pairs)};
    out.factor_dim_2 = d2;
    return out;
}

struct TensorIdentityReport {
    std::string word1, word2;
    bool odd1 = false, odd2 = false;
    double max_relative_deviation = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Entrywise check of [Delta, P1 ox P2] = [Delta1, P1] ox P2
///                                       + P1 ox [Delta2, P2]
/// in the product basis, for graded elementary tensors.
inline TensorIdentityReport tensor_commutator_identity_check(
    const ProductTriple& product, const SpectralTripleModel& t1, const SpectralTripleModel& t2,
    const SpanElement<SpMat>& p1, const SpanElement<SpMat>& p2, double tolerance = 1e-10) {
    const SpMat tensor = product.from_kron(graded_kron(p1.value, t1.grading(), p2.odd, p2.value));
    const SpMat lhs = commutator_with_diag(product.triple.delta(), tensor);

    const SpMat comm1 = commutator_with_diag(t1.delta(), p1.value);
    const SpMat comm2 = commutator_with_diag(t2.delta(), p2.value);
    const SpMat rhs =
        SpMat(product.from_kron(graded_kron(comm1, t1.grading(), p2.odd, p2.value)) +
              product.from_kron(graded_kron(p1.value, t1.grading(), p2.odd, comm2)));

    TensorIdentityReport report;
    report.word1 = p1.word;
    report.word2 = p2.word;
    report.odd1 = p1.odd;
    report.odd2 = p2.odd;
    report.tolerance = tolerance;
    const double scale = std::max({max_abs(lhs), max_abs(rhs), 1e-300});
    report.max_relative_deviation = max_abs_diff(lhs, rhs) / scale;
    report.pass = report.max_relative_deviation <= tolerance;
    return report;
}

struct ProductRegularityReport {
    std::string label;
    int degree1 = 0, degree2 = 0;
    std::vector<TensorIdentityReport> identities;
    std::vector<std::pair<std::string, OrderReport>> order_checks;
    RegularityReport product_probe;
    bool pass = false;
};

namespace detail {

inline FilteredAlgebraSpec triple_algebra_spec(const SpectralTripleModel& t, int closure_depth,
                                               std::size_t span_cap) {
    FilteredAlgebraSpec spec;
    spec.delta = t.delta();
    spec.spectrum = t.spectrum();
    spec.closure_depth = closure_depth;
    spec.span_cap = span_cap;
    for (int i = 0; i < t.generator_count(); ++i) {
        spec.generators.push_back(
            {t.generator_name(i), t.generators()[static_cast<std::size_t>(i)].second, 0, false});
        SpMat comm = SpMat(t.dirac() * t.generators()[static_cast<std::size_t>(i)].second) -
                     SpMat(t.generators()[static_cast<std::size_t>(i)].second * t.dirac());
        comm.prune([](int, int, const Complex& v) { return v != Complex(0.0, 0.0); });
        spec.generators.push_back({"[D," + t.generator_name(i) + "]", comm, 0, true});
    }
    return spec;
}

}  // namespace detail

/// Three-part product check: (i) the tensor commutator identity on sampled
/// elements of the factor algebras at degrees (k, l), (ii) additivity of
/// analytic order for the sampled graded tensors against the product
/// scale, (iii) a regularity probe on the product triple itself.
inline ProductRegularityReport product_regularity_check(
    const SpectralTripleModel& t1, const SpectralTripleModel& t2, int degree1, int degree2,
    const std::vector<int>& truncations, int max_level, const OrderOptions& options = {},
    std::size_t max_samples = 4, double identity_tolerance = 1e-10) {
    const ProductTriple product = product_triple(t1, t2);

    ProductRegularityReport report;
    report.label = product.triple.label();
    report.degree1 = degree1;
    report.degree2 = degree2;

    const NumericSpan span1 = build_differential_algebra(detail::triple_algebra_spec(t1, 2, 64), degree1);
    const NumericSpan span2 = build_differential_algebra(detail::triple_algebra_spec(t2, 2, 64), degree2);

    bool pass = true;
    std::size_t taken1 = 0;
    for (const auto& p1 : span1.at_degree(degree1)) {
        if (taken1++ >= max_samples) break;
        std::size_t taken2 = 0;
        for (const auto& p2 : span2.at_degree(degree2)) {
            if (taken2++ >= max_samples) break;
            TensorIdentityReport identity =
                tensor_commutator_identity_check(product, t1, t2, p1, p2, identity_tolerance);
            pass = pass && identity.pass;

            const SpMat tensor =
                product.from_kron(graded_kron(p1.value, t1.grading(), p2.odd, p2.value));
            OperatorFamily family =
                family_from_matrix(p1.word + " (x) " + p2.word, tensor, product.triple.spectrum(),
                                   static_cast<double>(degree1 + degree2));
            OrderReport order = estimate_analytic_order(
                family, static_cast<double>(degree1 + degree2), truncations, options);
            pass = pass && order.pass;

            report.identities.push_back(std::move(identity));
            report.order_checks.emplace_back(p1.word + " (x) " + p2.word, std::move(order));
        }
    }

    report.product_probe = regularity_probe(product.triple, truncations, max_level, options);
    pass = pass && report.product_probe.pass;
    report.pass = pass;
    return report;
}

}  // namespace opscale
