#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "opscale/operators.hpp"
#include "opscale/order_estimation.hpp"
#include "opscale/spectrum.hpp"
#include "opscale/weyl.hpp"

namespace opscale {

/// Matrix realization of the polynomial algebra on the harmonic-oscillator
/// eigenbasis, truncated to `cutoff` levels per mode. Realized operators
/// are trusted on the interior block only: ladder products leak across the
/// cutoff on the last rows and columns.
struct HermiteRealization {
    int n_vars = 1;
    int cutoff = 2;

    HermiteRealization(int vars, int levels) : n_vars(vars), cutoff(levels) {
        if (n_vars < 1) throw std::invalid_argument("HermiteRealization: need >= 1 variable");
        if (cutoff < 2) throw std::invalid_argument("HermiteRealization: cutoff must be >= 2");
    }

    long dim() const {
        long d = 1;
        for (int i = 0; i < n_vars; ++i) d *= cutoff;
        return d;
    }

    /// Mode occupation numbers of a flat basis index (row-major, mode 0
    /// slowest).
    std::vector<int> occupations(long index) const {
        std::vector<int> occ(static_cast<std::size_t>(n_vars));
        for (int m = n_vars - 1; m >= 0; --m) {
            occ[static_cast<std::size_t>(m)] = static_cast<int>(index % cutoff);
            index /= cutoff;
        }
        return occ;
    }
};

namespace detail {

inline SpMat annihilation_matrix(int k) {
    SpMat a(k, k);
    a.reserve(Eigen::VectorXi::Constant(k, 1));
    for (int j = 1; j < k; ++j) a.insert(j - 1, j) = Complex(std::sqrt(static_cast<double>(j)), 0.0);
    a.makeCompressed();
    return a;
}

inline SpMat matrix_power(const SpMat& m, unsigned e) {
    SpMat acc = identity_matrix(static_cast<int>(m.rows()));
    for (unsigned j = 0; j < e; ++j) acc = SpMat(acc * m);
    return acc;
}

}  // namespace detail

/// Ladder-operator position matrix (a + a^dagger)/sqrt(2) for one mode.
inline SpMat hermite_position_matrix(int cutoff) {
    const SpMat a = detail::annihilation_matrix(cutoff);
    return SpMat((a + adjoint_of(a)) * Complex(1.0 / std::sqrt(2.0), 0.0));
}

/// Ladder-operator derivative matrix (a - a^dagger)/sqrt(2) for one mode.
inline SpMat hermite_derivative_matrix(int cutoff) {
    const SpMat a = detail::annihilation_matrix(cutoff);
    return SpMat((a - adjoint_of(a)) * Complex(1.0 / std::sqrt(2.0), 0.0));
}

/// Realizes a normal-ordered element as a matrix on the oscillator
/// eigenbasis. For one variable the attached spectrum is the oscillator
/// scale 2k+2; multi-mode grids are left without a scale because the flat
/// enumeration is not sorted.
inline TruncatedOperator realize(const WeylElement& element, const HermiteRealization& real,
                                 SpectrumPtr spectrum = nullptr) {
    if (element.n_vars() != real.n_vars)
        throw std::invalid_argument("realize: variable count mismatch");
    const int k = real.cutoff;
    const long dim = real.dim();

    std::vector<SpMat> x_pow, d_pow;  // cached per-mode powers
    const SpMat x1 = hermite_position_matrix(k);
    const SpMat d1 = hermite_derivative_matrix(k);

    SpMat acc(dim, dim);
    for (const auto& [mono, coeff] : element.terms()) {
        SpMat term;
        for (int m = 0; m < real.n_vars; ++m) {
            const SpMat mode = SpMat(detail::matrix_power(x1, mono.alpha[static_cast<std::size_t>(m)]) *
                                     detail::matrix_power(d1, mono.beta[static_cast<std::size_t>(m)]));
            term = (m == 0) ? mode : sparse_kron(term, mode);
        }
        acc = acc + SpMat(coeff.to_complex() * term);
    }
    acc.prune([](int, int, const Complex& v) { return v != Complex(0.0, 0.0); });
    acc.makeCompressed();

    const auto order = element.order();
    const double claimed = order.has_value() ? static_cast<double>(*order) : -kOrderInfinity;
    return TruncatedOperator(acc, claimed, std::move(spectrum));
}

/// Max entry deviation between two realized matrices, ignoring entries
/// whose row or column touches a mode within `margin` of the cutoff.
inline double hermite_interior_deviation(const SpMat& a, const SpMat& b,
                                         const HermiteRealization& real, int margin) {
    if (a.rows() != b.rows()) throw std::invalid_argument("hermite_interior_deviation: shape mismatch");
    const int limit = real.cutoff - margin;
    auto interior = [&](long index) {
        for (int occ : real.occupations(index))
            if (occ >= limit) return false;
        return true;
    };
    SpMat d = a - b;
    double best = 0.0;
    for (int k = 0; k < d.outerSize(); ++k)
        for (SpMat::InnerIterator it(d, k); it; ++it)
            if (interior(it.row()) && interior(it.col()))
                best = std::max(best, std::abs(it.value()));
    return best;
}

struct HomomorphismReport {
    std::string lhs;
    std::string rhs;
    int cutoff = 0;
    int interior_margin = 0;
    double max_interior_deviation = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Compares realize(A*B) against realize(A)*realize(B) on the interior
/// block. Requires the cutoff to exceed order(A) + order(B).
inline HomomorphismReport homomorphism_check(const WeylElement& a, const WeylElement& b,
                                             const HermiteRealization& real,
                                             double tolerance = 1e-10) {
    const int order_a = a.order().value_or(0);
    const int order_b = b.order().value_or(0);
    if (real.cutoff <= order_a + order_b)
        throw std::invalid_argument("homomorphism_check: cutoff too small for the element orders");

    const SpMat product = realize(a * b, real).matrix;
    const SpMat composed = SpMat(realize(a, real).matrix * realize(b, real).matrix);

    HomomorphismReport report;
    report.lhs = a.to_string();
    report.rhs = b.to_string();
    report.cutoff = real.cutoff;
    report.interior_margin = order_a + order_b;
    report.tolerance = tolerance;
    report.max_interior_deviation =
        hermite_interior_deviation(product, composed, real, report.interior_margin);
    report.pass = report.max_interior_deviation <= tolerance;
    return report;
}

/// One-variable oscillator scale 2k+2: the spectrum of the realized
/// distinguished element on the interior block.
inline SpectrumPtr oscillator_spectrum() {
    return make_spectrum("oscillator", PolyRule{{2.0, 2.0}, 0}, 2.0);
}

/// Truncation-indexed family of a one-variable element: realized with
/// enough ladder headroom that every requested block carries the exact
/// entries of the untruncated operator, which makes the family nested.
inline OperatorFamily hermite_family(const WeylElement& element, SpectrumPtr spectrum) {
    if (element.n_vars() != 1)
        throw std::invalid_argument("hermite_family: only single-variable elements have a sorted scale");
    const int pad = element.order().value_or(0);
    OperatorFamily f;
    f.label = element.to_string();
    f.spectrum = std::move(spectrum);
    f.claimed_order = static_cast<double>(element.order().value_or(0));
    f.make = [element, pad](int n) {
        const HermiteRealization real(1, n + pad + 1);
        return crop(realize(element, real).matrix, n);
    };
    return f;
}

}  // namespace opscale
