#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Dense>
#include <Eigen/QR>
#include <Eigen/SparseCore>

#include "opscale/spectrum.hpp"

namespace opscale {

using Complex = std::complex<double>;
using SpMat = Eigen::SparseMatrix<Complex>;
using Triplet = Eigen::Triplet<Complex>;

constexpr double kOrderInfinity = std::numeric_limits<double>::infinity();

/// A finite matrix in the scale-operator eigenbasis, tagged with the order
/// it is claimed to have. The tag is bookkeeping; verification is a
/// separate operation.
struct TruncatedOperator {
    SpMat matrix;
    double claimed_order = kOrderInfinity;
    SpectrumPtr spectrum;  // null when no scale is attached

    TruncatedOperator() = default;
    TruncatedOperator(SpMat m, double order, SpectrumPtr spec)
        : matrix(std::move(m)), claimed_order(order), spectrum(std::move(spec)) {
        if (matrix.rows() != matrix.cols())
            throw std::invalid_argument("TruncatedOperator: matrix must be square");
    }

    int dim() const { return static_cast<int>(matrix.rows()); }
};

// ---------------------------------------------------------------------------
// Sparse building blocks
// ---------------------------------------------------------------------------

inline SpMat identity_matrix(int n) {
    SpMat m(n, n);
    m.setIdentity();
    return m;
}

inline SpMat diag_matrix(const Eigen::VectorXcd& d) {
    SpMat m(static_cast<int>(d.size()), static_cast<int>(d.size()));
    m.reserve(Eigen::VectorXi::Constant(static_cast<int>(d.size()), 1));
    for (int i = 0; i < d.size(); ++i) m.insert(i, i) = d[i];
    m.makeCompressed();
    return m;
}

inline SpMat diag_matrix(const Eigen::VectorXd& d) {
    return diag_matrix(Eigen::VectorXcd(d.cast<Complex>()));
}

/// Unilateral shift e_j -> e_{j+1} compressed to dimension n.
inline SpMat shift_matrix(int n) {
    SpMat m(n, n);
    m.reserve(Eigen::VectorXi::Constant(n, 1));
    for (int j = 0; j + 1 < n; ++j) m.insert(j + 1, j) = Complex(1.0, 0.0);
    m.makeCompressed();
    return m;
}

/// Cyclic shift e_j -> e_{j+1 mod n}.
inline SpMat cyclic_shift_matrix(int n) {
    SpMat m(n, n);
    m.reserve(Eigen::VectorXi::Constant(n, 1));
    for (int j = 0; j < n; ++j) m.insert((j + 1) % n, j) = Complex(1.0, 0.0);
    m.makeCompressed();
    return m;
}

/// Top-left n-by-n block (compression to the first n basis vectors).
inline SpMat crop(const SpMat& m, int n) {
    if (n > m.rows())
        throw std::invalid_argument("crop: block larger than matrix");
    if (n == m.rows()) return m;
    SpMat out(n, n);
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(m.nonZeros()));
    for (int k = 0; k < m.outerSize(); ++k)
        for (SpMat::InnerIterator it(m, k); it; ++it)
            if (it.row() < n && it.col() < n)
                trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    out.setFromTriplets(trips.begin(), trips.end());
    out.makeCompressed();
    return out;
}

inline SpMat adjoint_of(const SpMat& m) {
    SpMat out = SpMat(m.adjoint());
    out.makeCompressed();
    return out;
}

inline SpMat scale_rows(const Eigen::VectorXd& w, const SpMat& m) {
    const Eigen::VectorXcd wc = w.cast<Complex>();
    return SpMat(wc.asDiagonal() * m);
}

inline SpMat scale_cols(const SpMat& m, const Eigen::VectorXd& w) {
    const Eigen::VectorXcd wc = w.cast<Complex>();
    return SpMat(m * wc.asDiagonal());
}

/// Entrywise reweighting out_{ij} = f(i, j) * m_{ij}; the workhorse for
/// commutators with diagonal operators, which never change the sparsity
/// pattern.
template <class F>
SpMat hadamard_weight(const SpMat& m, F&& f) {
    SpMat out(m.rows(), m.cols());
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(m.nonZeros()));
    for (int k = 0; k < m.outerSize(); ++k)
        for (SpMat::InnerIterator it(m, k); it; ++it) {
            const Complex v = f(static_cast<int>(it.row()), static_cast<int>(it.col())) * it.value();
            if (v != Complex(0.0, 0.0))
                trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), v);
        }
    out.setFromTriplets(trips.begin(), trips.end());
    out.makeCompressed();
    return out;
}

/// [diag(w), m]: entries (w_i - w_j) m_{ij}, exact at truncation scale.
inline SpMat commutator_with_diag(const Eigen::VectorXd& w, const SpMat& m) {
    return hadamard_weight(m, [&](int i, int j) { return Complex(w[i] - w[j], 0.0); });
}

inline SpMat sparse_kron(const SpMat& a, const SpMat& b) {
    SpMat out(a.rows() * b.rows(), a.cols() * b.cols());
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(a.nonZeros()) * static_cast<std::size_t>(b.nonZeros()));
    for (int ka = 0; ka < a.outerSize(); ++ka)
        for (SpMat::InnerIterator ia(a, ka); ia; ++ia)
            for (int kb = 0; kb < b.outerSize(); ++kb)
                for (SpMat::InnerIterator ib(b, kb); ib; ++ib)
                    trips.emplace_back(static_cast<int>(ia.row() * b.rows() + ib.row()),
                                       static_cast<int>(ia.col() * b.cols() + ib.col()),
                                       ia.value() * ib.value());
    out.setFromTriplets(trips.begin(), trips.end());
    out.makeCompressed();
    return out;
}

/// Relabel basis vectors: out(i, j) = m(order[i], order[j]) where order[i]
/// is the old index placed at new position i.
inline SpMat relabel_basis(const SpMat& m, const std::vector<int>& order) {
    const int n = static_cast<int>(order.size());
    if (m.rows() != n)
        throw std::invalid_argument("relabel_basis: size mismatch");
    std::vector<int> inverse(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) inverse[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i;
    SpMat out(n, n);
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(m.nonZeros()));
    for (int k = 0; k < m.outerSize(); ++k)
        for (SpMat::InnerIterator it(m, k); it; ++it)
            trips.emplace_back(inverse[static_cast<std::size_t>(it.row())],
                               inverse[static_cast<std::size_t>(it.col())], it.value());
    out.setFromTriplets(trips.begin(), trips.end());
    out.makeCompressed();
    return out;
}

inline double max_abs(const SpMat& m) {
    double best = 0.0;
    for (int k = 0; k < m.outerSize(); ++k)
        for (SpMat::InnerIterator it(m, k); it; ++it)
            best = std::max(best, std::abs(it.value()));
    return best;
}

inline double max_abs_diff(const SpMat& a, const SpMat& b) {
    SpMat d = a - b;
    return max_abs(d);
}

/// Max entry deviation ignoring the last `margin` rows and columns: the
/// region where truncation artifacts of banded operators live.
inline double max_abs_diff_interior(const SpMat& a, const SpMat& b, int margin) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("max_abs_diff_interior: shape mismatch");
    const int n = static_cast<int>(a.rows()) - margin;
    SpMat d = a - b;
    double best = 0.0;
    for (int k = 0; k < d.outerSize(); ++k)
        for (SpMat::InnerIterator it(d, k); it; ++it)
            if (it.row() < n && it.col() < n)
                best = std::max(best, std::abs(it.value()));
    return best;
}

// ---------------------------------------------------------------------------
// Spectral norm
// ---------------------------------------------------------------------------

struct NormOptions {
    int dense_limit = 192;      // below this dimension always use the dense path
    double dense_density = 0.2; // dense path also when this full and dim <= 2048
    int block = 8;
    int max_iterations = 400;
    double rel_tol = 1e-11;
    unsigned long long seed = 0x5eedULL;
};

namespace detail {

inline double dense_spectral_norm(const Eigen::MatrixXcd& a) {
    if (a.rows() == 0) return 0.0;
    const Eigen::MatrixXcd gram = a.adjoint() * a;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
    const double top = es.eigenvalues().maxCoeff();
    return std::sqrt(std::max(0.0, top));
}

/// Block power iteration on A^*A with a deterministic start. Returns a
/// lower bound converging to the spectral norm; accuracy is ample for
/// slope tests even when the top singular values cluster.
inline double block_power_norm(const SpMat& a, const NormOptions& opt) {
    const int n = static_cast<int>(a.rows());
    const int b = std::min(opt.block, n);
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXcd x(n, b);
    for (int j = 0; j < b; ++j)
        for (int i = 0; i < n; ++i) x(i, j) = Complex(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(x);
    x = qr.householderQ() * Eigen::MatrixXcd::Identity(n, b);

    double prev = 0.0, best = 0.0;
    for (int iter = 0; iter < opt.max_iterations; ++iter) {
        const Eigen::MatrixXcd y = a * x;
        const Eigen::MatrixXcd small = y.adjoint() * y;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(small, Eigen::EigenvaluesOnly);
        const double est = std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
        best = std::max(best, est);
        if (iter > 2 && std::abs(est - prev) <= opt.rel_tol * std::max(est, 1e-300)) break;
        prev = est;
        Eigen::MatrixXcd z = a.adjoint() * y;
        Eigen::HouseholderQR<Eigen::MatrixXcd> step(z);
        x = step.householderQ() * Eigen::MatrixXcd::Identity(n, b);
    }
    return best;
}

}  // namespace detail

/// Spectral (operator) norm of a sparse matrix. Small or dense matrices go
/// through an exact dense eigensolve; large sparse ones through block power
/// iteration with a fixed seed, so results are deterministic.
inline double operator_norm(const SpMat& a, const NormOptions& opt = {}) {
    const int n = static_cast<int>(a.rows());
    if (n == 0 || a.nonZeros() == 0) return 0.0;
    const double density =
        static_cast<double>(a.nonZeros()) / (static_cast<double>(n) * static_cast<double>(n));
    if (n <= opt.dense_limit || (density >= opt.dense_density && n <= 2048))
        return detail::dense_spectral_norm(Eigen::MatrixXcd(a));
    return detail::block_power_norm(a, opt);
}

/// All singular values, sorted descending (dense computation).
inline Eigen::VectorXd singular_values(const SpMat& a) {
    if (a.rows() == 0) return Eigen::VectorXd();
    const Eigen::MatrixXcd ad(a);
    const Eigen::MatrixXcd gram = ad.adjoint() * ad;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
    Eigen::VectorXd vals = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    std::sort(vals.data(), vals.data() + vals.size(), std::greater<double>());
    return vals;
}

}  // namespace opscale
