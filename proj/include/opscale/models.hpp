#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "opscale/hermite.hpp"
#include "opscale/operators.hpp"
#include "opscale/spectrum.hpp"
#include "opscale/triples.hpp"
#include "opscale/weyl.hpp"

namespace opscale {

/// Fourier scale of the circle model: lambda_n = n^2 + 1, n = 0, 1, 2, ...
inline SpectrumPtr circle_spectrum() {
    return make_spectrum("circle", PolyRule{{1.0, 0.0, 1.0}, 0}, 1.0);
}

/// Generator recipe for doubled-mode triples: "shift" (mode n -> n + 1 on
/// both fibre components), "identity", "mode-diag-poly" (diag p(n),
/// doubled), or "mode-diag-signed-sqrt" (diag (-1)^n sqrt|n|, doubled).
struct ModeGeneratorSpec {
    std::string name;
    std::string kind;
    std::vector<double> coeffs;  // for mode-diag-poly
};

namespace detail {

inline double eval_poly(const std::vector<double>& coeffs, double m) {
    double v = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * m + *it;
    return v;
}

/// Keeps a matrix only on the selected basis vectors, relabelled in the
/// given order: out(p, q) = m(selection[p], selection[q]).
inline SpMat select_basis(const SpMat& m, const std::vector<int>& selection) {
    const int dim = static_cast<int>(selection.size());
    std::vector<int> inverse(static_cast<std::size_t>(m.rows()), -1);
    for (int p = 0; p < dim; ++p)
        inverse[static_cast<std::size_t>(selection[static_cast<std::size_t>(p)])] = p;
    SpMat out(dim, dim);
    std::vector<Triplet> trips;
    for (int k = 0; k < m.outerSize(); ++k)
        for (SpMat::InnerIterator it(m, k); it; ++it) {
            const int r = inverse[static_cast<std::size_t>(it.row())];
            const int c = inverse[static_cast<std::size_t>(it.col())];
            if (r >= 0 && c >= 0) trips.emplace_back(r, c, it.value());
        }
    out.setFromTriplets(trips.begin(), trips.end());
    out.makeCompressed();
    return out;
}

}  // namespace detail

/// Doubled-mode triple: integer Fourier modes n carry a two-dimensional
/// graded fibre, the Dirac operator couples the fibre components of mode n
/// with weight d(n), and the scale eigenvalue is d(n)^2 + 1. The basis
/// keeps the dim/2 modes of smallest scale, sorted, fibre pairs adjacent.
inline SpectralTripleModel doubled_mode_triple(const std::string& label, int dim,
                                               const std::vector<double>& dirac_coeffs,
                                               const std::vector<ModeGeneratorSpec>& generator_specs) {
    if (dim < 4 || dim % 2 != 0)
        throw std::invalid_argument(label + ": dimension must be even and >= 4");
    const int mode_count = dim / 2;

    struct Mode {
        int n;
        double dirac_value;
        double scale;
    };
    std::vector<Mode> candidates;
    for (int n = -dim; n <= dim; ++n) {
        const double d = detail::eval_poly(dirac_coeffs, static_cast<double>(n));
        candidates.push_back({n, d, d * d + 1.0});
    }
    std::stable_sort(candidates.begin(), candidates.end(), [](const Mode& a, const Mode& b) {
        if (a.scale != b.scale) return a.scale < b.scale;
        return a.n < b.n;
    });
    candidates.resize(static_cast<std::size_t>(mode_count));

    std::map<int, int> mode_position;  // mode -> pair index
    for (int m = 0; m < mode_count; ++m) mode_position[candidates[static_cast<std::size_t>(m)].n] = m;

    Eigen::VectorXd delta(dim), grading(dim);
    std::vector<Triplet> dirac_trips;
    for (int m = 0; m < mode_count; ++m) {
        const Mode& mode = candidates[static_cast<std::size_t>(m)];
        delta[2 * m] = mode.scale;
        delta[2 * m + 1] = mode.scale;
        grading[2 * m] = 1.0;
        grading[2 * m + 1] = -1.0;
        if (mode.dirac_value != 0.0) {
            dirac_trips.emplace_back(2 * m, 2 * m + 1, Complex(mode.dirac_value, 0.0));
            dirac_trips.emplace_back(2 * m + 1, 2 * m, Complex(mode.dirac_value, 0.0));
        }
    }
    SpMat dirac(dim, dim);
    dirac.setFromTriplets(dirac_trips.begin(), dirac_trips.end());
    dirac.makeCompressed();

    std::vector<std::pair<std::string, SpMat>> generators;
    for (const auto& spec : generator_specs) {
        std::vector<Triplet> trips;
        if (spec.kind == "shift") {
            for (const auto& [n, m] : mode_position) {
                const auto up = mode_position.find(n + 1);
                if (up == mode_position.end()) continue;
                trips.emplace_back(2 * up->second, 2 * m, Complex(1.0, 0.0));
                trips.emplace_back(2 * up->second + 1, 2 * m + 1, Complex(1.0, 0.0));
            }
        } else if (spec.kind == "identity") {
            for (int i = 0; i < dim; ++i) trips.emplace_back(i, i, Complex(1.0, 0.0));
        } else if (spec.kind == "mode-diag-poly") {
            for (const auto& [n, m] : mode_position) {
                const Complex v(detail::eval_poly(spec.coeffs, static_cast<double>(n)), 0.0);
                if (v != Complex(0.0, 0.0)) {
                    trips.emplace_back(2 * m, 2 * m, v);
                    trips.emplace_back(2 * m + 1, 2 * m + 1, v);
                }
            }
        } else if (spec.kind == "mode-diag-signed-sqrt") {
            for (const auto& [n, m] : mode_position) {
                const double sign = (n % 2 == 0) ? 1.0 : -1.0;
                const Complex v(sign * std::sqrt(std::abs(static_cast<double>(n))), 0.0);
                if (v != Complex(0.0, 0.0)) {
                    trips.emplace_back(2 * m, 2 * m, v);
                    trips.emplace_back(2 * m + 1, 2 * m + 1, v);
                }
            }
        } else {
            throw std::invalid_argument("unknown generator kind '" + spec.kind + "'");
        }
        SpMat gen(dim, dim);
        gen.setFromTriplets(trips.begin(), trips.end());
        gen.makeCompressed();
        generators.emplace_back(spec.name, std::move(gen));
    }

    return SpectralTripleModel(label, std::move(delta), std::move(grading), std::move(dirac),
                               std::move(generators), 0);
}

/// Doubled circle triple: D0 = diag(n) on Fourier modes, generator the
/// bilateral shift u.
inline SpectralTripleModel circle_triple(int dim) {
    return doubled_mode_triple("circle", dim, {0.0, 1.0}, {{"u", "shift", {}}});
}

/// Circle geometry with the generator diag((-1)^n sqrt|n|): bounded at
/// every truncation but with norms growing like sqrt(N), so the smooth
/// domain evidence must fail.
inline SpectralTripleModel nonregular_triple(int dim) {
    return doubled_mode_triple("nonregular", dim, {0.0, 1.0},
                               {{"a", "mode-diag-signed-sqrt", {}}});
}

/// Flat-scale counterexample: D = 0, lambda identically 1, generator a
/// cyclic (hence unitary) shift; its resolvent profile cannot decay.
inline SpectralTripleModel flat_triple(int dim) {
    if (dim < 4 || dim % 2 != 0)
        throw std::invalid_argument("flat_triple: dimension must be even and >= 4");
    const int half = dim / 2;
    Eigen::VectorXd delta = Eigen::VectorXd::Ones(dim);
    Eigen::VectorXd grading(dim);
    for (int i = 0; i < dim; ++i) grading[i] = (i % 2 == 0) ? 1.0 : -1.0;
    const SpMat gen = sparse_kron(cyclic_shift_matrix(half), identity_matrix(2));
    return SpectralTripleModel("flat", std::move(delta), std::move(grading), SpMat(dim, dim),
                               {{"v", gen}}, 0);
}

/// Scalars acting on a graded space with D = 0: every probe is trivially
/// flat.
inline SpectralTripleModel trivial_triple(int dim) {
    if (dim < 1) throw std::invalid_argument("trivial_triple: dimension must be >= 1");
    Eigen::VectorXd delta = Eigen::VectorXd::Ones(dim);
    Eigen::VectorXd grading(dim);
    for (int i = 0; i < dim; ++i) grading[i] = (i % 2 == 0) ? 1.0 : -1.0;
    return SpectralTripleModel("trivial", std::move(delta), std::move(grading), SpMat(dim, dim),
                               {{"1", identity_matrix(dim)}}, 0);
}

/// Supersymmetric oscillator triple built from the ladder realization of
/// the polynomial algebra: D couples the two fibre components through the
/// annihilator (x + d)/sqrt(2), and the represented generator is the
/// bounded phase shift a (N+1)^{-1/2}.
inline SpectralTripleModel oscillator_triple(int dim) {
    if (dim < 4) throw std::invalid_argument("oscillator_triple: dimension must be >= 4");
    const int ladder = dim / 2 + 2;
    const HermiteRealization real(1, ladder);
    const SpMat x = realize(WeylElement::position(1, 0), real).matrix;
    const SpMat d = realize(WeylElement::derivative(1, 0), real).matrix;
    const SpMat annihilator = SpMat(Complex(1.0 / std::sqrt(2.0), 0.0) * SpMat(x + d));

    Eigen::VectorXd phase_weights(ladder);
    for (int k = 0; k < ladder; ++k) phase_weights[k] = 1.0 / std::sqrt(static_cast<double>(k) + 1.0);
    const SpMat phase = scale_cols(annihilator, phase_weights);

    // Basis (k, copy): copy 0 carries scale k + 2, copy 1 carries k + 1.
    // The top ladder level is dropped: its scale entry is a truncation
    // artifact.
    struct Entry {
        double scale;
        int k;
        int copy;
    };
    std::vector<Entry> entries;
    for (int k = 0; k + 1 < ladder; ++k) {
        entries.push_back({static_cast<double>(k) + 2.0, k, 0});
        entries.push_back({static_cast<double>(k) + 1.0, k, 1});
    }
    std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.scale != b.scale) return a.scale < b.scale;
        if (a.k != b.k) return a.k < b.k;
        return a.copy < b.copy;
    });
    if (static_cast<int>(entries.size()) < dim)
        throw std::invalid_argument("oscillator_triple: internal ladder too small");
    entries.resize(static_cast<std::size_t>(dim));

    // Assemble in (k, copy) layout at the padded ladder size, then select
    // the sorted, trusted basis vectors.
    const int big = 2 * ladder;
    auto flat = [&](int k, int copy) { return 2 * k + copy; };
    std::vector<Triplet> dirac_trips;
    for (int k = 0; k < annihilator.outerSize(); ++k)
        for (SpMat::InnerIterator it(annihilator, k); it; ++it) {
            // D (v (+) w) = (A w (+) A^dagger v)
            dirac_trips.emplace_back(flat(static_cast<int>(it.row()), 0),
                                     flat(static_cast<int>(it.col()), 1), it.value());
            dirac_trips.emplace_back(flat(static_cast<int>(it.col()), 1),
                                     flat(static_cast<int>(it.row()), 0), std::conj(it.value()));
        }
    SpMat dirac_big(big, big);
    dirac_big.setFromTriplets(dirac_trips.begin(), dirac_trips.end());
    dirac_big.makeCompressed();

    std::vector<Triplet> gen_trips;
    for (int k = 0; k < phase.outerSize(); ++k)
        for (SpMat::InnerIterator it(phase, k); it; ++it)
            for (int copy = 0; copy < 2; ++copy)
                gen_trips.emplace_back(flat(static_cast<int>(it.row()), copy),
                                       flat(static_cast<int>(it.col()), copy), it.value());
    SpMat gen_big(big, big);
    gen_big.setFromTriplets(gen_trips.begin(), gen_trips.end());
    gen_big.makeCompressed();

    std::vector<int> selection;
    Eigen::VectorXd delta(dim), grading(dim);
    for (int p = 0; p < dim; ++p) {
        const Entry& e = entries[static_cast<std::size_t>(p)];
        selection.push_back(flat(e.k, e.copy));
        delta[p] = e.scale;
        grading[p] = e.copy == 0 ? 1.0 : -1.0;
    }

    return SpectralTripleModel("oscillator", std::move(delta), std::move(grading),
                               detail::select_basis(dirac_big, selection),
                               {{"phase", detail::select_basis(gen_big, selection)}}, 6);
}

inline SpectrumPtr builtin_spectrum(const std::string& name) {
    if (name == "circle") return circle_spectrum();
    if (name == "oscillator") return oscillator_spectrum();
    throw std::invalid_argument("unknown builtin spectrum '" + name + "'");
}

inline SpectralTripleModel builtin_triple(const std::string& name, int dim) {
    if (name == "circle") return circle_triple(dim);
    if (name == "trivial") return trivial_triple(dim);
    if (name == "oscillator") return oscillator_triple(dim);
    if (name == "nonregular") return nonregular_triple(dim);
    if (name == "flat") return flat_triple(dim);
    throw std::invalid_argument("unknown builtin triple '" + name + "'");
}

}  // namespace opscale
