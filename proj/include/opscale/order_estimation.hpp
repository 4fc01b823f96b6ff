#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "opscale/binomial.hpp"
#include "opscale/operators.hpp"
#include "opscale/spectrum.hpp"

namespace opscale {

/// A truncation-indexed operator family: the same operator compressed to
/// the first n eigenbasis vectors, for any requested n. Families handed to
/// the slope machinery must be nested (each size a top-left block of the
/// larger sizes).
struct OperatorFamily {
    std::string label;
    SpectrumPtr spectrum;
    double claimed_order = kOrderInfinity;
    std::function<SpMat(int)> make;

    SpMat at(int n) const { return make(n); }
    TruncatedOperator op_at(int n) const { return TruncatedOperator(at(n), claimed_order, spectrum); }
};

struct NestingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BlowupGuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Family combinators
// ---------------------------------------------------------------------------

/// Prefix compressions of one fixed matrix; nested by construction.
inline OperatorFamily family_from_matrix(std::string label, SpMat big, SpectrumPtr spectrum,
                                         double claimed_order) {
    auto shared = std::make_shared<SpMat>(std::move(big));
    OperatorFamily f;
    f.label = std::move(label);
    f.spectrum = std::move(spectrum);
    f.claimed_order = claimed_order;
    f.make = [shared](int n) {
        if (n > shared->rows())
            throw std::invalid_argument("operator family: truncation beyond build dimension");
        return crop(*shared, n);
    };
    return f;
}

inline OperatorFamily shift_family(SpectrumPtr spectrum, double claimed_order = 0.0) {
    OperatorFamily f;
    f.label = "shift";
    f.spectrum = std::move(spectrum);
    f.claimed_order = claimed_order;
    f.make = [](int n) { return shift_matrix(n); };
    return f;
}

inline OperatorFamily identity_family(SpectrumPtr spectrum) {
    OperatorFamily f;
    f.label = "identity";
    f.spectrum = std::move(spectrum);
    f.claimed_order = 0.0;
    f.make = [](int n) { return identity_matrix(n); };
    return f;
}

/// diag(lambda_i^z): the complex power as a family.
inline OperatorFamily power_family(SpectrumPtr spectrum, std::complex<double> z) {
    OperatorFamily f;
    f.label = "Delta^(" + std::to_string(z.real()) + (z.imag() != 0.0 ? "+i*" + std::to_string(z.imag()) : "") + ")";
    f.claimed_order = 2.0 * z.real();
    SpectrumPtr spec = std::move(spectrum);
    f.spectrum = spec;
    f.make = [spec, z](int n) {
        const Eigen::VectorXd lambda = spec->weights(n);
        Eigen::VectorXcd d(n);
        for (int i = 0; i < n; ++i) d[i] = positive_real_pow(lambda[i], z);
        return diag_matrix(d);
    };
    return f;
}

inline OperatorFamily family_scaled(const OperatorFamily& f, std::complex<double> c) {
    OperatorFamily out = f;
    out.label = "scaled(" + f.label + ")";
    out.make = [f, c](int n) { return SpMat(c * f.at(n)); };
    return out;
}

inline OperatorFamily family_sum(const OperatorFamily& a, const OperatorFamily& b,
                                 double claimed_order) {
    OperatorFamily out;
    out.label = a.label + " + " + b.label;
    out.spectrum = a.spectrum;
    out.claimed_order = claimed_order;
    out.make = [a, b](int n) { return SpMat(a.at(n) + b.at(n)); };
    return out;
}

/// Product evaluated with `pad` rows of headroom and cropped back, so the
/// truncation boundary of the factors cannot leak into the requested block.
/// With pad at least the total bandwidth the family is nested exactly.
inline OperatorFamily family_product(const OperatorFamily& a, const OperatorFamily& b, int pad = 16) {
    OperatorFamily out;
    out.label = a.label + " * " + b.label;
    out.spectrum = a.spectrum;
    out.claimed_order = a.claimed_order + b.claimed_order;
    out.make = [a, b, pad](int n) { return crop(SpMat(a.at(n + pad) * b.at(n + pad)), n); };
    return out;
}

/// Delta^{z} * F: exact at every truncation (left factor is diagonal).
inline OperatorFamily family_left_power(SpectrumPtr spectrum, std::complex<double> z,
                                        const OperatorFamily& f) {
    OperatorFamily out;
    out.label = "Delta^z * " + f.label;
    SpectrumPtr spec = std::move(spectrum);
    out.spectrum = spec;
    out.claimed_order = f.claimed_order + 2.0 * z.real();
    out.make = [spec, z, f](int n) {
        const Eigen::VectorXd lambda = spec->weights(n);
        Eigen::VectorXcd d(n);
        for (int i = 0; i < n; ++i) d[i] = positive_real_pow(lambda[i], z);
        return SpMat(d.asDiagonal() * f.at(n));
    };
    return out;
}

/// F * Delta^{z}.
inline OperatorFamily family_right_power(const OperatorFamily& f, SpectrumPtr spectrum,
                                         std::complex<double> z) {
    OperatorFamily out;
    out.label = f.label + " * Delta^z";
    SpectrumPtr spec = std::move(spectrum);
    out.spectrum = spec;
    out.claimed_order = f.claimed_order + 2.0 * z.real();
    out.make = [spec, z, f](int n) {
        const Eigen::VectorXd lambda = spec->weights(n);
        Eigen::VectorXcd d(n);
        for (int i = 0; i < n; ++i) d[i] = positive_real_pow(lambda[i], z);
        return SpMat(f.at(n) * d.asDiagonal());
    };
    return out;
}

/// [Delta, F]: entrywise (lambda_i - lambda_j) weighting, exact and
/// pattern-preserving.
inline OperatorFamily family_delta_commutator(const OperatorFamily& f) {
    OperatorFamily out;
    out.label = "[Delta, " + f.label + "]";
    out.spectrum = f.spectrum;
    out.claimed_order = f.claimed_order + 2.0;
    SpectrumPtr spec = f.spectrum;
    out.make = [spec, f](int n) {
        const Eigen::VectorXd lambda = spec->weights(n);
        return commutator_with_diag(lambda, f.at(n));
    };
    return out;
}

/// delta(F) = [Delta^{1/2}, F].
inline OperatorFamily family_sqrt_delta_commutator(const OperatorFamily& f) {
    OperatorFamily out;
    out.label = "delta(" + f.label + ")";
    out.spectrum = f.spectrum;
    out.claimed_order = f.claimed_order + 1.0;
    SpectrumPtr spec = f.spectrum;
    out.make = [spec, f](int n) {
        const Eigen::VectorXd sqrt_lambda = spec->weights_pow(n, 0.5);
        return commutator_with_diag(sqrt_lambda, f.at(n));
    };
    return out;
}

// ---------------------------------------------------------------------------
// Boundedness slope test
// ---------------------------------------------------------------------------

struct OrderOptions {
    std::vector<double> s_grid{-4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0};
    double slope_tolerance = 0.05;
    // Cap on sigma growth across the family, measured relative to the
    // smallest truncation. An absolute cap would reject bounded operators
    // whose constant happens to be large, which says nothing about
    // boundedness in N.
    double sigma_growth_cap = 1e3;
    double nesting_tolerance = 1e-12;
    NormOptions norm;
};

struct SigmaSample {
    double s = 0.0;
    int truncation = 0;
    double sigma = 0.0;
};

struct SlopeSample {
    double s = 0.0;
    double slope = 0.0;
};

struct OrderReport {
    std::string label;
    double candidate_order = 0.0;
    std::vector<int> truncations;
    std::vector<double> s_grid;
    double slope_tolerance = 0.0;
    double sigma_growth_cap = 0.0;
    std::vector<SigmaSample> sigma;
    std::vector<SlopeSample> slopes;
    double max_sigma = 0.0;
    double max_growth = 0.0;  // worst sigma(s, N) / sigma(s, N_min)
    bool pass = false;
};

namespace detail {

inline double least_squares_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) return 0.0;
    return (n * sxy - sx * sy) / denom;
}

inline void require_slope_truncations(const std::vector<int>& truncations) {
    if (truncations.size() < 3)
        throw std::invalid_argument("slope test needs at least 3 truncation sizes");
    for (std::size_t i = 0; i < truncations.size(); ++i) {
        if (truncations[i] < 1)
            throw std::invalid_argument("truncation sizes must be positive");
        if (i > 0 && truncations[i] <= truncations[i - 1])
            throw std::invalid_argument("truncation sizes must be strictly increasing");
    }
}

}  // namespace detail

/// sigma(s, N) table for || Delta^{s/2} P Delta^{-(s+t)/2} || with the
/// slope-test verdict: PASS iff every log sigma vs log N regression stays
/// below the slope tolerance and no sigma exceeds the cap.
inline OrderReport estimate_analytic_order(const OperatorFamily& family, double candidate_order,
                                           const std::vector<int>& truncations,
                                           const OrderOptions& options = {}) {
    detail::require_slope_truncations(truncations);
    if (!family.spectrum)
        throw std::invalid_argument("estimate_analytic_order: family has no spectrum");

    std::vector<SpMat> mats;
    mats.reserve(truncations.size());
    for (int n : truncations) mats.push_back(family.at(n));

    const SpMat& largest = mats.back();
    const double scale = std::max(1.0, max_abs(largest));
    for (std::size_t i = 0; i + 1 < mats.size(); ++i) {
        const double dev = max_abs_diff(mats[i], crop(largest, truncations[i]));
        if (dev > options.nesting_tolerance * scale)
            throw NestingError("operator family '" + family.label +
                               "' is not nested: deviation " + std::to_string(dev) +
                               " at truncation " + std::to_string(truncations[i]));
    }

    OrderReport report;
    report.label = family.label;
    report.candidate_order = candidate_order;
    report.truncations = truncations;
    report.s_grid = options.s_grid;
    report.slope_tolerance = options.slope_tolerance;
    report.sigma_growth_cap = options.sigma_growth_cap;

    bool pass = true;
    for (double s : options.s_grid) {
        std::vector<double> log_n, log_sigma;
        double first_sigma = 0.0;
        for (std::size_t i = 0; i < mats.size(); ++i) {
            const int n = truncations[i];
            const Eigen::VectorXd left = family.spectrum->weights_pow(n, s / 2.0);
            const Eigen::VectorXd right = family.spectrum->weights_pow(n, -(s + candidate_order) / 2.0);
            const SpMat scaled = scale_cols(scale_rows(left, mats[i]), right);
            const double sigma = operator_norm(scaled, options.norm);
            report.sigma.push_back({s, n, sigma});
            report.max_sigma = std::max(report.max_sigma, sigma);
            if (i == 0) first_sigma = std::max(sigma, 1e-250);
            report.max_growth = std::max(report.max_growth, sigma / first_sigma);
            log_n.push_back(std::log(static_cast<double>(n)));
            log_sigma.push_back(std::log(std::max(sigma, 1e-250)));
        }
        const double slope = detail::least_squares_slope(log_n, log_sigma);
        report.slopes.push_back({s, slope});
        if (!(slope < options.slope_tolerance)) pass = false;
    }
    if (!(report.max_growth < options.sigma_growth_cap)) pass = false;
    report.pass = pass;
    return report;
}

struct FactorizationReport {
    OrderReport left;   // Delta^{-t/2} * P at order 0
    OrderReport right;  // P * Delta^{-t/2} at order 0
    bool pass = false;
};

/// Checks the factorization Op^t = Delta^{t/2} Op^0 = Op^0 Delta^{t/2} on a
/// family claiming order at most t: both rescaled factors must pass the
/// order-0 slope test.
inline FactorizationReport op_factorization_check(const OperatorFamily& family, double t,
                                                  const std::vector<int>& truncations,
                                                  const OrderOptions& options = {}) {
    FactorizationReport report;
    OperatorFamily left = family_left_power(family.spectrum, -t / 2.0, family);
    left.label = "Delta^(-t/2) * " + family.label;
    left.claimed_order = 0.0;
    OperatorFamily right = family_right_power(family, family.spectrum, -t / 2.0);
    right.label = family.label + " * Delta^(-t/2)";
    right.claimed_order = 0.0;
    report.left = estimate_analytic_order(left, 0.0, truncations, options);
    report.right = estimate_analytic_order(right, 0.0, truncations, options);
    report.pass = report.left.pass && report.right.pass;
    return report;
}

}  // namespace opscale
