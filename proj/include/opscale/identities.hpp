#pragma once

#include <cmath>
#include <string>

#include <Eigen/Core>

#include "opscale/binomial.hpp"
#include "opscale/operators.hpp"
#include "opscale/order_estimation.hpp"

namespace opscale {

struct IdentityReport {
    std::string label;
    int level = 0;
    int truncation = 0;
    int interior_margin = 0;
    double max_relative_deviation = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

namespace detail {

inline double relative_deviation(const SpMat& lhs, const SpMat& rhs, int margin) {
    const double scale = std::max({max_abs(lhs), max_abs(rhs), 1e-300});
    return max_abs_diff_interior(lhs, rhs, margin) / scale;
}

}  // namespace detail

/// Checks Delta^{k/2} b = sum_{j<=k} (k choose j) delta^j(b) Delta^{(k-j)/2}
/// entrywise at one truncation. The identity is algebraic, so agreement is
/// expected at rounding level on the interior block.
inline IdentityReport binomial_delta_identity_check(const OperatorFamily& b, int k, int truncation,
                                                    double tolerance = 1e-10,
                                                    int interior_margin = 0) {
    if (k < 0) throw std::invalid_argument("binomial_delta_identity_check: k must be >= 0");
    const Eigen::VectorXd sqrt_lambda = b.spectrum->weights_pow(truncation, 0.5);

    const SpMat base = b.at(truncation);
    Eigen::VectorXcd left_w(truncation);
    for (int i = 0; i < truncation; ++i)
        left_w[i] = std::pow(sqrt_lambda[i], static_cast<double>(k));
    const SpMat lhs = SpMat(left_w.asDiagonal() * base);

    SpMat rhs(truncation, truncation);
    SpMat level = base;
    for (int j = 0; j <= k; ++j) {
        if (j > 0) level = commutator_with_diag(sqrt_lambda, level);
        const std::complex<double> coeff = generalized_binomial(static_cast<double>(k), j);
        Eigen::VectorXcd right_w(truncation);
        for (int i = 0; i < truncation; ++i)
            right_w[i] = coeff * std::pow(sqrt_lambda[i], static_cast<double>(k - j));
        rhs = rhs + SpMat(level * right_w.asDiagonal());
    }

    IdentityReport report;
    report.label = "Delta^{k/2} b binomial expansion of " + b.label;
    report.level = k;
    report.truncation = truncation;
    report.interior_margin = interior_margin;
    report.tolerance = tolerance;
    report.max_relative_deviation = detail::relative_deviation(lhs, rhs, interior_margin);
    report.pass = report.max_relative_deviation <= tolerance;
    return report;
}

/// Checks [Delta, P] = 2 Delta^{1/2} delta(P) - delta(delta(P)) entrywise.
inline IdentityReport delta_square_identity_check(const OperatorFamily& p, int truncation,
                                                  double tolerance = 1e-10,
                                                  int interior_margin = 0) {
    const Eigen::VectorXd lambda = p.spectrum->weights(truncation);
    const Eigen::VectorXd sqrt_lambda = p.spectrum->weights_pow(truncation, 0.5);

    const SpMat base = p.at(truncation);
    const SpMat lhs = commutator_with_diag(lambda, base);

    const SpMat d1 = commutator_with_diag(sqrt_lambda, base);
    const SpMat d2 = commutator_with_diag(sqrt_lambda, d1);
    const SpMat scaled = scale_rows(sqrt_lambda, d1);
    const SpMat rhs = SpMat(Complex(2.0, 0.0) * scaled) - d2;

    IdentityReport report;
    report.label = "[Delta, P] via delta of " + p.label;
    report.truncation = truncation;
    report.interior_margin = interior_margin;
    report.tolerance = tolerance;
    report.max_relative_deviation = detail::relative_deviation(lhs, rhs, interior_margin);
    report.pass = report.max_relative_deviation <= tolerance;
    return report;
}

}  // namespace opscale
