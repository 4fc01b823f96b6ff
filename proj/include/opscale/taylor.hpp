#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "opscale/binomial.hpp"
#include "opscale/operators.hpp"
#include "opscale/order_estimation.hpp"
#include "opscale/towers.hpp"

namespace opscale {

/// Partial sum sum_{k<=n} (z choose k) Y^(k) Delta^{z-k} at truncation N.
inline TruncatedOperator taylor_partial_sum(const OperatorFamily& y, std::complex<double> z,
                                            int n_terms, int truncation) {
    const CommutatorTower tower = build_commutator_tower(y, n_terms);
    const Eigen::VectorXd lambda = y.spectrum->weights(truncation);
    SpMat acc(truncation, truncation);
    for (int k = 0; k <= n_terms; ++k) {
        const std::complex<double> coeff = generalized_binomial(z, k);
        Eigen::VectorXcd d(truncation);
        for (int i = 0; i < truncation; ++i)
            d[i] = coeff * positive_real_pow(lambda[i], z - static_cast<double>(k));
        acc = acc + SpMat(tower.level(k).at(truncation) * d.asDiagonal());
    }
    acc.prune([](int, int, const Complex& v) { return v != Complex(0.0, 0.0); });
    acc.makeCompressed();
    return TruncatedOperator(acc, y.claimed_order + 2.0 * z.real(), y.spectrum);
}

/// Remainder Delta^z Y - sum_{k<=n} (z choose k) Y^(k) Delta^{z-k} as a
/// nested family (every ingredient is a diagonal scaling or an entrywise
/// reweighting of Y, so truncations commute with the construction).
inline OperatorFamily taylor_remainder_family(const OperatorFamily& y, std::complex<double> z,
                                              int n_terms) {
    OperatorFamily f;
    f.label = "taylor remainder n=" + std::to_string(n_terms) + " of " + y.label;
    f.spectrum = y.spectrum;
    f.claimed_order = y.claimed_order + 2.0 * z.real() - static_cast<double>(n_terms) - 1.0;
    f.make = [y, z, n_terms](int n) {
        const Eigen::VectorXd lambda = y.spectrum->weights(n);
        Eigen::VectorXcd d(n);
        for (int i = 0; i < n; ++i) d[i] = positive_real_pow(lambda[i], z);
        SpMat lhs = SpMat(d.asDiagonal() * y.at(n));
        SpMat rhs = taylor_partial_sum(y, z, n_terms, n).matrix;
        SpMat out = lhs - rhs;
        out.prune([](int, int, const Complex& v) { return v != Complex(0.0, 0.0); });
        out.makeCompressed();
        return out;
    };
    return f;
}

struct TaylorRemainderReport {
    std::string label;
    std::complex<double> exponent;
    int terms = 0;
    double predicted_order = 0.0;
    OrderReport at_predicted;   // expected to pass
    OrderReport below_predicted;  // sharpness control, expected to fail
    bool sharpness_checked = false;
    bool pass = false;
};

/// Runs the slope test on the Taylor remainder at the predicted order
/// order(Y) + 2 Re(z) - n - 1. With sharpness checking on, also requires
/// the test to fail two orders below the prediction, guarding against a
/// vacuous pass.
inline TaylorRemainderReport taylor_remainder_order(const OperatorFamily& y, std::complex<double> z,
                                                    int n_terms, const std::vector<int>& truncations,
                                                    const OrderOptions& options = {},
                                                    bool check_sharpness = true) {
    TaylorRemainderReport report;
    report.label = y.label;
    report.exponent = z;
    report.terms = n_terms;
    report.predicted_order = y.claimed_order + 2.0 * z.real() - static_cast<double>(n_terms) - 1.0;

    const OperatorFamily remainder = taylor_remainder_family(y, z, n_terms);
    report.at_predicted =
        estimate_analytic_order(remainder, report.predicted_order, truncations, options);
    report.pass = report.at_predicted.pass;
    report.sharpness_checked = check_sharpness;
    if (check_sharpness) {
        report.below_predicted =
            estimate_analytic_order(remainder, report.predicted_order - 2.0, truncations, options);
        report.pass = report.pass && !report.below_predicted.pass;
    }
    return report;
}

}  // namespace opscale
