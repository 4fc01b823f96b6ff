#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Core>

#include "opscale/binomial.hpp"
#include "opscale/operators.hpp"
#include "opscale/sobolev.hpp"
#include "opscale/spectrum.hpp"

namespace opscale {

/// Complex power of the scale operator at truncation N: the diagonal matrix
/// with entries lambda_i^z. Maps W^{s+2Re(z)} isometrically onto W^s, so it
/// carries order 2 Re(z).
inline TruncatedOperator complex_power(const SpectrumPtr& spectrum, std::complex<double> z, int n) {
    const Eigen::VectorXd lambda = spectrum->weights(n);
    Eigen::VectorXcd d(n);
    for (int i = 0; i < n; ++i) d[i] = positive_real_pow(lambda[i], z);
    return TruncatedOperator(diag_matrix(d), 2.0 * z.real(), spectrum);
}

struct IsometryReport {
    std::complex<double> exponent;
    double sobolev_index = 0.0;
    int truncation = 0;
    double max_relative_deviation = 0.0;
};

/// Checks || Delta^z xi ||_{W^s} = || xi ||_{W^{s+2Re z}} over the full
/// eigenbasis plus a few dense random vectors; returns the worst relative
/// deviation seen.
inline IsometryReport power_isometry_check(const SpectrumPtr& spectrum, std::complex<double> z,
                                           double s, int n, int random_vectors = 8,
                                           unsigned long long seed = 0x150f3ULL) {
    const TruncatedOperator power = complex_power(spectrum, z, n);
    const double target_index = s + 2.0 * z.real();

    IsometryReport report;
    report.exponent = z;
    report.sobolev_index = s;
    report.truncation = n;

    auto deviation = [&](const Eigen::VectorXcd& xi) {
        const SobolevVector input(xi, spectrum);
        const SobolevVector mapped(Eigen::VectorXcd(power.matrix * xi), spectrum);
        const double lhs = sobolev_norm(mapped, s);
        const double rhs = sobolev_norm(input, target_index);
        const double scale = std::max(rhs, 1e-300);
        return std::abs(lhs - rhs) / scale;
    };

    for (int i = 0; i < n; ++i) {
        Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
        e[i] = Complex(1.0, 0.0);
        report.max_relative_deviation = std::max(report.max_relative_deviation, deviation(e));
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int r = 0; r < random_vectors; ++r) {
        Eigen::VectorXcd xi(n);
        for (int i = 0; i < n; ++i) xi[i] = Complex(gauss(rng), gauss(rng));
        report.max_relative_deviation = std::max(report.max_relative_deviation, deviation(xi));
    }
    return report;
}

}  // namespace opscale
