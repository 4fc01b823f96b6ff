#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Core>

#include "opscale/binomial.hpp"
#include "opscale/operators.hpp"
#include "opscale/powers.hpp"
#include "opscale/spectrum.hpp"

namespace opscale {

/// Downward vertical contour Re(lambda) = abscissa, traversed from
/// +i*half_length to -i*half_length, separating 0 from the spectrum.
/// resolvent_power k selects the integrand lambda^z (lambda - Delta)^{-k-1}.
struct ContourSpec {
    double abscissa = 0.5;
    double half_length = 1e6;
    int node_count = 4096;
    int resolvent_power = 1;

    void validate(double lower_bound) const {
        if (!(abscissa > 0.0) || !(abscissa < lower_bound))
            throw std::invalid_argument("ContourSpec: abscissa must lie in (0, lower bound)");
        if (!(half_length > abscissa))
            throw std::invalid_argument("ContourSpec: half_length too small");
        if (node_count < 8)
            throw std::invalid_argument("ContourSpec: too few nodes");
        if (resolvent_power < 0)
            throw std::invalid_argument("ContourSpec: resolvent power must be >= 0");
    }
};

namespace detail {

/// Bound on the modulus of all omitted integrand mass beyond +-iT:
/// (C/pi) T^{Re z - k} / (k - Re z) with C absorbing the arg(lambda) factor.
inline double contour_tail_bound(std::complex<double> z, int k, double half_length) {
    const double decay = static_cast<double>(k) - z.real();
    if (!(decay > 0.0))
        throw std::invalid_argument("cauchy_power: requires Re(z) < resolvent_power");
    double c = std::exp(std::abs(z.imag()) * M_PI / 2.0);
    if (z.real() > 0.0) c *= std::pow(2.0, z.real() / 2.0);
    return c / M_PI * std::pow(half_length, -decay) / decay;
}

inline std::complex<double> resolvent_factor(std::complex<double> lambda, double eigenvalue, int k) {
    const std::complex<double> base = lambda - eigenvalue;
    std::complex<double> p(1.0, 0.0);
    for (int j = 0; j < k + 1; ++j) p *= base;
    return 1.0 / p;
}

/// Trapezoid rule in the sinh-graded parameter tau = a*sinh(u): nodes
/// concentrate near the spectrum-facing segment while the reach in tau
/// stays exponential in u, so the quadrature converges geometrically
/// under node doubling.
inline Eigen::VectorXcd contour_quadrature(const Eigen::VectorXd& lambda, std::complex<double> z,
                                           const ContourSpec& contour, int nodes) {
    const double a = contour.abscissa;
    const int k = contour.resolvent_power;
    const double u_max = std::asinh(contour.half_length / a);
    const double h = 2.0 * u_max / static_cast<double>(nodes - 1);

    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(lambda.size());
    for (int j = 0; j < nodes; ++j) {
        const double u = -u_max + h * static_cast<double>(j);
        const double tau = a * std::sinh(u);
        const std::complex<double> point(a, -tau);
        const double jacobian = a * std::cosh(u);
        const double w = (j == 0 || j == nodes - 1) ? 0.5 : 1.0;
        const std::complex<double> common = std::pow(point, z) * (w * h * jacobian);
        for (int i = 0; i < lambda.size(); ++i)
            acc[i] += common * resolvent_factor(point, lambda[i], k);
    }
    return Eigen::VectorXcd(acc * (-1.0 / (2.0 * M_PI)));
}

}  // namespace detail

struct CauchyResult {
    TruncatedOperator op;          // approximates (z choose k) Delta^{z-k}
    std::complex<double> exponent;
    int resolvent_power = 0;
    double tail_bound = 0.0;        // analytic bound on the omitted tail
    double refinement_estimate = 0.0;  // max entry change vs a half-node run
    double tolerance = 0.0;
    bool converged = false;
};

/// Contour-integral realization of (z choose k) Delta^{z-k} at truncation n,
/// for Re(z) < k. Reports non-convergence when the tail bound at the contour
/// ends or the refinement estimate exceeds the tolerance.
inline CauchyResult cauchy_power(const SpectrumPtr& spectrum, std::complex<double> z,
                                 const ContourSpec& contour, int n, double tolerance = 1e-6) {
    contour.validate(spectrum->lower_bound());
    if (!(z.real() < static_cast<double>(contour.resolvent_power)))
        throw std::invalid_argument("cauchy_power: requires Re(z) < resolvent_power");

    const Eigen::VectorXd lambda = spectrum->weights(n);
    const Eigen::VectorXcd fine = detail::contour_quadrature(lambda, z, contour, contour.node_count);
    const Eigen::VectorXcd coarse =
        detail::contour_quadrature(lambda, z, contour, contour.node_count / 2 + 1);

    CauchyResult result;
    result.exponent = z;
    result.resolvent_power = contour.resolvent_power;
    result.tail_bound = detail::contour_tail_bound(z, contour.resolvent_power, contour.half_length);
    result.refinement_estimate = (fine - coarse).cwiseAbs().maxCoeff();
    result.tolerance = tolerance;
    result.converged = result.tail_bound <= tolerance && result.refinement_estimate <= tolerance;
    result.op = TruncatedOperator(diag_matrix(fine),
                                  2.0 * (z.real() - static_cast<double>(contour.resolvent_power)),
                                  spectrum);
    return result;
}

/// Contour with abscissa c/2 and reach chosen so the analytic tail bound
/// falls below `tail_tolerance`.
inline ContourSpec auto_contour(const SpectrumPtr& spectrum, std::complex<double> z, int k,
                                double tail_tolerance = 1e-9, int node_count = 4096) {
    const double decay = static_cast<double>(k) - z.real();
    if (!(decay > 0.0))
        throw std::invalid_argument("auto_contour: requires Re(z) < k");
    double c = std::exp(std::abs(z.imag()) * M_PI / 2.0);
    if (z.real() > 0.0) c *= std::pow(2.0, z.real() / 2.0);
    ContourSpec contour;
    contour.abscissa = spectrum->lower_bound() / 2.0;
    contour.resolvent_power = k;
    contour.node_count = node_count;
    contour.half_length =
        std::max(2.0 * contour.abscissa, std::pow(c / (M_PI * decay * tail_tolerance), 1.0 / decay));
    return contour;
}

/// Relative entrywise deviation of the quadrature against the
/// spectral-theorem evaluation of (z choose k) Delta^{z-k}.
inline double cauchy_vs_spectral_deviation(const SpectrumPtr& spectrum, const CauchyResult& result,
                                           int n) {
    const std::complex<double> coeff =
        generalized_binomial(result.exponent, result.resolvent_power);
    const TruncatedOperator exact = complex_power(
        spectrum, result.exponent - static_cast<double>(result.resolvent_power), n);
    const Eigen::VectorXcd got = Eigen::MatrixXcd(result.op.matrix).diagonal();
    const Eigen::VectorXcd want = coeff * Eigen::MatrixXcd(exact.matrix).diagonal();
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        const double scale = std::max(std::abs(want[i]), 1e-300);
        worst = std::max(worst, std::abs(got[i] - want[i]) / scale);
    }
    return worst;
}

}  // namespace opscale
