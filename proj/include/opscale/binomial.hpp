#pragma once

#include <complex>
#include <stdexcept>

namespace opscale {

/// Generalized binomial coefficient (z choose k) = z(z-1)...(z-k+1)/k!,
/// computed by the falling-factorial product; stable for the small k used
/// in Taylor partial sums and contour formulas.
inline std::complex<double> generalized_binomial(std::complex<double> z, int k) {
    if (k < 0) throw std::invalid_argument("generalized_binomial: k must be >= 0");
    std::complex<double> num(1.0, 0.0);
    double den = 1.0;
    for (int j = 0; j < k; ++j) {
        num *= z - static_cast<double>(j);
        den *= static_cast<double>(j + 1);
    }
    return num / den;
}

/// Principal-branch power of a positive real: lambda^x * e^{i y log lambda}.
inline std::complex<double> positive_real_pow(double lambda, std::complex<double> z) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("positive_real_pow: base must be positive");
    const double mag = std::pow(lambda, z.real());
    const double arg = z.imag() * std::log(lambda);
    return std::polar(mag, arg);
}

}  // namespace opscale
