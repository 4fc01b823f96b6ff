#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Core>

#include "opscale/spectrum.hpp"

namespace opscale {

/// A vector expressed in the scale-operator eigenbasis, carrying its
/// spectrum so that every W^s norm is computable.
struct SobolevVector {
    Eigen::VectorXcd coefficients;
    SpectrumPtr spectrum;

    SobolevVector(Eigen::VectorXcd c, SpectrumPtr s)
        : coefficients(std::move(c)), spectrum(std::move(s)) {
        if (!spectrum) throw std::invalid_argument("SobolevVector: null spectrum");
        spectrum->weights(static_cast<int>(coefficients.size()));  // validates range
    }

    int dim() const { return static_cast<int>(coefficients.size()); }
};

/// W^s inner product <u, v>_{W^s} = sum lambda_i^s conj(u_i) v_i.
inline std::complex<double> sobolev_inner(const SobolevVector& u, const SobolevVector& v, double s) {
    if (u.dim() != v.dim())
        throw std::invalid_argument("sobolev_inner: dimension mismatch");
    const Eigen::VectorXd w = u.spectrum->weights_pow(u.dim(), s);
    std::complex<double> acc(0.0, 0.0);
    for (int i = 0; i < u.dim(); ++i)
        acc += w[i] * std::conj(u.coefficients[i]) * v.coefficients[i];
    return acc;
}

/// W^s norm (sum lambda_i^s |v_i|^2)^{1/2}.
inline double sobolev_norm(const SobolevVector& v, double s) {
    const Eigen::VectorXd w = v.spectrum->weights_pow(v.dim(), s);
    double acc = 0.0;
    for (int i = 0; i < v.dim(); ++i)
        acc += w[i] * std::norm(v.coefficients[i]);
    return std::sqrt(acc);
}

}  // namespace opscale
