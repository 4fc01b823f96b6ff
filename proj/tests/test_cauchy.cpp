#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "opscale/cauchy.hpp"
#include "opscale/models.hpp"

using namespace opscale;

TEST_CASE("generalized binomial coefficients") {
    CHECK(generalized_binomial(Complex(-1.0, 0.0), 1) == Complex(-1.0, 0.0));
    CHECK_THAT(generalized_binomial(Complex(0.5, 0.0), 2).real(),
               Catch::Matchers::WithinRel(-0.125, 1e-15));
    CHECK(generalized_binomial(Complex(3.7, 1.2), 0) == Complex(1.0, 0.0));
    CHECK_THROWS_AS(generalized_binomial(Complex(1.0, 0.0), -1), std::invalid_argument);
}

TEST_CASE("contour power reproduces -Delta^{-2} for k = 1, z = -1") {
    const auto circle = circle_spectrum();
    // Tail bound is absolute; the smallest diagonal entry is ~1/2500, so a
    // 1e-13 tail keeps the relative deviation below 1e-9.
    const ContourSpec contour = auto_contour(circle, Complex(-1.0, 0.0), 1, 1e-13);
    const CauchyResult result = cauchy_power(circle, Complex(-1.0, 0.0), contour, 8);
    CHECK(result.converged);
    const Eigen::MatrixXcd dense(result.op.matrix);
    // (-1 choose 1) Delta^{-2}: at index 1 the eigenvalue is 2, so -1/4.
    CHECK_THAT(dense(1, 1).real(), Catch::Matchers::WithinAbs(-0.25, 1e-9));
    CHECK_THAT(dense(0, 0).real(), Catch::Matchers::WithinAbs(-1.0, 1e-9));
    CHECK(cauchy_vs_spectral_deviation(circle, result, 8) <= 1e-8);
}

TEST_CASE("contour power matches the spectral oracle for the inverse square root") {
    const auto circle = circle_spectrum();
    const ContourSpec contour = auto_contour(circle, Complex(-0.5, 0.0), 0, 1e-9);
    const CauchyResult result = cauchy_power(circle, Complex(-0.5, 0.0), contour, 32, 1e-6);
    CHECK(result.converged);
    CHECK(cauchy_vs_spectral_deviation(circle, result, 32) <= 1e-6);
}

TEST_CASE("contour power carries the falling-factorial coefficient for k = 2, z = 1/2") {
    const auto circle = circle_spectrum();
    const ContourSpec contour = auto_contour(circle, Complex(0.5, 0.0), 2, 1e-14);
    const CauchyResult result = cauchy_power(circle, Complex(0.5, 0.0), contour, 16);
    CHECK(result.converged);
    // (1/2 choose 2) = -1/8 against the diagonal Delta^{-3/2} oracle.
    CHECK(cauchy_vs_spectral_deviation(circle, result, 16) <= 1e-8);
    const Eigen::MatrixXcd dense(result.op.matrix);
    CHECK_THAT(dense(0, 0).real(), Catch::Matchers::WithinAbs(-0.125, 1e-8));
}

TEST_CASE("quadrature error decreases under node doubling") {
    const auto circle = circle_spectrum();
    const Complex z(-0.5, 0.0);
    ContourSpec contour = auto_contour(circle, z, 0, 1e-9);
    double previous = 1e300;
    for (int nodes : {24, 48, 96, 192}) {
        contour.node_count = nodes;
        const CauchyResult result = cauchy_power(circle, z, contour, 16, 1e300);
        const double err = cauchy_vs_spectral_deviation(circle, result, 16);
        CHECK(err < previous);
        previous = err;
    }
}

TEST_CASE("non-convergence is reported, not hidden") {
    const auto circle = circle_spectrum();
    ContourSpec contour;
    contour.abscissa = 0.5;
    contour.half_length = 2.0;  // far too short a contour
    contour.node_count = 64;
    contour.resolvent_power = 0;
    const CauchyResult result = cauchy_power(circle, Complex(-0.5, 0.0), contour, 8, 1e-6);
    CHECK(result.tail_bound > 1e-6);
    CHECK_FALSE(result.converged);
}

TEST_CASE("preconditions of the contour formula") {
    const auto circle = circle_spectrum();
    ContourSpec contour = auto_contour(circle, Complex(-1.0, 0.0), 1);
    CHECK_THROWS_AS(cauchy_power(circle, Complex(1.5, 0.0), contour, 8), std::invalid_argument);
    contour.abscissa = 2.0;  // does not separate 0 from the spectrum
    CHECK_THROWS_AS(cauchy_power(circle, Complex(-1.0, 0.0), contour, 8), std::invalid_argument);
    CHECK_THROWS_AS(auto_contour(circle, Complex(3.0, 0.0), 2), std::invalid_argument);
}
