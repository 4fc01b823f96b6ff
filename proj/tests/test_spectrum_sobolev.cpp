#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "opscale/models.hpp"
#include "opscale/sobolev.hpp"
#include "opscale/spectrum.hpp"

using namespace opscale;

TEST_CASE("polynomial spectrum rules evaluate with the declared offset") {
    const auto circle = circle_spectrum();
    CHECK(circle->eigenvalue(0) == 1.0);
    CHECK(circle->eigenvalue(1) == 2.0);
    CHECK(circle->eigenvalue(5) == 26.0);
    CHECK(circle->lower_bound() == 1.0);

    const auto shifted = make_spectrum("shifted", PolyRule{{1.0, 0.0, 1.0}, 1}, 2.0);
    CHECK(shifted->eigenvalue(0) == 2.0);  // rule evaluated at offset + index
    CHECK(shifted->eigenvalue(1) == 5.0);

    const auto osc = oscillator_spectrum();
    CHECK(osc->eigenvalue(0) == 2.0);
    CHECK(osc->eigenvalue(3) == 8.0);
}

TEST_CASE("table spectra validate range and bounds") {
    const auto table = make_spectrum("tab", TableRule{{2.0, 4.0}}, 2.0);
    CHECK(table->eigenvalue(1) == 4.0);
    CHECK_THROWS_AS(table->eigenvalue(2), std::out_of_range);
    CHECK_THROWS_AS(table->weights(3), std::out_of_range);

    CHECK_THROWS_AS(make_spectrum("bad", TableRule{{1.0}}, 0.0), std::invalid_argument);

    const auto below = make_spectrum("below", TableRule{{0.5, 1.0}}, 1.0);
    CHECK_THROWS_AS(below->weights(2), std::invalid_argument);

    const auto decreasing = make_spectrum("dec", TableRule{{4.0, 2.0}}, 1.0);
    CHECK_THROWS_AS(decreasing->weights(2), std::invalid_argument);
}

TEST_CASE("Sobolev norm of eigenvectors and hand-summed vectors") {
    const auto circle = circle_spectrum();

    Eigen::VectorXcd e5 = Eigen::VectorXcd::Zero(8);
    e5[5] = Complex(1.0, 0.0);
    const SobolevVector v5(e5, circle);
    CHECK_THAT(sobolev_norm(v5, 1.0), Catch::Matchers::WithinRel(std::sqrt(26.0), 1e-14));

    Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(4);
    e1[1] = Complex(1.0, 0.0);
    CHECK_THAT(sobolev_norm(SobolevVector(e1, circle), 0.0), Catch::Matchers::WithinRel(1.0, 1e-15));

    const auto table = make_spectrum("tab", TableRule{{2.0, 4.0}}, 2.0);
    Eigen::VectorXcd ones = Eigen::VectorXcd::Ones(2);
    CHECK_THAT(sobolev_norm(SobolevVector(ones, table), 2.0),
               Catch::Matchers::WithinRel(std::sqrt(20.0), 1e-14));
}

TEST_CASE("Sobolev inner product matches the weighted sum") {
    const auto table = make_spectrum("tab", TableRule{{2.0, 4.0}}, 2.0);
    Eigen::VectorXcd u(2), v(2);
    u << Complex(1.0, 1.0), Complex(0.0, 2.0);
    v << Complex(2.0, 0.0), Complex(1.0, -1.0);
    const auto inner = sobolev_inner(SobolevVector(u, table), SobolevVector(v, table), 1.0);
    // 2 * conj(1+i) * 2 + 4 * conj(2i) * (1-i) = (4-4i) + (-8-8i)
    CHECK_THAT(inner.real(), Catch::Matchers::WithinAbs(-4.0, 1e-13));
    CHECK_THAT(inner.imag(), Catch::Matchers::WithinAbs(-12.0, 1e-13));
}

TEST_CASE("scale nesting: ||v||_t <= lambda_min^{(t-s)/2} ||v||_s for s >= t") {
    const auto circle = circle_spectrum();
    std::mt19937_64 rng(0x50b01ULL);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> pick_s(-4.0, 4.0);

    for (int trial = 0; trial < 50; ++trial) {
        Eigen::VectorXcd coeffs(32);
        for (int i = 0; i < 32; ++i) coeffs[i] = Complex(gauss(rng), gauss(rng));
        const SobolevVector v(coeffs, circle);
        double s = pick_s(rng), t = pick_s(rng);
        if (s < t) std::swap(s, t);
        const double bound = std::pow(circle->lower_bound(), (t - s) / 2.0) * sobolev_norm(v, s);
        CHECK(sobolev_norm(v, t) <= bound * (1.0 + 1e-12));
    }
}
