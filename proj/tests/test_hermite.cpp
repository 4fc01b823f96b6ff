#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "opscale/hermite.hpp"
#include "opscale/models.hpp"
#include "opscale/order_estimation.hpp"
#include "test_support.hpp"

using namespace opscale;
using opscale::testing::random_weyl_element;

TEST_CASE("realized scale element is diagonal 2k+2 on the interior block") {
    const HermiteRealization real(1, 64);
    const TruncatedOperator delta = realize(weyl_laplacian(1), real, oscillator_spectrum());
    const Eigen::MatrixXcd dense(delta.matrix);
    const int interior = 64 - 2;
    for (int i = 0; i < interior; ++i) {
        for (int j = 0; j < interior; ++j) {
            if (i == j)
                CHECK_THAT(dense(i, i).real(),
                           Catch::Matchers::WithinAbs(2.0 * i + 2.0, 1e-12));
            else
                CHECK(std::abs(dense(i, j)) <= 1e-12);
        }
    }
    // Eigenvalues of the interior block are exactly the even integers.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense.topLeftCorner(interior, interior),
                                                       Eigen::EigenvaluesOnly);
    for (int i = 0; i < interior; ++i)
        CHECK_THAT(es.eigenvalues()[i], Catch::Matchers::WithinAbs(2.0 * i + 2.0, 1e-8));
}

TEST_CASE("unit element realizes as the identity") {
    const HermiteRealization real(1, 12);
    CHECK(max_abs_diff(realize(WeylElement::one(1), real).matrix, identity_matrix(12)) == 0.0);
}

TEST_CASE("canonical commutation relation on the interior block") {
    const HermiteRealization real(1, 16);
    const WeylElement comm = commutator(WeylElement::derivative(1, 0), WeylElement::position(1, 0));
    const TruncatedOperator realized = realize(comm, real);
    CHECK(hermite_interior_deviation(realized.matrix, identity_matrix(16), real, 2) <= 1e-13);

    // The same relation at the matrix level.
    const SpMat xm = realize(WeylElement::position(1, 0), real).matrix;
    const SpMat dm = realize(WeylElement::derivative(1, 0), real).matrix;
    const SpMat matrix_comm = SpMat(dm * xm) - SpMat(xm * dm);
    CHECK(hermite_interior_deviation(matrix_comm, identity_matrix(16), real, 2) <= 1e-13);
}

TEST_CASE("homomorphism check on ladder pairs") {
    const HermiteRealization real(1, 24);
    CHECK(homomorphism_check(WeylElement::derivative(1, 0), WeylElement::position(1, 0), real)
              .max_interior_deviation <= 1e-13);
    CHECK(homomorphism_check(WeylElement::position(1, 0), WeylElement::position(1, 0), real)
              .max_interior_deviation <= 1e-13);
    const HomomorphismReport r =
        homomorphism_check(weyl_laplacian(1), parse_weyl("x1*d1"), real);
    CHECK(r.pass);
    CHECK(r.max_interior_deviation <= 1e-10);
}

TEST_CASE("homomorphism check rejects too small a cutoff") {
    const HermiteRealization real(1, 4);
    CHECK_THROWS_AS(
        homomorphism_check(parse_weyl("x1^2*d1"), parse_weyl("x1*d1^2"), real),
        std::invalid_argument);
}

TEST_CASE("realization consistency for random pairs") {
    std::mt19937_64 rng(0x4ea11ULL);
    for (int trial = 0; trial < 12; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 2);
        const HermiteRealization real(n, n == 1 ? 16 : 12);
        const WeylElement a = random_weyl_element(rng, n, 3);
        const WeylElement b = random_weyl_element(rng, n, 3);
        const HomomorphismReport report = homomorphism_check(a, b, real);
        INFO(a.to_string() << "  vs  " << b.to_string());
        CHECK(report.pass);
    }
}

TEST_CASE("multi-mode realization uses the grid dimensions") {
    const HermiteRealization real(2, 5);
    const TruncatedOperator op = realize(parse_weyl("x1*d2"), real);
    CHECK(op.dim() == 25);
    CHECK(op.claimed_order == 2.0);
    const auto occ = real.occupations(7);  // 7 = 1*5 + 2
    CHECK(occ[0] == 1);
    CHECK(occ[1] == 2);
}

TEST_CASE("padded realization families are nested and verify their order") {
    const auto osc = oscillator_spectrum();
    const std::vector<int> sizes{24, 48, 96};

    const OperatorFamily xf = hermite_family(WeylElement::position(1, 0), osc);
    CHECK(estimate_analytic_order(xf, 1.0, sizes).pass);

    const OperatorFamily number_like = hermite_family(parse_weyl("x1*d1"), osc);
    CHECK(estimate_analytic_order(number_like, 2.0, sizes).pass);

    // Claiming order 0 for the position operator must fail.
    CHECK_FALSE(estimate_analytic_order(xf, 0.0, sizes).pass);
}
