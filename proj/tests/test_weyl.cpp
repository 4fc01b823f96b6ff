#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "opscale/weyl.hpp"
#include "test_support.hpp"

using namespace opscale;
using opscale::testing::agree_on_polynomials;
using opscale::testing::apply_weyl;
using opscale::testing::monomial_basis;
using opscale::testing::random_weyl_element;

namespace {

WeylElement x(int i = 0, int n = 1) { return WeylElement::position(n, i); }
WeylElement d(int i = 0, int n = 1) { return WeylElement::derivative(n, i); }

}  // namespace

TEST_CASE("canonical commutation relation in normal order") {
    const WeylElement dx = d() * x();
    CHECK(dx.to_string() == "x1*d1 + 1");
    CHECK(dx == parse_weyl("x1*d1 + 1"));
    CHECK((x() * x()).to_string() == "x1^2");
}

TEST_CASE("reordering with higher derivative powers matches the action oracle") {
    const WeylElement lhs = d() * d() * x();
    CHECK(lhs == parse_weyl("x1*d1^2 + 2*d1"));
    // Independent check: both sides act identically on polynomials.
    CHECK(agree_on_polynomials(lhs, parse_weyl("x1*d1^2 + 2*d1"), 4));
    CHECK(agree_on_polynomials(d() * (d() * x()), lhs, 4));
}

TEST_CASE("commutators with the scale element") {
    const WeylElement delta = weyl_laplacian(1);
    CHECK(commutator(delta, x()) == parse_weyl("-2*d1"));
    CHECK(commutator(delta, x() * d()) == parse_weyl("-2*x1^2 - 2*d1^2"));
    CHECK(commutator(x(), x() * x()).is_zero());
    CHECK(agree_on_polynomials(commutator(delta, x()), parse_weyl("-2*d1"), 5));
}

TEST_CASE("filtration check reports both orders") {
    const FiltrationReport r1 = filtration_check(x());
    CHECK(r1.pass);
    CHECK(r1.element_order == 1);
    CHECK(r1.commutator_order == 1);

    const FiltrationReport r2 = filtration_check(WeylElement::one(1));
    CHECK(r2.pass);
    CHECK_FALSE(r2.commutator_order.has_value());

    const FiltrationReport r3 = filtration_check(x() * x() * d());
    CHECK(r3.pass);
    CHECK(r3.element_order == 3);
    CHECK(*r3.commutator_order <= 4);

    const FiltrationReport r4 = filtration_check(parse_weyl("x1*d1"));
    CHECK(r4.pass);
    CHECK(r4.element_order == 2);
    CHECK(r4.commutator_order == 2);
}

TEST_CASE("multiplication is associative with exact coefficients") {
    std::mt19937_64 rng(0xa550cULL);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 3);
        const WeylElement a = random_weyl_element(rng, n, 3);
        const WeylElement b = random_weyl_element(rng, n, 3);
        const WeylElement c = random_weyl_element(rng, n, 3);
        CHECK((a * b) * c == a * (b * c));
    }
}

TEST_CASE("normal-ordered product agrees with composed polynomial action") {
    std::mt19937_64 rng(0x0ac1eULL);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 2);
        const WeylElement a = random_weyl_element(rng, n, 3);
        const WeylElement b = random_weyl_element(rng, n, 3);
        const WeylElement ab = a * b;
        for (const auto& p : monomial_basis(n, 3))
            CHECK(apply_weyl(ab, p) == apply_weyl(a, apply_weyl(b, p)));
    }
}

TEST_CASE("filtration bounds hold for random elements") {
    std::mt19937_64 rng(0xf117eULL);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 3);
        const WeylElement a = random_weyl_element(rng, n, 5);
        const WeylElement b = random_weyl_element(rng, n, 5);
        const WeylElement delta = weyl_laplacian(n);

        const auto order_a = a.order();
        const auto order_b = b.order();
        const auto order_ab = (a * b).order();
        if (order_ab.has_value()) {
            REQUIRE(order_a.has_value());
            REQUIRE(order_b.has_value());
            CHECK(*order_ab <= *order_a + *order_b);
        }
        const auto order_comm = commutator(delta, a).order();
        if (order_comm.has_value() && order_a.has_value())
            CHECK(*order_comm <= *order_a + 1);
    }
}

TEST_CASE("variable count mismatch is an error") {
    CHECK_THROWS_AS(x(0, 1) * x(0, 2), WeylError);
    CHECK_THROWS_AS(x(0, 1) + x(1, 2), WeylError);
}

TEST_CASE("parser produces normal form and reports error positions") {
    CHECK(parse_weyl("2*x1^2*d1 - d2^2 + 1").to_string() == "2*x1^2*d1 - d2^2 + 1");
    CHECK(parse_weyl("d1*x1").to_string() == "x1*d1 + 1");
    CHECK(parse_weyl("3/2*x1 - 1/2*x1").to_string() == "x1");
    CHECK(parse_weyl("i*d1*x1 - i*x1*d1").to_string() == "i");
    CHECK(parse_weyl("  x1 * x1 * d2 ", 2).to_string() == "x1^2*d2");

    CHECK_THROWS_AS(parse_weyl("x1 + + x2"), WeylParseError);
    CHECK_THROWS_AS(parse_weyl("x0"), WeylParseError);
    CHECK_THROWS_AS(parse_weyl("x3", 2), WeylParseError);
    CHECK_THROWS_AS(parse_weyl("1/0"), WeylParseError);
    CHECK_THROWS_AS(parse_weyl("2*"), WeylParseError);
    CHECK_THROWS_AS(parse_weyl("x1^"), WeylParseError);
    try {
        parse_weyl("x1 + $");
        FAIL("expected a parse error");
    } catch (const WeylParseError& e) {
        CHECK(e.position == 5);
    }
}

TEST_CASE("exact Gaussian-rational coefficients") {
    const GaussianRational a(Rational(1, 3), Rational(-2, 7));
    const GaussianRational b(Rational(2, 5), Rational(1, 2));
    const GaussianRational product = a * b;
    CHECK(product.re == Rational(1, 3) * Rational(2, 5) - Rational(-2, 7) * Rational(1, 2));
    CHECK(product.im == Rational(1, 3) * Rational(1, 2) + Rational(-2, 7) * Rational(2, 5));
    CHECK((a - a).is_zero());
}
