#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "opscale/models.hpp"
#include "opscale/order_estimation.hpp"

using namespace opscale;

namespace {

const std::vector<int> kSizes{48, 96, 192};

/// diag(n) against the circle scale: the mode-number operator.
OperatorFamily mode_number_family(const SpectrumPtr& spectrum) {
    OperatorFamily f;
    f.label = "D0";
    f.spectrum = spectrum;
    f.claimed_order = 1.0;
    f.make = [spectrum](int n) {
        const Eigen::VectorXd lambda = spectrum->weights(n);
        Eigen::VectorXcd d(n);
        for (int i = 0; i < n; ++i) d[i] = Complex(std::sqrt(lambda[i] - 1.0), 0.0);
        return diag_matrix(d);
    };
    return f;
}

}  // namespace

TEST_CASE("exact isometry: Delta^{1/2} passes order 1 with sigma == 1") {
    const auto circle = circle_spectrum();
    const OperatorFamily sqrt_delta = power_family(circle, Complex(0.5, 0.0));
    const OrderReport report = estimate_analytic_order(sqrt_delta, 1.0, kSizes);
    CHECK(report.pass);
    for (const auto& sample : report.sigma)
        CHECK_THAT(sample.sigma, Catch::Matchers::WithinRel(1.0, 1e-12));
}

TEST_CASE("mode number passes order 1 and matches the direct supremum") {
    const auto circle = circle_spectrum();
    const OrderReport report = estimate_analytic_order(mode_number_family(circle), 1.0, kSizes);
    CHECK(report.pass);
    for (const auto& sample : report.sigma) {
        CHECK(sample.sigma < 1.0);
        double sup = 0.0;  // sup_n n (n^2+1)^{-1/2}, independent of s for a diagonal
        for (int n = 0; n < sample.truncation; ++n)
            sup = std::max(sup, n / std::sqrt(static_cast<double>(n) * n + 1.0));
        CHECK_THAT(sample.sigma, Catch::Matchers::WithinRel(sup, 1e-10));
    }
}

TEST_CASE("Delta^{1/2} claimed at order 0 fails: sigma grows like sqrt(lambda_N)") {
    const auto circle = circle_spectrum();
    const OperatorFamily sqrt_delta = power_family(circle, Complex(0.5, 0.0));
    const OrderReport report = estimate_analytic_order(sqrt_delta, 0.0, kSizes);
    CHECK_FALSE(report.pass);
    for (const auto& sample : report.sigma)
        if (sample.s == 0.0) {
            const double lambda_top = circle->eigenvalue(sample.truncation - 1);
            CHECK_THAT(sample.sigma, Catch::Matchers::WithinRel(std::sqrt(lambda_top), 1e-10));
        }
}

TEST_CASE("shift passes order 0 with sigma equal to the max weight ratio") {
    const auto circle = circle_spectrum();
    const OrderReport report = estimate_analytic_order(shift_family(circle), 0.0, kSizes);
    CHECK(report.pass);
    for (const auto& sample : report.sigma) {
        double sup = 0.0;
        for (int n = 0; n + 1 < sample.truncation; ++n) {
            const double ratio = circle->eigenvalue(n + 1) / circle->eigenvalue(n);
            sup = std::max(sup, std::pow(ratio, sample.s / 2.0));
        }
        CHECK_THAT(sample.sigma, Catch::Matchers::WithinRel(sup, 1e-9));
    }
}

TEST_CASE("non-nested families are rejected") {
    const auto circle = circle_spectrum();
    OperatorFamily broken;
    broken.label = "size-dependent";
    broken.spectrum = circle;
    broken.claimed_order = 0.0;
    broken.make = [](int n) {
        Eigen::VectorXcd d = Eigen::VectorXcd::Constant(n, Complex(static_cast<double>(n), 0.0));
        return diag_matrix(d);
    };
    CHECK_THROWS_AS(estimate_analytic_order(broken, 0.0, kSizes), NestingError);
}

TEST_CASE("truncation lists must be strictly increasing with at least 3 sizes") {
    const auto circle = circle_spectrum();
    const OperatorFamily u = shift_family(circle);
    CHECK_THROWS_AS(estimate_analytic_order(u, 0.0, {64, 128}), std::invalid_argument);
    CHECK_THROWS_AS(estimate_analytic_order(u, 0.0, {64, 64, 128}), std::invalid_argument);
    CHECK_THROWS_AS(estimate_analytic_order(u, 0.0, {128, 64, 32}), std::invalid_argument);
}

TEST_CASE("zero operator passes any candidate order") {
    const auto circle = circle_spectrum();
    OperatorFamily zero;
    zero.label = "0";
    zero.spectrum = circle;
    zero.claimed_order = -kOrderInfinity;
    zero.make = [](int n) { return SpMat(n, n); };
    CHECK(estimate_analytic_order(zero, -6.0, kSizes).pass);
}

TEST_CASE("factorization through Delta^{t/2} on both sides") {
    const auto circle = circle_spectrum();

    const OperatorFamily sqrt_delta = power_family(circle, Complex(0.5, 0.0));
    CHECK(op_factorization_check(sqrt_delta, 1.0, kSizes).pass);

    CHECK(op_factorization_check(mode_number_family(circle), 1.0, kSizes).pass);

    const FactorizationReport shift_report = op_factorization_check(shift_family(circle), 0.0, kSizes);
    CHECK(shift_report.pass);

    // Claiming too low an order is caught on both factors.
    CHECK_FALSE(op_factorization_check(power_family(circle, Complex(0.5, 0.0)), 0.0, kSizes).pass);
}

TEST_CASE("order calculus: products of verified orders pass the additive order") {
    // Products of bounded band operators saturate their sup norm like
    // 1 - c/N; the slope heuristic needs the larger desk-scale sizes.
    const std::vector<int> sizes{128, 256, 512};
    const auto circle = circle_spectrum();
    std::vector<OperatorFamily> pool{
        shift_family(circle),
        power_family(circle, Complex(0.5, 0.0)),
        power_family(circle, Complex(-0.5, 0.0)),
        mode_number_family(circle),
        family_right_power(shift_family(circle), circle, Complex(-1.0, 0.0)),
    };
    for (auto& f : pool)
        REQUIRE(estimate_analytic_order(f, f.claimed_order, sizes).pass);

    std::mt19937_64 rng(0x0dde5ULL);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (int trial = 0; trial < 20; ++trial) {
        const OperatorFamily& p = pool[pick(rng)];
        const OperatorFamily& q = pool[pick(rng)];
        const OperatorFamily pq = family_product(p, q, 16);
        const OrderReport report =
            estimate_analytic_order(pq, p.claimed_order + q.claimed_order, sizes);
        INFO(pq.label);
        CHECK(report.pass);
    }
}
