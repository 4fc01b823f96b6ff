#include <catch2/catch_amalgamated.hpp>

#include "opscale/identities.hpp"
#include "opscale/models.hpp"

using namespace opscale;

TEST_CASE("binomial expansion at k = 0 is the operator itself") {
    const auto circle = circle_spectrum();
    const IdentityReport r = binomial_delta_identity_check(shift_family(circle), 0, 32);
    CHECK(r.pass);
    CHECK(r.max_relative_deviation == 0.0);
}

TEST_CASE("binomial expansion at k = 1 is the definition of delta") {
    const auto circle = circle_spectrum();
    const IdentityReport r = binomial_delta_identity_check(shift_family(circle), 1, 64);
    CHECK(r.pass);
    CHECK(r.max_relative_deviation <= 1e-14);
}

TEST_CASE("binomial expansion holds to rounding through k = 4 on both scales") {
    for (const auto& spec : {circle_spectrum(), oscillator_spectrum()}) {
        const OperatorFamily u = shift_family(spec);
        for (int k = 0; k <= 4; ++k) {
            const IdentityReport r = binomial_delta_identity_check(u, k, 128);
            INFO(spec->label() << " k=" << k << " deviation=" << r.max_relative_deviation);
            CHECK(r.pass);
            CHECK(r.max_relative_deviation <= 1e-10);
        }
    }
}

TEST_CASE("scale commutator via iterated delta: trivial cases") {
    const auto circle = circle_spectrum();
    CHECK(delta_square_identity_check(identity_family(circle), 32).max_relative_deviation == 0.0);
    CHECK(delta_square_identity_check(power_family(circle, Complex(-1.0, 0.0)), 32)
              .max_relative_deviation == 0.0);
}

TEST_CASE("scale commutator via iterated delta on shifts") {
    for (const auto& spec : {circle_spectrum(), oscillator_spectrum()}) {
        const IdentityReport r = delta_square_identity_check(shift_family(spec), 128);
        INFO(spec->label());
        CHECK(r.pass);
        CHECK(r.max_relative_deviation <= 1e-10);
    }
}

TEST_CASE("identity checks hold at every truncation, not just large ones") {
    const auto circle = circle_spectrum();
    const OperatorFamily u = shift_family(circle);
    for (int n : {4, 8, 16, 32, 64, 256}) {
        CHECK(binomial_delta_identity_check(u, 3, n).pass);
        CHECK(delta_square_identity_check(u, n).pass);
    }
}

TEST_CASE("negative k is rejected") {
    const auto circle = circle_spectrum();
    CHECK_THROWS_AS(binomial_delta_identity_check(shift_family(circle), -1, 16),
                    std::invalid_argument);
}
