#include <cmath>
#include <stdexcept>

#include "cvqkd/channel.hpp"
#include "doctest.h"

using namespace cvqkd;

TEST_CASE("transmittance follows the 0.2 dB/km fibre law") {
    CHECK(transmittance({0.0, 0.2, 0.0}) == 1.0);
    CHECK(transmittance({50.0, 0.2, 0.0}) == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(transmittance({100.0, 0.2, 0.0}) == doctest::Approx(0.01).epsilon(1e-14));
}

TEST_CASE("noise budget at the reference point (T = 0.1)") {
    const LinkParams link{50.0, 0.2, 0.005};
    SUBCASE("homodyne") {
        const auto b = noise_budget(link, {Detection::Homodyne, 0.6, 0.05});
        CHECK(b.chi_line == doctest::Approx(9.005).epsilon(1e-12));
        CHECK(b.chi_det == doctest::Approx(0.75).epsilon(1e-15));
        CHECK(b.chi_total == doctest::Approx(16.505).epsilon(1e-12));
        REQUIRE(b.epr_variance.has_value());
        CHECK(*b.epr_variance == doctest::Approx(1.125).epsilon(1e-15));
    }
    SUBCASE("heterodyne") {
        const auto b = noise_budget(link, {Detection::Heterodyne, 0.6, 0.05});
        CHECK(b.chi_det == doctest::Approx(2.5).epsilon(1e-15));
        CHECK(b.chi_total == doctest::Approx(34.005).epsilon(1e-12));
        REQUIRE(b.epr_variance.has_value());
        CHECK(*b.epr_variance == doctest::Approx(1.25).epsilon(1e-15));
    }
}

TEST_CASE("budget structure properties") {
    SUBCASE("chi_line >= excess noise; monotone in T, eps, eps_ele") {
        for (double length : {0.0, 10.0, 50.0, 120.0}) {
            for (double eps : {0.0, 0.005, 0.02}) {
                const auto b = noise_budget({length, 0.2, eps}, {Detection::Homodyne, 0.6, 0.05});
                CHECK(b.chi_line >= eps);
            }
        }
        const DetectorParams det{Detection::Homodyne, 0.6, 0.05};
        double prev = 0.0;
        for (double length : {120.0, 50.0, 10.0, 0.0}) {  // increasing T
            const auto b = noise_budget({length, 0.2, 0.005}, det);
            if (prev > 0.0) CHECK(b.chi_total < prev);
            prev = b.chi_total;
        }
        CHECK(noise_budget({20, 0.2, 0.02}, det).chi_total >
              noise_budget({20, 0.2, 0.005}, det).chi_total);
        CHECK(noise_budget({20, 0.2, 0.005}, {Detection::Homodyne, 0.6, 0.1}).chi_total >
              noise_budget({20, 0.2, 0.005}, det).chi_total);
    }
    SUBCASE("heterodyne detector noise exceeds homodyne") {
        for (double eta : {0.3, 0.6, 0.9, 1.0}) {
            for (double eps_ele : {0.0, 0.05, 0.2}) {
                const auto hom = noise_budget({10, 0.2, 0.0}, {Detection::Homodyne, eta, eps_ele});
                const auto het = noise_budget({10, 0.2, 0.0}, {Detection::Heterodyne, eta, eps_ele});
                CHECK(het.chi_det > hom.chi_det);
            }
        }
    }
    SUBCASE("EPR variance is >= 1 whenever defined, absent at eta = 1") {
        for (double eta : {0.2, 0.5, 0.9, 0.999}) {
            const auto hom = noise_budget({10, 0.2, 0.0}, {Detection::Homodyne, eta, 0.05});
            const auto het = noise_budget({10, 0.2, 0.0}, {Detection::Heterodyne, eta, 0.05});
            REQUIRE(hom.epr_variance.has_value());
            REQUIRE(het.epr_variance.has_value());
            CHECK(*hom.epr_variance >= 1.0);
            CHECK(*het.epr_variance >= 1.0);
        }
        CHECK(!noise_budget({10, 0.2, 0.0}, {Detection::Homodyne, 1.0, 0.0}).epr_variance);
        CHECK(!noise_budget({10, 0.2, 0.0}, {Detection::Heterodyne, 1.0, 0.05}).epr_variance);
    }
    SUBCASE("invalid parameters are rejected") {
        CHECK_THROWS_AS(noise_budget({10, 0.2, -0.1}, {Detection::Homodyne, 0.6, 0.05}),
                        std::invalid_argument);
        CHECK_THROWS_AS(noise_budget({10, 0.2, 0.0}, {Detection::Homodyne, 0.0, 0.05}),
                        std::invalid_argument);
        CHECK_THROWS_AS(noise_budget({10, 0.2, 0.0}, {Detection::Homodyne, 1.2, 0.05}),
                        std::invalid_argument);
        CHECK_THROWS_AS(noise_budget({-5, 0.2, 0.0}, {Detection::Homodyne, 0.6, 0.05}),
                        std::invalid_argument);
    }
}

TEST_CASE("quadrature simulation") {
    const ModulationScheme psk8 = ModulationScheme::psk_from_variance(8, 1.0);

    SUBCASE("identity channel: V_B -> V = 2, V_B|A -> 1") {
        const auto stats = simulate_quadratures(psk8, {0.0, 0.2, 0.0},
                                                {Detection::Homodyne, 1.0, 0.0}, 200000, 42);
        CHECK(std::abs(stats.v_b - 2.0) < 5.0 * stats.std_error);
        CHECK(std::abs(stats.v_b_given_a - 1.0) < 5.0 * stats.std_error);
    }
    SUBCASE("lossy link: V_B / (eta T) -> V + chi_T") {
        const LinkParams link{20.0, 0.2, 0.005};
        const DetectorParams det{Detection::Homodyne, 0.6, 0.05};
        const auto budget = noise_budget(link, det);
        const auto stats = simulate_quadratures(psk8, link, det, 200000, 7);
        const double scale = det.efficiency * budget.transmittance;
        CHECK(std::abs(stats.v_b / scale - (2.0 + budget.chi_total)) <
              5.0 * stats.std_error / scale);
        CHECK(std::abs(stats.v_b_given_a / scale - (1.0 + budget.chi_total)) <
              5.0 * stats.std_error / scale);
    }
    SUBCASE("gaussian modulation hits the same targets") {
        const auto stats = simulate_quadratures(ModulationScheme::gaussian(1.0), {0.0, 0.2, 0.0},
                                                {Detection::Homodyne, 1.0, 0.0}, 200000, 11);
        CHECK(std::abs(stats.v_b - 2.0) < 5.0 * stats.std_error);
        CHECK(std::abs(stats.v_b_given_a - 1.0) < 5.0 * stats.std_error);
    }
    SUBCASE("deterministic under a fixed seed") {
        const LinkParams link{20.0, 0.2, 0.005};
        const DetectorParams det{Detection::Homodyne, 0.6, 0.05};
        const auto a = simulate_quadratures(psk8, link, det, 20000, 123);
        const auto b = simulate_quadratures(psk8, link, det, 20000, 123);
        const auto c = simulate_quadratures(psk8, link, det, 20000, 124);
        CHECK(a.v_b == b.v_b);
        CHECK(a.v_b_given_a == b.v_b_given_a);
        CHECK(a.v_b != c.v_b);
    }
    SUBCASE("standard error shrinks like sqrt(2) when samples double") {
        const LinkParams link{10.0, 0.2, 0.005};
        const DetectorParams det{Detection::Homodyne, 0.6, 0.05};
        const auto small = simulate_quadratures(psk8, link, det, 50000, 5);
        const auto big = simulate_quadratures(psk8, link, det, 100000, 5);
        const double ratio = small.std_error / big.std_error;
        CHECK(ratio > 1.3);
        CHECK(ratio < 1.55);
    }
    SUBCASE("sample floor enforced") {
        CHECK_THROWS_AS(simulate_quadratures(psk8, {0, 0.2, 0}, {Detection::Homodyne, 1.0, 0.0},
                                             100, 1),
                        std::invalid_argument);
    }
}
