#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "cvqkd/linalg.hpp"
#include "doctest.h"

using namespace cvqkd;

TEST_CASE("small matrix basics") {
    SmallMatrix a(2, 3);
    a(0, 0) = 1;
    a(0, 2) = 2;
    a(1, 1) = -3;
    const auto t = a.transposed();
    CHECK(t.rows() == 3);
    CHECK(t(2, 0) == 2.0);
    CHECK(t(1, 1) == -3.0);

    const auto id = SmallMatrix::identity(4);
    CHECK(id.trace() == 4.0);
    CHECK(id.determinant() == 1.0);

    SmallMatrix b(3, 2);
    b(0, 0) = 1;
    b(1, 0) = 2;
    b(2, 1) = 1;
    const auto p = a * b;
    CHECK(p.rows() == 2);
    CHECK(p.cols() == 2);
    CHECK(p(0, 0) == 1.0);
    CHECK(p(0, 1) == 2.0);
    CHECK(p(1, 0) == -6.0);
}

TEST_CASE("determinant with pivoting") {
    SmallMatrix m(3, 3);
    // singular pattern first
    CHECK(m.determinant() == 0.0);
    m(0, 1) = 2;
    m(1, 0) = 1;
    m(2, 2) = 5;
    CHECK(m.determinant() == doctest::Approx(-10.0).epsilon(1e-14));
}

TEST_CASE("direct sum and mode permutation") {
    auto a = SmallMatrix::identity(2);
    a *= 2.0;
    auto b = SmallMatrix::identity(4);
    b *= 3.0;
    const auto s = direct_sum(a, b);
    CHECK(s.rows() == 6);
    CHECK(s(0, 0) == 2.0);
    CHECK(s(5, 5) == 3.0);
    CHECK(s(0, 3) == 0.0);

    // 2 modes with distinct diagonals, swapped
    SmallMatrix m(4, 4);
    for (int i = 0; i < 4; ++i) m(i, i) = i + 1;
    m(0, 2) = m(2, 0) = 0.5;
    constexpr std::size_t order[] = {1, 0};
    const auto p = permute_modes(m, order);
    CHECK(p(0, 0) == 3.0);
    CHECK(p(2, 2) == 1.0);
    CHECK(p(0, 2) == 0.5);
}

TEST_CASE("characteristic polynomial (Faddeev-LeVerrier)") {
    SUBCASE("diagonal") {
        SmallMatrix m(3, 3);
        m(0, 0) = 1;
        m(1, 1) = 2;
        m(2, 2) = 3;
        const auto c = characteristic_polynomial(m);
        // (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6
        CHECK(c[0] == 1.0);
        CHECK(c[1] == doctest::Approx(-6.0).epsilon(1e-14));
        CHECK(c[2] == doctest::Approx(11.0).epsilon(1e-14));
        CHECK(c[3] == doctest::Approx(-6.0).epsilon(1e-14));
    }
    SUBCASE("rotation block has even polynomial") {
        const auto omega = symplectic_form(1);
        const auto c = characteristic_polynomial(omega);
        CHECK(c[1] == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(c[2] == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("real roots of low-degree monic polynomials") {
    SUBCASE("linear") {
        const std::array<double, 2> c{1.0, -4.0};
        const auto r = real_roots(c);
        CHECK(r[0] == doctest::Approx(4.0));
    }
    SUBCASE("quadratic with distant roots (cancellation-safe)") {
        // (x - 1e6)(x - 1e-6)
        const std::array<double, 3> c{1.0, -(1e6 + 1e-6), 1.0};
        const auto r = real_roots(c);
        CHECK(r[0] == doctest::Approx(1e6).epsilon(1e-12));
        CHECK(r[1] == doctest::Approx(1e-6).epsilon(1e-9));
    }
    SUBCASE("cubic") {
        // (x-1)(x-4)(x-9) = x^3 - 14x^2 + 49x - 36
        const std::array<double, 4> c{1.0, -14.0, 49.0, -36.0};
        const auto r = real_roots(c);
        CHECK(r[0] == doctest::Approx(9.0).epsilon(1e-12));
        CHECK(r[1] == doctest::Approx(4.0).epsilon(1e-12));
        CHECK(r[2] == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("cubic with a double root") {
        // (x-2)^2 (x-5) = x^3 - 9x^2 + 24x - 20
        const std::array<double, 4> c{1.0, -9.0, 24.0, -20.0};
        const auto r = real_roots(c);
        CHECK(r[0] == doctest::Approx(5.0).epsilon(1e-9));
        CHECK(r[1] == doctest::Approx(2.0).epsilon(1e-6));
        CHECK(r[2] == doctest::Approx(2.0).epsilon(1e-6));
    }
    SUBCASE("quartic") {
        // (x-1)(x-2)(x-3)(x-7) = x^4 - 13x^3 + 53x^2 - 83x + 42
        const std::array<double, 5> c{1.0, -13.0, 53.0, -83.0, 42.0};
        const auto r = real_roots(c);
        CHECK(r[0] == doctest::Approx(7.0).epsilon(1e-11));
        CHECK(r[1] == doctest::Approx(3.0).epsilon(1e-11));
        CHECK(r[2] == doctest::Approx(2.0).epsilon(1e-11));
        CHECK(r[3] == doctest::Approx(1.0).epsilon(1e-11));
    }
    SUBCASE("biquadratic") {
        // (x^2-1)(x^2-4)
        const std::array<double, 5> c{1.0, 0.0, -5.0, 0.0, 4.0};
        const auto r = real_roots(c);
        CHECK(r[0] == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(r[1] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r[2] == doctest::Approx(-1.0).epsilon(1e-12));
        CHECK(r[3] == doctest::Approx(-2.0).epsilon(1e-12));
    }
    SUBCASE("complex pair rejected") {
        const std::array<double, 3> c{1.0, 0.0, 1.0};  // x^2 + 1
        CHECK_THROWS_AS((void)real_roots(c), std::domain_error);
    }
}

TEST_CASE("random all-real cubics and quartics round-trip through the solver") {
    // Deterministic pseudo-random root sets, rebuilt from expanded coefficients.
    std::uint64_t state = 0x9e3779b97f4a7c15ull;
    auto next = [&state]() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return 0.5 + 4.0 * (double(state % 10000) / 10000.0);  // roots in [0.5, 4.5)
    };
    for (int trial = 0; trial < 200; ++trial) {
        double r0 = next(), r1 = next(), r2 = next(), r3 = next();
        std::array<double, 5> c{
            1.0,
            -(r0 + r1 + r2 + r3),
            r0 * r1 + r0 * r2 + r0 * r3 + r1 * r2 + r1 * r3 + r2 * r3,
            -(r0 * r1 * r2 + r0 * r1 * r3 + r0 * r2 * r3 + r1 * r2 * r3),
            r0 * r1 * r2 * r3};
        const auto roots = real_roots(c);
        std::array<double, 4> expected{r0, r1, r2, r3};
        std::sort(expected.begin(), expected.end(), std::greater<>());
        for (int i = 0; i < 4; ++i)
            CHECK(roots[i] == doctest::Approx(expected[i]).epsilon(1e-7));
    }
}
