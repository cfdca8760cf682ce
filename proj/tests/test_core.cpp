#include <cmath>
#include <random>

#include "doctest.h"
#include "qtrap/core.hpp"
#include "support.hpp"

using namespace qtrap;
using qtrap::test::random_samples;
using qtrap::test::sampled;

namespace {

const Grid kWell = Grid::interior(Interval(0.0, kPi), 1999);

WaveFunction ground_state() {
    return sampled(kWell, [](double x) { return std::sqrt(2.0 / kPi) * std::sin(x); });
}

}  // namespace

TEST_CASE("interval and grid invariants") {
    CHECK_THROWS_AS(Interval(1.0, 1.0), DomainError);
    CHECK_THROWS_AS(Interval(2.0, 1.0), DomainError);
    CHECK_THROWS_AS(Interval(0.0, INFINITY), DomainError);
    CHECK(Interval::half_line(0.0).is_half_line());
    CHECK_THROWS_AS(Grid::interior(Interval::half_line(0.0), 10), DomainError);

    const Grid g = Grid::interior(Interval(0.0, kPi), 3);
    CHECK(g.spacing() == doctest::Approx(kPi / 4).epsilon(1e-15));
    CHECK(g.point(0) == doctest::Approx(kPi / 4).epsilon(1e-15));
    CHECK(g.point(2) == doctest::Approx(3 * kPi / 4).epsilon(1e-15));

    const Grid p = Grid::periodic(Interval(0.0, kPi), 4);
    CHECK(p.point(0) == 0.0);
    CHECK(p.spacing() == doctest::Approx(kPi / 4).epsilon(1e-15));
}

TEST_CASE("reduce_angle maps into [0, 2 pi)") {
    CHECK(reduce_angle(0.0) == 0.0);
    CHECK(reduce_angle(-kPi / 2) == doctest::Approx(1.5 * kPi).epsilon(1e-15));
    CHECK(reduce_angle(kTwoPi) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(reduce_angle(5 * kPi) == doctest::Approx(kPi).epsilon(1e-14));
}

TEST_CASE("inner product oracles") {
    const WaveFunction psi0 = ground_state();
    CHECK(std::abs(inner_product(psi0, psi0) - 1.0) <= 1e-10);

    const WaveFunction s1 = sampled(kWell, [](double x) { return std::sin(x); });
    const WaveFunction s2 = sampled(kWell, [](double x) { return std::sin(2 * x); });
    CHECK(std::abs(inner_product(s1, s2)) <= 1e-10);

    const WaveFunction other = sampled(Grid::interior(Interval(0.0, kPi), 99), [](double x) { return x; });
    CHECK_THROWS_AS(inner_product(psi0, other), StructuralError);
}

TEST_CASE("inner product is sesquilinear and conjugate symmetric") {
    std::mt19937_64 rng(11);
    const Grid grid = Grid::interior(Interval(-1.0, 2.0), 257);
    for (int trial = 0; trial < 20; ++trial) {
        const WaveFunction f = random_samples(grid, rng);
        const WaveFunction g = random_samples(grid, rng);
        const WaveFunction h = random_samples(grid, rng);
        const cplx a = test::random_complex(rng);
        const cplx b = test::random_complex(rng);

        const cplx lhs = inner_product(f, a * g + b * h);
        const cplx rhs = a * inner_product(f, g) + b * inner_product(f, h);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));

        const cplx left = inner_product(a * f, g);
        CHECK(std::abs(left - std::conj(a) * inner_product(f, g)) <= 1e-12 * std::max(1.0, std::abs(left)));

        CHECK(std::abs(inner_product(f, g) - std::conj(inner_product(g, f))) <= 1e-13);
    }
}

TEST_CASE("normalize yields unit quadrature norm") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const Grid grid = Grid::interior(Interval(0.0, test::uniform(rng, 0.5, 10.0)), 10 + rng() % 500);
        const WaveFunction f = random_samples(grid, rng).normalize();
        CHECK(std::abs(f.squared_norm() - 1.0) <= 1e-10);
        CHECK(f.normalized());
        CHECK_NOTHROW(f.require_normalized());
    }
    CHECK_THROWS_AS(WaveFunction(kWell, CVector(kWell.size(), 0.0)).normalize(), DomainError);
    CHECK_THROWS_AS(sampled(kWell, [](double) { return 3.0; }).require_normalized(), PreconditionError);
}

TEST_CASE("restrict_indicator") {
    const WaveFunction psi0 = ground_state();

    SUBCASE("half the well holds half the mass") {
        const WaveFunction left = restrict_indicator(psi0, Interval(0.0, kPi / 2));
        CHECK(std::abs(left.squared_norm() - 0.5) <= 1e-8);
        CHECK(std::abs(squared_norm_on(psi0, Interval(0.0, kPi / 2)) - 0.5) <= 1e-8);
    }
    SUBCASE("function already inside the region is unchanged") {
        const WaveFunction f = restrict_indicator(psi0, Interval(0.0, 1.0));
        const WaveFunction g = restrict_indicator(f, Interval(0.0, 1.0));
        CHECK(max_abs_difference(f, g) == 0.0);
    }
    SUBCASE("idempotent on random data and regions") {
        std::mt19937_64 rng(3);
        for (int trial = 0; trial < 20; ++trial) {
            const double a = test::uniform(rng, 0.0, 2.0);
            const Interval region(a, a + test::uniform(rng, 0.1, 2.0));
            const WaveFunction once = restrict_indicator(random_samples(kWell, rng), region);
            const WaveFunction twice = restrict_indicator(once, region);
            CHECK(max_abs_difference(once, twice) == 0.0);
            CHECK(once.squared_norm() == twice.squared_norm());
        }
    }
    SUBCASE("disjoint region gives the zero function") {
        const WaveFunction z = restrict_indicator(psi0, Interval(4.0, 5.0));
        CHECK(z.squared_norm() == 0.0);
        for (auto v : z.values()) CHECK(v == cplx(0.0));
    }
}

TEST_CASE("boundary trace of grid samples") {
    // f = x^2 (pi - x): f(0) = f(pi) = 0, f'(0) = 0, f'(pi) = -pi^2.
    const Grid grid = Grid::interior(Interval(0.0, kPi), 4000);
    const WaveFunction f = sampled(grid, [](double x) { return x * x * (kPi - x); });
    const BoundaryTrace t = trace_of(f);
    CHECK(std::abs(t.value_a) == 0.0);
    CHECK(std::abs(t.deriv_a) <= 1e-5);
    CHECK(std::abs(t.deriv_b + kPi * kPi) <= 1e-5);
}

TEST_CASE("exponential sums differentiate exactly") {
    const ExponentialSum f = ExponentialSum::single({1.0, 2.0}, {0.3, -1.0}) + ExponentialSum::sine(2.0, 3.0);
    for (double x : {0.0, 0.7, 2.5}) {
        const cplx s(0.3, -1.0);
        const cplx expect = cplx(1.0, 2.0) * std::exp(s * x) + 2.0 * std::sin(3.0 * x);
        const cplx d1 = cplx(1.0, 2.0) * s * std::exp(s * x) + 6.0 * std::cos(3.0 * x);
        const cplx d2 = cplx(1.0, 2.0) * s * s * std::exp(s * x) - 18.0 * std::sin(3.0 * x);
        CHECK(std::abs(f.value(x) - expect) <= 1e-13);
        CHECK(std::abs(f.derivative(x) - d1) <= 1e-12);
        CHECK(std::abs(f.second_derivative(x) - d2) <= 1e-12);
    }
}

TEST_CASE("unitary 2x2 matrices") {
    CHECK_NOTHROW(UnitaryMatrix2::minus_identity());
    ComplexMatrix2 m = ComplexMatrix2::identity();
    m(0, 1) = 0.1;
    CHECK_THROWS_AS(UnitaryMatrix2{m}, DomainError);

    // Random rotation-phase products stay unitary.
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        const double th = test::uniform(rng, 0, kTwoPi);
        const double ph = test::uniform(rng, 0, kTwoPi);
        ComplexMatrix2 r;
        r(0, 0) = std::cos(th);
        r(0, 1) = -std::sin(th) * std::polar(1.0, ph);
        r(1, 0) = std::sin(th);
        r(1, 1) = std::cos(th) * std::polar(1.0, ph);
        CHECK(r.unitarity_defect() <= 1e-14);
        CHECK(std::abs(std::abs(r.determinant()) - 1.0) <= 1e-14);
        CHECK_NOTHROW(UnitaryMatrix2{r});
    }
}
