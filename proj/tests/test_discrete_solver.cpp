#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "qtrap/closed_form.hpp"
#include "qtrap/discrete_solver.hpp"
#include "support.hpp"

using namespace qtrap;
using namespace qtrap::discrete_solver;

namespace {

// Exact eigenvalues of the periodic (-1, 2, -1)/h^2 stencil with a quasi-periodic twist:
// plane waves exp(i k x_j) with k = 2m + alpha/pi.
std::vector<double> discrete_twisted(std::size_t n, double alpha, std::size_t k) {
    const double h = kPi / static_cast<double>(n);
    std::vector<double> all;
    const long half = static_cast<long>(n) / 2;
    for (long m = -half; m < static_cast<long>(n) - half; ++m) {
        const double s = std::sin((2.0 * m + alpha / kPi) * h / 2.0);
        all.push_back(4.0 / (h * h) * s * s);
    }
    std::sort(all.begin(), all.end());
    all.resize(k);
    return all;
}

double vector_norm(const CVector& v) {
    double s = 0.0;
    for (auto z : v) s += std::norm(z);
    return std::sqrt(s);
}

}  // namespace

TEST_CASE("Dirichlet stencil") {
    const Grid grid = Grid::interior(Interval(0.0, kPi), 3);
    const auto op = assemble(grid, potential::Zero{}, Dirichlet{});
    const double h2 = (kPi / 4) * (kPi / 4);
    for (std::size_t r = 0; r < 3; ++r) {
        for (std::size_t c = 0; c < 3; ++c) {
            const double expect = r == c ? 2.0 / h2 : (r + 1 == c || c + 1 == r ? -1.0 / h2 : 0.0);
            CHECK(std::abs(op.entry(r, c) - expect) <= 1e-12);
        }
    }
    CHECK(op.is_real_symmetric());
    CHECK(op.hermiticity_defect() == 0.0);
}

TEST_CASE("quasi-periodic stencil adds a corner pair") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const double alpha = test::uniform(rng, 0.0, kTwoPi);
        const Grid grid = Grid::periodic(Interval(0.0, kPi), 16);
        const auto op = assemble(grid, potential::Zero{}, QuasiPeriodic(alpha));
        const double h2 = grid.spacing() * grid.spacing();
        CHECK(std::abs(std::abs(op.entry(0, 15)) - 1.0 / h2) <= 1e-12);
        CHECK(std::abs(std::abs(op.entry(15, 0)) - 1.0 / h2) <= 1e-12);
        for (std::size_t j = 0; j < 16; ++j) CHECK(std::abs(op.entry(j, j) - 2.0 / h2) <= 1e-12);
        for (std::size_t j = 0; j + 1 < 16; ++j) CHECK(std::abs(op.entry(j, j + 1) + 1.0 / h2) <= 1e-12);
        CHECK(op.hermiticity_defect() <= 1e-12);
    }
}

TEST_CASE("assembly errors") {
    CHECK_THROWS_AS(assemble(Grid::interior(Interval(-1.0, 1.0), 5), potential::Calogero{2.0}, Dirichlet{}),
                    DomainError);
    CHECK_THROWS_AS(assemble(Grid::interior(Interval(-1.0, 1.0), 5), potential::Centrifugal{2}, Dirichlet{}),
                    DomainError);
    const auto bad_cell = potential::PeriodicCell::from_function([](double) { return 1.0; }, 32);
    CHECK_THROWS_AS(assemble(Grid::periodic(Interval(0.0, kPi), 32), bad_cell, QuasiPeriodic(0.0)), DomainError);
    CHECK_THROWS_AS(assemble(Grid::interior(Interval(0.0, kPi), 8), potential::Zero{},
                             GeneralU{UnitaryMatrix2::identity()}),
                    DomainError);
    CHECK_THROWS_AS(assemble(Grid::interior(Interval(0.0, 2.0), 8), potential::Zero{}, QuasiPeriodic(0.0)),
                    DomainError);
    const auto op = assemble(Grid::interior(Interval(0.0, kPi), 8), potential::Zero{}, Dirichlet{});
    CHECK_THROWS_AS(eigensolve(op, 9), DomainError);
}

TEST_CASE("Dirichlet eigenvalues match the discrete formula") {
    const Grid grid = Grid::interior(Interval(0.0, kPi), 99);
    const double h = grid.spacing();
    const auto s = eigensolve(assemble(grid, potential::Zero{}, Dirichlet{}), 10);
    for (std::size_t k = 0; k < 10; ++k) {
        const double sn = std::sin((k + 1.0) * h / 2.0);
        CHECK(std::abs(s.eigenvalues[k] - 4.0 / (h * h) * sn * sn) <= 1e-10 * (k + 1.0) * (k + 1.0));
    }
    CHECK(std::abs(s.eigenvalues[0] - 1.0) <= 1e-4);
    CHECK(s.orthonormality_defect() <= 1e-8);
    for (std::size_t k = 0; k < 10; ++k) CHECK(s.labels[k] == static_cast<long>(k));
}

TEST_CASE("quasi-periodic eigenvalues") {
    SUBCASE("alpha = pi/2 approaches 1/4") {
        const auto lambda = eigenvalues(assemble(Grid::periodic(Interval(0.0, kPi), 2000), potential::Zero{},
                                                 QuasiPeriodic(kPi / 2)),
                                        3);
        CHECK(std::abs(lambda[0] - 0.25) <= 1e-3 * 0.25);
    }
    SUBCASE("exact discrete spectrum for random alpha") {
        std::mt19937_64 rng(5);
        for (int trial = 0; trial < 8; ++trial) {
            const double alpha = test::uniform(rng, 0.0, kTwoPi);
            const auto got =
                eigenvalues(assemble(Grid::periodic(Interval(0.0, kPi), 64), potential::Zero{}, QuasiPeriodic(alpha)), 12);
            const auto want = discrete_twisted(64, alpha, 12);
            for (std::size_t i = 0; i < 12; ++i) CHECK(std::abs(got[i] - want[i]) <= 1e-9 * std::max(1.0, want[i]));
        }
    }
}

TEST_CASE("plane rotator pairs are split into even and odd vectors") {
    const Grid grid = Grid::periodic(Interval(0.0, kPi), 128);
    const auto s = eigensolve(assemble(grid, potential::Zero{}, QuasiPeriodic(0.0)), 9);
    CHECK(std::abs(s.eigenvalues[0]) <= 1e-9);
    for (std::size_t i = 1; i + 1 < 9; i += 2) {
        CHECK(std::abs(s.eigenvalues[i] - s.eigenvalues[i + 1]) <= 1e-9 * s.eigenvalues[i]);
        const auto& even = s.vectors[i];
        const auto& odd = s.vectors[i + 1];
        const CVector re = reflect(grid, even.values());
        const CVector ro = reflect(grid, odd.values());
        double de = 0.0, dodd = 0.0;
        for (std::size_t j = 0; j < grid.size(); ++j) {
            de = std::max(de, std::abs(re[j] - even[j]));
            dodd = std::max(dodd, std::abs(ro[j] + odd[j]));
        }
        CHECK(de <= 1e-8);
        CHECK(dodd <= 1e-8);
    }
    CHECK(s.orthonormality_defect() <= 1e-8);
}

TEST_CASE("largest component is real and positive") {
    const auto s = eigensolve(assemble(Grid::periodic(Interval(0.0, kPi), 64), potential::Zero{}, QuasiPeriodic(1.1)), 6);
    for (const auto& v : s.vectors) {
        std::size_t best = 0;
        for (std::size_t j = 0; j < v.size(); ++j)
            if (std::abs(v[j]) > std::abs(v[best]) + 1e-12) best = j;
        CHECK(std::abs(v[best].imag()) <= 1e-12);
        CHECK(v[best].real() > 0.0);
    }
}

TEST_CASE("Calogero on the half line") {
    const auto lambda =
        eigenvalues(assemble(Grid::interior(Interval(0.0, 12.0), 2400), potential::Calogero{2.0}, Dirichlet{}), 2);
    CHECK(std::abs(lambda[0] - 5.0) <= 1e-2 * 5.0);
    CHECK(std::abs(lambda[1] - 9.0) <= 1e-2 * 9.0);
}

TEST_CASE("mirrored Calogero levels come in pairs") {
    const Grid grid = Grid::interior(Interval(-12.0, 12.0), 2400);
    const auto s = eigensolve(assemble(grid, potential::Calogero{2.0}, Dirichlet{}), 6);
    for (std::size_t j = 0; j < 6; j += 2) {
        CHECK(std::abs(s.eigenvalues[j] - s.eigenvalues[j + 1]) <= 1e-6 * s.eigenvalues[j]);
        CHECK(std::abs(s.eigenvalues[j] - (5.0 + 4.0 * static_cast<double>(j / 2))) <= 1e-2 * s.eigenvalues[j]);
    }
    CHECK(s.orthonormality_defect() <= 1e-8);
}

TEST_CASE("projection onto the positive half line nearly commutes with the mirrored operator") {
    // The only coupling across x = 0 is -f(-h/2)/h^2 with f ~ x^2 there, so the
    // quadrature norm of the commutator residual shrinks like h^{1/2}.
    auto residual = [](std::size_t points) {
        const Grid grid = Grid::interior(Interval(-12.0, 12.0), points);
        const auto op = assemble(grid, potential::Calogero{2.0}, Dirichlet{});
        const auto s = eigensolve(op, 2);
        double worst = 0.0;
        for (std::size_t j = 0; j < 2; ++j) {
            CVector plus(grid.size(), 0.0);
            for (std::size_t i = 0; i < grid.size(); ++i)
                if (grid.point(i) > 0.0) plus[i] = s.vectors[j][i];
            CVector r = op.apply(plus);
            for (std::size_t i = 0; i < r.size(); ++i) r[i] -= s.eigenvalues[j] * plus[i];
            worst = std::max(worst, vector_norm(r) / (s.eigenvalues[j] * vector_norm(plus)));
        }
        return worst;
    };
    const double coarse = residual(1200);
    const double fine = residual(4800);
    CHECK(coarse <= 0.05);
    CHECK(std::log(coarse / fine) / std::log(4.0) == doctest::Approx(0.5).epsilon(0.3));
}

TEST_CASE("convergence orders") {
    const auto grids = [](bool periodic) {
        std::vector<Grid> g;
        for (std::size_t n : {100, 200, 400, 800})
            g.push_back(periodic ? Grid::periodic(Interval(0.0, kPi), n) : Grid::interior(Interval(0.0, kPi), n - 1));
        return g;
    };
    SUBCASE("Dirichlet") {
        const auto rep = convergence_report(potential::Zero{}, Dirichlet{}, closed_form::infinite_well_spectrum(4),
                                            grids(false), 5);
        for (double p : rep.orders) CHECK(std::abs(p - 2.0) <= 0.3);
    }
    SUBCASE("quasi-periodic alpha = 0") {
        const auto rep = convergence_report(potential::Zero{}, QuasiPeriodic(0.0),
                                            closed_form::h_alpha_spectrum(0.0, {-3, 3}), grids(true), 5);
        for (double p : rep.orders) CHECK(std::abs(p - 2.0) <= 0.3);
    }
    SUBCASE("Calogero errors decrease") {
        std::vector<Grid> g;
        for (std::size_t n : {300, 600, 1200}) g.push_back(Grid::interior(Interval(0.0, 12.0), n));
        const auto rep = convergence_report(potential::Calogero{2.0}, Dirichlet{},
                                            closed_form::calogero_spectrum(closed_form::CalogeroParams(2.0), 1), g, 2);
        for (std::size_t i = 1; i < rep.rows.size(); ++i)
            CHECK(rep.rows[i].max_relative_error < rep.rows[i - 1].max_relative_error);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(convergence_report(potential::Zero{}, Dirichlet{}, closed_form::infinite_well_spectrum(1),
                                           grids(false), 5),
                        DomainError);
        auto g = grids(false);
        std::reverse(g.begin(), g.end());
        CHECK_THROWS_AS(
            convergence_report(potential::Zero{}, Dirichlet{}, closed_form::infinite_well_spectrum(4), g, 5),
            DomainError);
    }
}

TEST_CASE("operator apply matches the dense matrix") {
    std::mt19937_64 rng(17);
    const auto cell = potential::PeriodicCell::from_function([](double x) { return std::sin(x) * std::sin(x); }, 24);
    const Grid grid = Grid::periodic(Interval(0.0, kPi), 24);
    const auto op = assemble(grid, cell, QuasiPeriodic(2.3));
    const CVector dense = op.dense();
    const WaveFunction v = test::random_samples(grid, rng);
    const CVector av = op.apply(v.values());
    for (std::size_t r = 0; r < 24; ++r) {
        cplx s = 0.0;
        for (std::size_t c = 0; c < 24; ++c) s += dense[c * 24 + r] * v[c];
        CHECK(std::abs(s - av[r]) <= 1e-10 * std::abs(dense[0]));
    }
}
