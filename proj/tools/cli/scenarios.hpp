#pragma once

// Problem setups shared by the commands and the verify suite.

#include <cmath>

#include "qtrap/closed_form.hpp"
#include "qtrap/core.hpp"
#include "qtrap/discrete_solver.hpp"

namespace qtrap::cli::scenario {

/// Normalized Gaussian exp(-(x-x0)^2/(4 sigma^2) + i p0 x) on the grid,
/// zeroed outside `keep` (strictly inside its ends).
inline WaveFunction gaussian(const Grid& grid, double x0, double sigma, double p0, const Interval& keep) {
    CVector v(grid.size(), 0.0);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double x = grid.point(j);
        if (x <= keep.a() || x >= keep.b()) continue;
        const double d = (x - x0) / sigma;
        v[j] = std::exp(-0.25 * d * d) * std::polar(1.0, p0 * x);
    }
    return WaveFunction(grid, std::move(v)).normalize();
}

inline WaveFunction gaussian(const Grid& grid, double x0, double sigma, double p0) {
    return gaussian(grid, x0, sigma, p0, grid.interval());
}

/// Packet centered in `cell`, width a tenth of the cell, momentum 3, vanishing
/// at and beyond the cell ends.
inline WaveFunction cell_packet(const Grid& grid, const Interval& cell) {
    return gaussian(grid, 0.5 * (cell.a() + cell.b()), 0.1 * cell.length(), 3.0, cell);
}

inline Grid well_grid(std::size_t points) { return Grid::interior(Interval(0.0, kPi), points); }

/// Cells c-1, c, c+1 of the multitrap H_q with per_cell points per cell.
inline Grid multitrap_window(double q, long cell, std::size_t per_cell) {
    const double w = kPi / q;
    return Grid::interior(Interval(static_cast<double>(cell - 1) * w, static_cast<double>(cell + 2) * w),
                          3 * per_cell - 1);
}

/// Symmetric interior grid of (-L, L); even point counts keep x = 0 off the grid.
inline Grid mirrored_grid(double length, std::size_t points) {
    return Grid::interior(Interval(-length, length), points);
}

/// Interior grid of [0, L] for the half-line Calogero problem.
inline Grid half_line_grid(double length, std::size_t points) {
    return Grid::interior(Interval(0.0, length), points);
}

/// height * cos^2(2 (x - pi/2)) for |x - pi/2| < pi/4, zero elsewhere.
inline discrete_solver::potential::PeriodicCell bump_cell(double height, std::size_t per_cell) {
    return discrete_solver::potential::PeriodicCell::from_function(
        [height](double x) {
            const double d = x - 0.5 * kPi;
            if (std::abs(d) >= 0.25 * kPi) return 0.0;
            const double c = std::cos(2.0 * d);
            return height * c * c;
        },
        per_cell);
}

inline discrete_solver::potential::PeriodicCell zero_cell(std::size_t per_cell) {
    return discrete_solver::potential::PeriodicCell::from_function([](double) { return 0.0; }, per_cell);
}

}  // namespace qtrap::cli::scenario
