#pragma once

// Cell decomposition of L^2(R) into fibers over [0, pi] indexed by alpha,
// fibered Hamiltonians -d^2/dx^2 + V with quasi-periodic conditions, band
// structure and fiber-wise evolution.
//
// Orientation: the fiber g_alpha(x) = sum_k e^{-ik alpha} f(x + k pi)
// satisfies g_alpha(pi) = e^{i alpha} g_alpha(0). Boundary conditions written
// as g(0) = e^{i a} g(pi) (QuasiPeriodic) therefore use a = boundary_alpha(alpha)
// = 2 pi - alpha (mod 2 pi).

#include <cstddef>
#include <vector>

#include "qtrap/closed_form.hpp"
#include "qtrap/core.hpp"
#include "qtrap/discrete_solver.hpp"

namespace qtrap::direct_integral {

/// alpha -> 2 pi - alpha reduced into [0, 2 pi).
double boundary_alpha(double fiber_alpha);

/// Interior grid of [first_cell pi, end_cell pi] with spacing pi/per_cell, so
/// that every cell boundary k pi is a grid point.
Grid line_grid(long first_cell, long end_cell, std::size_t per_cell);

/// Periodic grid of [0, pi] with per_cell points x_j = j pi/per_cell.
Grid fiber_grid(std::size_t per_cell);

struct FiberDecomposition {
    /// alpha_m = 2 pi m / M.
    std::vector<double> alphas;
    /// Fibers on fiber_grid, carrying g(0) and g(pi) as endpoint values.
    std::vector<WaveFunction> fibers;
    /// Cells k whose samples of the source are not all zero.
    closed_form::IntegerRange source_window;
    /// Line grid of the source (reconstruction target).
    Grid line;
    /// Endpoint values and centered-difference derivatives of each fiber.
    std::vector<BoundaryTrace> traces;

    std::size_t size() const { return fibers.size(); }
};

/// Fibers of f. The grid of f must be a line_grid; f must vanish at both grid
/// ends (DomainError otherwise). M >= 2.
FiberDecomposition decompose(const WaveFunction& f, std::size_t m);

/// f(x + k pi) = (1/M) sum_alpha e^{ik alpha} g_alpha(x) on the stored line
/// grid. Throws DomainError when the line grid spans more than M cells
/// (cells k and k + M would alias).
WaveFunction reconstruct(const FiberDecomposition& dec);

/// max over fibers of boundary_residual(trace, boundary_alpha(alpha)).
double fiber_boundary_residual(const FiberDecomposition& dec);

/// assemble(fiber grid, V, QuasiPeriodic(alpha)) with alpha in the
/// g(0) = e^{i alpha} g(pi) form; the grid has V.intervals() points.
discrete_solver::DiscreteOperator fiber_hamiltonian(const discrete_solver::potential::PeriodicCell& v, double alpha);

struct BandTable {
    std::vector<double> alphas;
    /// energies[i][j]: j-th lowest fiber eigenvalue at alphas[i].
    std::vector<std::vector<double>> energies;
};

/// k lowest eigenvalues of fiber_hamiltonian(V, alpha) for each alpha, in parallel.
BandTable band_structure(const discrete_solver::potential::PeriodicCell& v, const std::vector<double>& alphas,
                         std::size_t k);

/// Largest ratio |E_j(alpha_{i+1}) - E_j(alpha_i)| / (C |alpha_{i+1} - alpha_i|)
/// over adjacent samples, with the slope bound C = 1.5 (2/pi) sqrt(E - v_min)
/// (E the larger of the two values). Bands are continuous when this is <= 1.
double band_continuity_ratio(const BandTable& table, double v_min);

struct UnionWitness {
    double energy;
    bool found;
    long n;
    double alpha;
};

/// For each E >= 0, the (n, alpha) with (2n + alpha/pi)^2 = E, alpha in [0, 2 pi);
/// negative E are reported as not found.
std::vector<UnionWitness> spectrum_union_check(const std::vector<double>& energies);

/// Evolves every fiber for time t under fiber_hamiltonian(V, boundary_alpha(alpha))
/// by a spectral sum over its `modes` lowest eigenvectors. Conjugate fibers
/// (alpha, 2 pi - alpha) share one eigensolve. PreconditionError if a fiber
/// loses more than 1e-10 of its mass to the truncated basis.
FiberDecomposition evolve_fibers(const FiberDecomposition& dec, const discrete_solver::potential::PeriodicCell& v,
                                 double t, std::size_t modes);

}  // namespace qtrap::direct_integral
