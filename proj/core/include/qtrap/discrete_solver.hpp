#pragma once

// Second-order finite-difference Hamiltonians -d^2/dx^2 + V and their
// Hermitian eigensolution.
//
// Dirichlet operators live on interior grids (the stencil supplies the zero
// boundary values). Quasi-periodic operators live on periodic grids of [0, pi]:
// the row of x_0 couples to x_{n-1} with -e^{i alpha}/h^2 and the row of
// x_{n-1} to x_0 with -e^{-i alpha}/h^2, encoding g(0) = e^{i alpha} g(pi).

#include <cstddef>
#include <variant>
#include <vector>

#include "qtrap/core.hpp"

namespace qtrap::discrete_solver {

namespace potential {
struct Zero {};
/// x^2 + gamma/x^2; the grid must not contain x = 0.
struct Calogero {
    double gamma;
};
/// n(n-1)/x^2; the grid must not contain x = 0.
struct Centrifugal {
    int n;
};
/// Cell potential on [0, pi], sampled at x_j = j pi / N, j = 0..N. Both end
/// samples must vanish (supp V inside (0, pi)).
struct PeriodicCell {
    std::vector<double> samples;

    template <class F>
    static PeriodicCell from_function(F&& v, std::size_t cells) {
        PeriodicCell cell;
        cell.samples.resize(cells + 1);
        for (std::size_t j = 0; j <= cells; ++j)
            cell.samples[j] = v(kPi * static_cast<double>(j) / static_cast<double>(cells));
        return cell;
    }
    std::size_t intervals() const { return samples.empty() ? 0 : samples.size() - 1; }
    double min() const;
};
/// Values on the points of a specific grid; `valid[j] == false` marks points
/// where the potential is undefined (e.g. next to a node of a ground state).
struct Custom {
    std::vector<double> samples;
    std::vector<bool> valid;
};
}  // namespace potential

using PotentialSpec =
    std::variant<potential::Zero, potential::Calogero, potential::Centrifugal, potential::PeriodicCell, potential::Custom>;

/// Potential values on the stored points of `grid`. Throws DomainError if a
/// singular potential would be sampled at its singular point, if a cell
/// potential does not vanish at the cell ends, or if samples do not match.
std::vector<double> sample_potential(const PotentialSpec& v, const Grid& grid);

/// Hermitian tridiagonal matrix plus one corner pair.
class DiscreteOperator {
public:
    DiscreteOperator(Grid grid, BoundaryCondition bc, PotentialSpec potential, std::vector<double> diagonal,
                     std::vector<double> off_diagonal, cplx corner);

    const Grid& grid() const { return grid_; }
    const BoundaryCondition& bc() const { return bc_; }
    const PotentialSpec& potential() const { return potential_; }
    std::size_t size() const { return diagonal_.size(); }

    std::span<const double> diagonal() const { return diagonal_; }
    std::span<const double> off_diagonal() const { return off_diagonal_; }
    /// Entry (0, n-1); entry (n-1, 0) is its conjugate.
    cplx corner() const { return corner_; }
    bool is_real_symmetric() const { return corner_.imag() == 0.0; }

    cplx entry(std::size_t row, std::size_t col) const;
    /// Column-major dense copy.
    CVector dense() const;
    CVector apply(std::span<const cplx> v) const;
    WaveFunction apply(const WaveFunction& f) const;
    /// max |A - A^dagger| over the dense matrix.
    double hermiticity_defect() const;
    /// True if the operator commutes with the grid reflection (x -> a + b - x
    /// on interior grids, j -> -j mod n on periodic grids).
    bool reflection_symmetric() const;

private:
    Grid grid_;
    BoundaryCondition bc_;
    PotentialSpec potential_;
    std::vector<double> diagonal_;
    std::vector<double> off_diagonal_;
    cplx corner_;
};

/// Stencil (-1, 2, -1)/h^2 plus diag(V).
/// Dirichlet needs an interior grid; QuasiPeriodic needs a periodic grid on an
/// interval of length pi with n >= 3; GeneralU is not discretized (DomainError).
DiscreteOperator assemble(const Grid& grid, const PotentialSpec& potential, const BoundaryCondition& bc);

/// Grid reflection used for symmetry scores.
CVector reflect(const Grid& grid, std::span<const cplx> v);

/// k lowest eigenpairs, ascending, quadrature-orthonormal eigenvectors.
/// Inside numerically degenerate clusters, vectors are rotated to be even or
/// odd under the grid reflection (even first) when the operator has that
/// symmetry, otherwise ordered by the index of their largest component. Each
/// vector's largest component is made real and positive.
Spectrum eigensolve(const DiscreteOperator& op, std::size_t k);

/// Eigenvalues only.
std::vector<double> eigenvalues(const DiscreteOperator& op, std::size_t k);

struct ConvergenceRow {
    double h;
    double max_relative_error;
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    /// log(e_i / e_{i+1}) / log(h_i / h_{i+1}) for successive grids.
    std::vector<double> orders;
};

/// Max relative error |lambda - E| / max(|E|, 1) of the k lowest eigenvalues
/// against `oracle` on each grid (at least two, h strictly decreasing).
ConvergenceReport convergence_report(const PotentialSpec& potential, const BoundaryCondition& bc,
                                     const Spectrum& oracle, const std::vector<Grid>& grids, std::size_t k);

}  // namespace qtrap::discrete_solver
