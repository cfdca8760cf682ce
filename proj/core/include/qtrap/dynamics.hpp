#pragma once

// Unitary evolution (spectral sums and Crank-Nicolson), confinement checks,
// comparison of inequivalent extensions, barrier detection and the map from a
// generalized ground state to its Hamiltonian.

#include <cstddef>
#include <functional>
#include <memory>
#include <variant>
#include <vector>

#include "qtrap/closed_form.hpp"
#include "qtrap/core.hpp"
#include "qtrap/discrete_solver.hpp"

namespace qtrap::dynamics {

struct SpectralSum {};
struct CrankNicolson {
    double dt;
};
using Method = std::variant<SpectralSum, CrankNicolson>;

/// Immutable propagator; evolve() may be called concurrently.
class Propagator {
public:
    /// Spectral sum over discrete eigenvectors. Throws PreconditionError if the
    /// vectors are missing or not orthonormal within 1e-9.
    static Propagator spectral(Spectrum basis);
    /// Crank-Nicolson for a Hermitian operator with step dt > 0.
    static Propagator crank_nicolson(discrete_solver::DiscreteOperator op, double dt);

    const Method& method() const { return method_; }
    const Grid& grid() const;
    /// Eigenbasis of a spectral propagator (empty for Crank-Nicolson).
    const Spectrum& basis() const { return basis_; }

    struct Stepper;  // Crank-Nicolson factorization

private:
    Propagator() = default;
    Method method_{SpectralSum{}};
    Spectrum basis_;
    std::shared_ptr<const Stepper> stepper_;

    friend WaveFunction evolve(const Propagator&, const WaveFunction&, double);
};

/// psi(t) = exp(-iHt) psi0.
///
/// Spectral: sum_n e^{-i E_n t} <phi_n, psi0> phi_n, requiring the basis to
/// capture all but 1e-10 of the mass of psi0. Crank-Nicolson: ceil(t/dt)
/// steps of (1 + iH dt'/2) psi_{k+1} = (1 - iH dt'/2) psi_k with dt' = t/steps.
/// psi0 must be normalized within 1e-8 and live on the propagator's grid.
WaveFunction evolve(const Propagator& prop, const WaveFunction& psi0, double t);

struct LeakageReport {
    std::vector<double> times;
    std::vector<double> inside_mass;
    std::vector<double> leaked_mass;
};

/// Mass inside `cell` and outside it at each time. The samples of psi0 at
/// nodes outside the closed cell may carry at most 1e-12 of mass
/// (PreconditionError otherwise).
LeakageReport leakage(const Propagator& prop, const WaveFunction& psi0, const Interval& cell,
                      const std::vector<double>& times);

/// Quadrature-orthonormal samples of the infinite-well modes sin((m+1)x),
/// m < count, on an interior grid of [0, pi]. count <= grid.size().
Spectrum well_basis(const Grid& grid, std::size_t count);

/// Cell c of the multitrap H_q: (c pi/q, (c+1) pi/q).
Interval multitrap_cell(const closed_form::MultitrapParams& params, long cell);

/// Spectral propagator for H_q = -d^2/dx^2 - q^2 on an interior grid whose
/// cell boundaries k pi/q inside the interval are grid points: the union of
/// the per-cell Dirichlet sine bases with energies (m q)^2 - q^2.
Propagator multitrap_propagator(const closed_form::MultitrapParams& params, const Grid& grid);

struct ExtensionComparison {
    double distance;
    /// | ||psi(t)|| - 1 | for each evolution.
    double dirichlet_norm_drift;
    double alpha_norm_drift;
};

/// Evolves psi0 on [0, pi] under the Dirichlet extension and under H_alpha
/// (quasi-periodic, g(0) = e^{i alpha} g(pi)), both by complete spectral sums
/// on a periodic grid. Interior-grid input is moved to the periodic grid with
/// x = 0 taking the left endpoint value.
ExtensionComparison compare_extensions(const WaveFunction& psi0, double alpha, double t);

/// L^2 distance of the two evolutions of compare_extensions.
double extension_divergence(const WaveFunction& psi0, double alpha, double t);

/// Zeros x0 of phi whose fitted vanishing exponent beta (least squares of
/// log|phi| against log|x - x0| over the 4 nearest samples on each side)
/// satisfies beta >= threshold_exponent - 0.1. Zeros are samples with
/// |phi| <= 1e-12 max|phi| or sign changes. Throws DomainError on all-zero phi.
std::vector<double> detect_barriers(const WaveFunction& phi, double threshold_exponent = 0.5);

/// Source of phi'' for hamiltonian_from_ground_state.
struct AnalyticDerivative {
    std::function<double(double)> second;
};
struct FiniteDifferenceDerivative {};
using DerivativeSource = std::variant<AnalyticDerivative, FiniteDifferenceDerivative>;

/// V = phi''/phi on the grid of phi (zero ground-state energy). Points within
/// 2h of a zero of phi are masked, as are grid ends for finite differences.
/// Throws DomainError if phi vanishes identically.
discrete_solver::potential::Custom hamiltonian_from_ground_state(const WaveFunction& phi,
                                                                 const DerivativeSource& derivative);

/// max over unmasked points of |-phi'' + V phi| / max|phi|, with phi'' by
/// the second difference (endpoint data as on the grid).
double ground_state_residual(const WaveFunction& phi, const discrete_solver::potential::Custom& v);

}  // namespace qtrap::dynamics
