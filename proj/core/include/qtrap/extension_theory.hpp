#pragma once

// Self-adjoint extensions of -d^2/dx^2 on [0, pi].
//
// The minimal operator (zero value and derivative at both ends) has deficiency
// indices (2, 2); its extensions H_U are labelled by U in U(2) through
// W = U I : N_- -> N_+, with I psi_-^k = psi_+^k and
//   W psi_-^k = sum_j U_jk psi_+^j.
// Boundary conditions follow g(0) = e^{i alpha} g(pi), g'(0) = e^{i alpha} g'(pi).

#include <array>
#include <string>
#include <variant>

#include "qtrap/core.hpp"

namespace qtrap::extension_theory {

/// Deficiency vectors: psi_+^{1,2} solve -psi'' = 2i psi, psi_-^{1,2} solve
/// -psi'' = -2i psi on [0, pi].
struct DeficiencyBasis {
    ExponentialSum psi_plus_1;
    ExponentialSum psi_plus_2;
    ExponentialSum psi_minus_1;
    ExponentialSum psi_minus_2;

    const ExponentialSum& plus(int k) const { return k == 0 ? psi_plus_1 : psi_plus_2; }
    const ExponentialSum& minus(int k) const { return k == 0 ? psi_minus_1 : psi_minus_2; }
};

/// Normalization constants (e^{2pi}-1)^{-1/2} and (1-e^{-2pi})^{-1/2}; each
/// vector then has L^2 norm 1/sqrt(2) on [0, pi].
DeficiencyBasis deficiency_basis();

/// The same vectors scaled by sqrt(2): an orthonormal basis of N_+ and of N_-.
DeficiencyBasis orthonormalized_deficiency_basis();

/// Element g = f + w_- + W w_- of D(H_U) together with H_U g.
struct ExtensionElement {
    WaveFunction f;
    std::array<cplx, 2> w_minus;
    /// Deficiency part w_- + W w_- in closed form.
    ExponentialSum deficiency_part;
    WaveFunction g;
    /// H_U g = -f'' - 2i w_- + 2i W w_- sampled on the grid of f.
    WaveFunction h_g;
    /// Exact endpoint data of g (f contributes nothing at the ends).
    BoundaryTrace trace;
};

/// Builds the element of D(H_U) for f in D(H-bar) and w_- in N_-.
/// Throws PreconditionError unless f and f' vanish at both ends, judged by
/// one-sided quadratic extrapolation against 1e-6 * max(|f|_inf, |f'|_inf).
ExtensionElement assemble_extension_element(const UnitaryMatrix2& u, const WaveFunction& f,
                                            std::array<cplx, 2> w_minus);

/// U_alpha exactly as the closed-form entries are printed:
/// u11 = u22 = -(1+i)/2, u12 = (i-1)/2 chi (1 + chi e^pi)/(1 + conj(chi) e^pi),
/// u21 = conj(u12), chi = e^{i alpha}. Not necessarily unitary.
ComplexMatrix2 printed_U_alpha(double alpha);

/// Solves for the U whose extension carries the alpha boundary conditions:
/// each column k of U makes psi_-^k + sum_j U_jk psi_+^j satisfy both
/// conditions (a 2x2 linear system per column).
ComplexMatrix2 derive_U_alpha(double alpha);

struct UAlphaConstruction {
    UnitaryMatrix2 matrix;
    ComplexMatrix2 printed;
    double printed_unitarity_defect = 0.0;
    bool printed_is_unitary = false;
    bool used_fallback = false;
    /// Human-readable account of which printed entries break unitarity.
    std::string report;
};

/// U_alpha: the printed form when it is unitary within 1e-10, otherwise the
/// derived matrix, with the failure reported. Throws InternalConsistencyError
/// if neither route yields a unitary matrix.
UAlphaConstruction build_U_alpha(double alpha);

/// max(|g(0) - e^{ia} g(pi)|, |g'(0) - e^{ia} g'(pi)|) / max(|g|_inf, |g'|_inf).
/// Throws DomainError for the zero function.
double boundary_residual(const BoundaryTrace& g, double alpha);

struct InfiniteWell {};
struct QuasiPeriodicFamily {
    double alpha;
};
struct OtherExtension {};
using ExtensionClass = std::variant<InfiniteWell, QuasiPeriodicFamily, OtherExtension>;

/// U = -1 -> InfiniteWell; U = U_alpha (within 1e-10) -> QuasiPeriodicFamily;
/// anything else -> OtherExtension.
ExtensionClass classify_extension(const UnitaryMatrix2& u);

/// -f'' by the (-1, 2, -1)/h^2 stencil, using f's endpoint values (zero
/// unless carried). Interior grids only.
WaveFunction negative_second_difference(const WaveFunction& f);

}  // namespace qtrap::extension_theory
