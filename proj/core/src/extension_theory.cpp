#include "qtrap/extension_theory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qtrap::extension_theory {

namespace {

const cplx kI{0.0, 1.0};

DeficiencyBasis scaled_basis(double scale) {
    const double c1 = scale / std::sqrt(std::exp(2.0 * kPi) - 1.0);
    const double c2 = scale / std::sqrt(1.0 - std::exp(-2.0 * kPi));
    const cplx s_plus{1.0, -1.0};
    const cplx s_minus{1.0, 1.0};
    return DeficiencyBasis{
        ExponentialSum::single(c1, s_plus),
        ExponentialSum::single(c2, -s_plus),
        ExponentialSum::single(c1, s_minus),
        ExponentialSum::single(c2, -s_minus),
    };
}

// w_- + W w_- and -2i w_- + 2i W w_- for coefficients w in the psi_- basis.
std::pair<ExponentialSum, ExponentialSum> deficiency_parts(const DeficiencyBasis& basis, const ComplexMatrix2& u,
                                                           const std::array<cplx, 2>& w) {
    const auto uw = u.apply(w);
    ExponentialSum minus = w[0] * basis.psi_minus_1 + w[1] * basis.psi_minus_2;
    ExponentialSum plus = uw[0] * basis.psi_plus_1 + uw[1] * basis.psi_plus_2;
    ExponentialSum part = minus + plus;
    ExponentialSum image = (-2.0 * kI) * minus + (2.0 * kI) * plus;
    return {part, image};
}

void require_minimal_domain(const WaveFunction& f) {
    const Grid& grid = f.grid();
    if (grid.is_periodic()) throw PreconditionError("extension element: f must live on an interior grid");
    if (std::abs(grid.interval().a()) > 1e-12 || std::abs(grid.interval().b() - kPi) > 1e-12)
        throw PreconditionError("extension element: f must be sampled on [0, pi]");
    const std::size_t n = grid.size();
    if (n < 5) throw PreconditionError("extension element: grid too coarse");
    const double h = grid.spacing();
    auto v = f.values();

    double sup_v = 0.0;
    for (auto z : v) sup_v = std::max(sup_v, std::abs(z));
    double sup_d = 0.0;
    for (std::size_t j = 1; j + 1 < n; ++j) sup_d = std::max(sup_d, std::abs(v[j + 1] - v[j - 1]) / (2.0 * h));
    const double scale = std::max(sup_v, sup_d);
    if (scale == 0.0) return;

    // Quadratic and cubic extrapolation to each end; their gap estimates the truncation error.
    auto ends = [&](cplx v0, cplx v1, cplx v2, cplx v3, double sign) {
        const cplx value_q = 3.0 * v0 - 3.0 * v1 + v2;
        const cplx value_c = 4.0 * v0 - 6.0 * v1 + 4.0 * v2 - v3;
        const cplx deriv_q = sign * (-5.0 * v0 + 8.0 * v1 - 3.0 * v2) / (2.0 * h);
        const cplx deriv_c = sign * (-13.0 / 3.0 * v0 + 9.5 * v1 - 7.0 * v2 + 11.0 / 6.0 * v3) / h;
        const double value_gap = std::abs(value_c) - std::abs(value_q - value_c);
        const double deriv_gap = std::abs(deriv_c) - std::abs(deriv_q - deriv_c);
        return std::max(value_gap, deriv_gap);
    };
    const double worst = std::max({ends(v[0], v[1], v[2], v[3], 1.0),
                                   ends(v[n - 1], v[n - 2], v[n - 3], v[n - 4], -1.0), std::abs(f.value_at_a()),
                                   std::abs(f.value_at_b())});
    if (worst > 1e-6 * scale) {
        std::ostringstream msg;
        msg << "extension element: f not in the minimal domain (boundary data " << worst << " vs scale " << scale
            << ")";
        throw PreconditionError(msg.str());
    }
}

}  // namespace

DeficiencyBasis deficiency_basis() { return scaled_basis(1.0); }

DeficiencyBasis orthonormalized_deficiency_basis() { return scaled_basis(std::sqrt(2.0)); }

WaveFunction negative_second_difference(const WaveFunction& f) {
    const Grid& grid = f.grid();
    if (grid.is_periodic()) throw StructuralError("negative_second_difference: interior grid required");
    const std::size_t n = grid.size();
    const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
    auto v = f.values();
    CVector out(n);
    for (std::size_t j = 0; j < n; ++j) {
        const cplx left = j == 0 ? f.value_at_a() : v[j - 1];
        const cplx right = j + 1 == n ? f.value_at_b() : v[j + 1];
        out[j] = (2.0 * v[j] - left - right) * inv_h2;
    }
    return WaveFunction(grid, std::move(out));
}

ExtensionElement assemble_extension_element(const UnitaryMatrix2& u, const WaveFunction& f,
                                            std::array<cplx, 2> w_minus) {
    require_minimal_domain(f);
    const DeficiencyBasis basis = deficiency_basis();
    auto [part, image] = deficiency_parts(basis, u.matrix(), w_minus);

    const Grid& grid = f.grid();
    // f vanishes at the ends, so g's endpoint data is that of the deficiency part.
    WaveFunction f_core(grid, CVector(f.values().begin(), f.values().end()));
    WaveFunction g = f_core + part.sample(grid);
    WaveFunction h_g = negative_second_difference(f_core) + image.sample(grid);
    BoundaryTrace trace = part.trace(grid.interval());

    // sup norms must see f as well as the deficiency part
    const double h = grid.spacing();
    auto gv = g.values();
    for (std::size_t j = 0; j < gv.size(); ++j) {
        trace.sup_value = std::max(trace.sup_value, std::abs(gv[j]));
        if (j > 0 && j + 1 < gv.size())
            trace.sup_deriv = std::max(trace.sup_deriv, std::abs(gv[j + 1] - gv[j - 1]) / (2.0 * h));
    }
    return ExtensionElement{std::move(f_core), w_minus, std::move(part), std::move(g), std::move(h_g), trace};
}

ComplexMatrix2 printed_U_alpha(double alpha) {
    const cplx chi = std::exp(kI * alpha);
    const double e_pi = std::exp(kPi);
    const cplx diag = -(1.0 + kI) / 2.0;
    const cplx u12 = (kI - 1.0) / 2.0 * chi * (1.0 + chi * e_pi) / (1.0 + std::conj(chi) * e_pi);
    return ComplexMatrix2{{diag, u12, std::conj(u12), diag}};
}

ComplexMatrix2 derive_U_alpha(double alpha) {
    const cplx chi = std::exp(kI * alpha);
    const DeficiencyBasis b = deficiency_basis();
    // rows: value condition, derivative condition; columns: psi_+^1, psi_+^2
    cplx m[2][2];
    for (int j = 0; j < 2; ++j) {
        m[0][j] = b.plus(j).value(0.0) - chi * b.plus(j).value(kPi);
        m[1][j] = b.plus(j).derivative(0.0) - chi * b.plus(j).derivative(kPi);
    }
    const cplx det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if (std::abs(det) < 1e-14) throw InternalConsistencyError("derive_U_alpha: singular boundary system");
    ComplexMatrix2 u;
    for (int k = 0; k < 2; ++k) {
        const cplx r0 = -(b.minus(k).value(0.0) - chi * b.minus(k).value(kPi));
        const cplx r1 = -(b.minus(k).derivative(0.0) - chi * b.minus(k).derivative(kPi));
        u(0, k) = (r0 * m[1][1] - m[0][1] * r1) / det;
        u(1, k) = (m[0][0] * r1 - r0 * m[1][0]) / det;
    }
    return u;
}

UAlphaConstruction build_U_alpha(double alpha) {
    constexpr double kGate = 1e-10;
    const ComplexMatrix2 printed = printed_U_alpha(alpha);
    const double defect = printed.unitarity_defect();
    if (defect <= UnitaryMatrix2::kTolerance) {
        return UAlphaConstruction{UnitaryMatrix2(printed), printed, defect, true, false, "printed form unitary"};
    }

    std::ostringstream report;
    const ComplexMatrix2 gram = printed.adjoint() * printed;
    report << "printed U_alpha not unitary at alpha=" << alpha << " (max |U^dagger U - I| = " << defect << "):";
    if (std::abs(gram(0, 0) - 1.0) > kGate) report << " column 1 norm^2 = " << gram(0, 0).real() << ";";
    if (std::abs(gram(1, 1) - 1.0) > kGate) report << " column 2 norm^2 = " << gram(1, 1).real() << ";";
    if (std::abs(gram(0, 1)) > kGate)
        report << " columns not orthogonal, <c1,c2> = " << gram(0, 1) << " (entries u12/u21);";

    const ComplexMatrix2 derived = derive_U_alpha(alpha);
    const double derived_defect = derived.unitarity_defect();
    if (!(derived_defect <= UnitaryMatrix2::kTolerance)) {
        std::ostringstream msg;
        msg << report.str() << " derived matrix also fails unitarity (" << derived_defect << ")";
        throw InternalConsistencyError(msg.str());
    }
    const ComplexMatrix2 diff{{derived(0, 0) - printed(0, 0), derived(0, 1) - printed(0, 1),
                               derived(1, 0) - printed(1, 0), derived(1, 1) - printed(1, 1)}};
    const char* names[4] = {"u11", "u12", "u21", "u22"};
    report << " derived from boundary conditions; entries differing from print:";
    bool any = false;
    for (std::size_t k = 0; k < 4; ++k) {
        if (std::abs(diff.m[k]) > kGate) {
            report << ' ' << names[k];
            any = true;
        }
    }
    if (!any) report << " none";
    return UAlphaConstruction{UnitaryMatrix2(derived), printed, defect, false, true, report.str()};
}

double boundary_residual(const BoundaryTrace& g, double alpha) {
    const double scale = std::max(g.sup_value, g.sup_deriv);
    if (!(scale > 0.0)) throw DomainError("boundary_residual: zero function");
    const cplx chi = std::exp(kI * alpha);
    const double value_gap = std::abs(g.value_a - chi * g.value_b);
    const double deriv_gap = std::abs(g.deriv_a - chi * g.deriv_b);
    return std::max(value_gap, deriv_gap) / scale;
}

ExtensionClass classify_extension(const UnitaryMatrix2& u) {
    constexpr double kMatch = 1e-10;
    if (max_abs_difference(u.matrix(), UnitaryMatrix2::minus_identity().matrix()) <= kMatch) return InfiniteWell{};

    // Invert u12 = (i-1)/2 (e^pi + chi)/(e^pi chi + 1) for chi.
    const double e_pi = std::exp(kPi);
    const cplx r = 2.0 * u(0, 1) / (kI - 1.0);
    const cplx denom = r * e_pi - 1.0;
    if (std::abs(denom) < 1e-300) return OtherExtension{};
    const cplx chi = (e_pi - r) / denom;
    if (std::abs(std::abs(chi) - 1.0) > 1e-6) return OtherExtension{};
    const double alpha = reduce_angle(std::arg(chi));
    const UAlphaConstruction candidate = build_U_alpha(alpha);
    if (max_abs_difference(candidate.matrix.matrix(), u.matrix()) <= kMatch) return QuasiPeriodicFamily{alpha};
    return OtherExtension{};
}

}  // namespace qtrap::extension_theory
