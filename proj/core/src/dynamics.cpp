#include "qtrap/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "linalg.hpp"

namespace qtrap::dynamics {

namespace {

const cplx kI{0.0, 1.0};

// Solves a complex tridiagonal system with one corner pair by Sherman-Morrison.
class CyclicSolver {
public:
    CyclicSolver(std::vector<cplx> lower, std::vector<cplx> diag, std::vector<cplx> upper, cplx top_right,
                 cplx bottom_left)
        : beta_(top_right), alpha_(bottom_left) {
        const std::size_t n = diag.size();
        cyclic_ = n > 2 && (top_right != cplx{} || bottom_left != cplx{});
        if (cyclic_) {
            gamma_ = -diag[0];
            diag[0] -= gamma_;
            diag[n - 1] -= alpha_ * beta_ / gamma_;
        }
        lu_ = std::make_unique<linalg::TridiagonalLU>(std::move(lower), std::move(diag), std::move(upper));
        if (cyclic_) {
            z_.assign(n, 0.0);
            z_[0] = gamma_;
            z_[n - 1] = alpha_;
            lu_->solve(z_);
            denom_ = 1.0 + z_[0] + beta_ / gamma_ * z_[n - 1];
        }
    }

    void solve(CVector& b) const {
        lu_->solve(b);
        if (!cyclic_) return;
        const std::size_t n = b.size();
        const cplx factor = (b[0] + beta_ / gamma_ * b[n - 1]) / denom_;
        for (std::size_t j = 0; j < n; ++j) b[j] -= factor * z_[j];
    }

private:
    std::unique_ptr<linalg::TridiagonalLU> lu_;
    bool cyclic_ = false;
    cplx beta_, alpha_, gamma_{}, denom_{};
    CVector z_;
};

void require_grid(const WaveFunction& f, const Grid& grid, const char* what) {
    if (!(f.grid() == grid)) throw StructuralError(std::string(what) + ": wave function grid does not match");
}

// Index of grid point x, or -1 for the left end and size() for the right end.
long grid_index_of(const Grid& grid, double x) {
    const Interval& iv = grid.interval();
    const double h = grid.spacing();
    const double offset = grid.is_periodic() ? 0.0 : 1.0;
    const double r = (x - iv.a()) / h - offset;
    const double k = std::round(r);
    if (std::abs(r - k) > 1e-8) throw DomainError("point " + std::to_string(x) + " is not a grid point");
    return static_cast<long>(k);
}

std::vector<double> real_samples(const WaveFunction& phi, double& scale) {
    scale = 0.0;
    double imag = 0.0;
    std::vector<double> out(phi.size());
    for (std::size_t j = 0; j < phi.size(); ++j) {
        scale = std::max(scale, std::abs(phi[j]));
        imag = std::max(imag, std::abs(phi[j].imag()));
        out[j] = phi[j].real();
    }
    if (!(scale > 0.0)) throw DomainError("ground state vanishes identically");
    if (imag > 1e-12 * scale) throw PreconditionError("ground state must be real-valued");
    return out;
}

struct Zero {
    double x;
    long index;  // sample index at the zero, or -1 for a sign change
    std::size_t left;   // last sample strictly left of the zero
    std::size_t right;  // first sample strictly right of the zero
};

std::vector<Zero> find_zeros(const Grid& grid, const std::vector<double>& v, double scale) {
    const double tol = 1e-12 * scale;
    const std::size_t n = v.size();
    std::vector<Zero> zeros;
    std::size_t j = 0;
    while (j < n) {
        if (std::abs(v[j]) <= tol) {
            std::size_t end = j;
            std::size_t best = j;
            while (end < n && std::abs(v[end]) <= tol) {
                if (std::abs(v[end]) < std::abs(v[best])) best = end;
                ++end;
            }
            zeros.push_back({grid.point(best), static_cast<long>(best), j == 0 ? n : j - 1, end});
            j = end;
            continue;
        }
        if (j + 1 < n && std::abs(v[j + 1]) > tol && (v[j] > 0.0) != (v[j + 1] > 0.0)) {
            const double x0 = grid.point(j);
            const double x1 = grid.point(j + 1);
            const double x = x0 - v[j] * (x1 - x0) / (v[j + 1] - v[j]);
            zeros.push_back({x, -1, j, j + 1});
        }
        ++j;
    }
    return zeros;
}

double fitted_exponent(const Grid& grid, const std::vector<double>& v, const Zero& z) {
    std::vector<double> lx, ly;
    auto take = [&](std::size_t k) {
        const double d = std::abs(grid.point(k) - z.x);
        if (v[k] == 0.0 || d == 0.0) return;
        lx.push_back(std::log(d));
        ly.push_back(std::log(std::abs(v[k])));
    };
    const std::size_t n = v.size();
    if (z.left < n)
        for (std::size_t c = 0; c < 4 && c <= z.left; ++c) take(z.left - c);
    for (std::size_t c = 0; c < 4 && z.right + c < n; ++c) take(z.right + c);
    if (lx.size() < 3) return 0.0;
    const double m = static_cast<double>(lx.size());
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / m;
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / m;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
        sxy += (lx[k] - mx) * (ly[k] - my);
        sxx += (lx[k] - mx) * (lx[k] - mx);
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
}

Spectrum sine_basis_on_periodic(const Grid& grid) {
    Spectrum s;
    const std::size_t n = grid.size();
    const double amp = std::sqrt(2.0 / kPi);
    for (std::size_t m = 1; m < n; ++m) {
        CVector v(n);
        for (std::size_t j = 0; j < n; ++j) v[j] = amp * std::sin(static_cast<double>(m) * grid.point(j));
        s.labels.push_back(static_cast<long>(m - 1));
        s.eigenvalues.push_back(static_cast<double>(m * m));
        s.vectors.emplace_back(grid, std::move(v));
    }
    return s;
}

Spectrum exponential_basis_on_periodic(const Grid& grid, double alpha) {
    const long first = -static_cast<long>(grid.size() / 2);
    const long last = first + static_cast<long>(grid.size()) - 1;
    Spectrum s = closed_form::h_alpha_spectrum(alpha, {first, last});
    for (const auto& mode : s.modes) {
        CVector v(grid.size());
        for (std::size_t j = 0; j < grid.size(); ++j) v[j] = mode.value(grid.point(j));
        s.vectors.emplace_back(grid, std::move(v));
    }
    return s;
}

WaveFunction to_cell_periodic(const WaveFunction& f) {
    const Grid& grid = f.grid();
    const Interval& iv = grid.interval();
    if (std::abs(iv.a()) > 1e-12 || std::abs(iv.b() - kPi) > 1e-12)
        throw PreconditionError("compare_extensions: psi0 must live on [0, pi]");
    if (grid.is_periodic()) return f;
    const Grid periodic = Grid::periodic(iv, grid.size() + 1);
    CVector v(grid.size() + 1);
    v[0] = f.value_at_a();
    std::copy(f.values().begin(), f.values().end(), v.begin() + 1);
    return WaveFunction(periodic, std::move(v));
}

}  // namespace

struct Propagator::Stepper {
    discrete_solver::DiscreteOperator op;
};

Propagator Propagator::spectral(Spectrum basis) {
    if (basis.vectors.empty() || basis.vectors.size() != basis.eigenvalues.size())
        throw PreconditionError("spectral propagator: basis needs one discrete vector per eigenvalue");
    const Grid& grid = basis.vectors.front().grid();
    for (std::size_t i = 0; i < basis.vectors.size(); ++i) {
        const WaveFunction& v = basis.vectors[i];
        require_grid(v, grid, "spectral propagator");
        double defect = std::abs(inner_product(v, v) - 1.0);
        if (i + 1 < basis.vectors.size()) defect = std::max(defect, std::abs(inner_product(v, basis.vectors[i + 1])));
        if (defect > 1e-9)
            throw PreconditionError("spectral propagator: basis not orthonormal (defect " + std::to_string(defect) +
                                    " at vector " + std::to_string(i) + ")");
    }
    Propagator p;
    p.method_ = SpectralSum{};
    p.basis_ = std::move(basis);
    return p;
}

Propagator Propagator::crank_nicolson(discrete_solver::DiscreteOperator op, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("Crank-Nicolson: dt must be positive");
    if (op.hermiticity_defect() > 1e-12 * std::max(1.0, std::abs(op.diagonal()[0])))
        throw PreconditionError("Crank-Nicolson: operator is not Hermitian");
    Propagator p;
    p.method_ = CrankNicolson{dt};
    p.stepper_ = std::make_shared<const Stepper>(Stepper{std::move(op)});
    return p;
}

const Grid& Propagator::grid() const {
    if (stepper_) return stepper_->op.grid();
    return basis_.vectors.front().grid();
}

WaveFunction evolve(const Propagator& prop, const WaveFunction& psi0, double t) {
    require_grid(psi0, prop.grid(), "evolve");
    psi0.require_normalized(1e-8);
    const Grid& grid = prop.grid();
    const std::size_t n = grid.size();

    if (std::holds_alternative<SpectralSum>(prop.method())) {
        const Spectrum& basis = prop.basis();
        CVector out(n, 0.0);
        double captured = 0.0;
        for (std::size_t k = 0; k < basis.vectors.size(); ++k) {
            const cplx c = inner_product(basis.vectors[k], psi0);
            captured += std::norm(c);
            const cplx w = c * std::exp(-kI * basis.eigenvalues[k] * t);
            auto phi = basis.vectors[k].values();
            for (std::size_t j = 0; j < n; ++j) out[j] += w * phi[j];
        }
        const double total = psi0.squared_norm();
        if (total - captured > 1e-10)
            throw PreconditionError("evolve: basis misses " + std::to_string(total - captured) + " of the mass");
        return WaveFunction(grid, std::move(out));
    }

    const double dt = std::get<CrankNicolson>(prop.method()).dt;
    const auto& op = prop.stepper_->op;
    CVector psi(psi0.values().begin(), psi0.values().end());
    if (t == 0.0) return WaveFunction(grid, std::move(psi));
    if (t < 0.0) throw DomainError("evolve: Crank-Nicolson needs t >= 0");
    const auto steps = static_cast<std::size_t>(std::ceil(t / dt - 1e-9));
    const double tau = 0.5 * t / static_cast<double>(steps);

    std::vector<cplx> lower(n - 1), diag(n), upper(n - 1);
    for (std::size_t j = 0; j < n; ++j) diag[j] = 1.0 + kI * tau * op.diagonal()[j];
    for (std::size_t j = 0; j + 1 < n; ++j) lower[j] = upper[j] = kI * tau * op.off_diagonal()[j];
    const CyclicSolver solver(std::move(lower), std::move(diag), std::move(upper), kI * tau * op.corner(),
                              kI * tau * std::conj(op.corner()));
    for (std::size_t s = 0; s < steps; ++s) {
        CVector hpsi = op.apply(psi);
        for (std::size_t j = 0; j < n; ++j) psi[j] -= kI * tau * hpsi[j];
        solver.solve(psi);
    }
    return WaveFunction(grid, std::move(psi));
}

LeakageReport leakage(const Propagator& prop, const WaveFunction& psi0, const Interval& cell,
                      const std::vector<double>& times) {
    // Samples at nodes outside the closed cell; the interpolant across a cell
    // end is a discretization artifact, not mass outside.
    double outside0 = 0.0;
    for (std::size_t j = 0; j < psi0.size(); ++j) {
        const double x = psi0.grid().point(j);
        if (!cell.contains(x)) outside0 += std::norm(psi0[j]) * psi0.grid().spacing();
    }
    if (outside0 > 1e-12)
        throw PreconditionError("leakage: initial mass outside the cell is " + std::to_string(outside0));
    const Interval& iv = prop.grid().interval();
    LeakageReport report;
    for (double t : times) {
        const WaveFunction psi = evolve(prop, psi0, t);
        double outside = 0.0;
        if (iv.a() < cell.a()) outside += squared_norm_on(psi, Interval(iv.a(), cell.a()));
        if (cell.b() < iv.b()) outside += squared_norm_on(psi, Interval(cell.b(), iv.b()));
        report.times.push_back(t);
        report.inside_mass.push_back(squared_norm_on(psi, cell));
        report.leaked_mass.push_back(outside);
    }
    return report;
}

Spectrum well_basis(const Grid& grid, std::size_t count) {
    const Interval& iv = grid.interval();
    if (grid.is_periodic() || std::abs(iv.a()) > 1e-12 || std::abs(iv.b() - kPi) > 1e-12)
        throw DomainError("well_basis: needs an interior grid of [0, pi]");
    if (count > grid.size()) throw DomainError("well_basis: more modes than grid points");
    if (count == 0) return Spectrum{};
    Spectrum s = closed_form::infinite_well_spectrum(count - 1);
    for (const auto& mode : s.modes) {
        CVector v(grid.size());
        for (std::size_t j = 0; j < grid.size(); ++j) v[j] = mode.value(grid.point(j));
        s.vectors.emplace_back(grid, std::move(v));
    }
    return s;
}

Interval multitrap_cell(const closed_form::MultitrapParams& params, long cell) {
    const double w = kPi / params.q();
    return Interval(static_cast<double>(cell) * w, static_cast<double>(cell + 1) * w);
}

Propagator multitrap_propagator(const closed_form::MultitrapParams& params, const Grid& grid) {
    if (grid.is_periodic()) throw DomainError("multitrap_propagator: needs an interior grid");
    const Interval& iv = grid.interval();
    std::vector<double> nodes = params.nodes_in(iv);
    auto is_node = [&](double x) {
        return std::any_of(nodes.begin(), nodes.end(),
                           [&](double y) { return std::abs(x - y) <= 1e-9 * std::max(1.0, std::abs(y)); });
    };
    if (!is_node(iv.a()) || !is_node(iv.b()))
        throw DomainError("multitrap_propagator: the grid interval must start and end on cell boundaries");

    const std::size_t n = grid.size();
    const double q = params.q();
    struct Mode {
        double energy;
        long cell;
        long k;
        CVector values;
    };
    std::vector<Mode> modes;
    for (std::size_t c = 0; c + 1 < nodes.size(); ++c) {
        const double l = nodes[c];
        const double r = nodes[c + 1];
        const long pl = c == 0 ? -1 : grid_index_of(grid, l);
        const long pr = c + 2 == nodes.size() ? static_cast<long>(n) : grid_index_of(grid, r);
        const long m = pr - pl - 1;
        const double width = r - l;
        const double amp = std::sqrt(2.0 / width);
        const long cell = std::lround(l * q / kPi);
        for (long k = 1; k <= m; ++k) {
            CVector v(n, 0.0);
            for (long j = pl + 1; j < pr; ++j) {
                const double x = grid.point(static_cast<std::size_t>(j));
                v[static_cast<std::size_t>(j)] = amp * std::sin(static_cast<double>(k) * kPi * (x - l) / width);
            }
            const double kq = static_cast<double>(k) * q;
            modes.push_back({kq * kq - q * q, cell, k, std::move(v)});
        }
    }
    std::stable_sort(modes.begin(), modes.end(), [](const Mode& a, const Mode& b) { return a.energy < b.energy; });
    Spectrum s;
    for (auto& m : modes) {
        s.labels.push_back(m.k - 1);
        s.eigenvalues.push_back(m.energy);
        s.vectors.emplace_back(grid, std::move(m.values));
    }
    return Propagator::spectral(std::move(s));
}

ExtensionComparison compare_extensions(const WaveFunction& psi0, double alpha, double t) {
    const WaveFunction f = to_cell_periodic(psi0);
    const Grid& grid = f.grid();
    const Propagator dirichlet = Propagator::spectral(sine_basis_on_periodic(grid));
    // e_n^a satisfy g(pi) = e^{ia} g(0); H_alpha in the g(0) = e^{i alpha} g(pi) form uses a = 2 pi - alpha.
    const Propagator quasi = Propagator::spectral(exponential_basis_on_periodic(grid, reduce_angle(kTwoPi - alpha)));
    const WaveFunction a = evolve(dirichlet, f, t);
    const WaveFunction b = evolve(quasi, f, t);
    return ExtensionComparison{l2_distance(a, b), std::abs(a.norm() - 1.0), std::abs(b.norm() - 1.0)};
}

double extension_divergence(const WaveFunction& psi0, double alpha, double t) {
    return compare_extensions(psi0, alpha, t).distance;
}

std::vector<double> detect_barriers(const WaveFunction& phi, double threshold_exponent) {
    double scale = 0.0;
    const std::vector<double> v = real_samples(phi, scale);
    std::vector<double> barriers;
    for (const Zero& z : find_zeros(phi.grid(), v, scale)) {
        if (fitted_exponent(phi.grid(), v, z) >= threshold_exponent - 0.1) barriers.push_back(z.x);
    }
    return barriers;
}

discrete_solver::potential::Custom hamiltonian_from_ground_state(const WaveFunction& phi,
                                                                 const DerivativeSource& derivative) {
    double scale = 0.0;
    const std::vector<double> v = real_samples(phi, scale);
    const Grid& grid = phi.grid();
    const std::size_t n = v.size();
    const double h = grid.spacing();
    const auto zeros = find_zeros(grid, v, scale);
    const bool fd = std::holds_alternative<FiniteDifferenceDerivative>(derivative);

    discrete_solver::potential::Custom out;
    out.samples.assign(n, 0.0);
    out.valid.assign(n, true);
    for (std::size_t j = 0; j < n; ++j) {
        const double x = grid.point(j);
        for (const Zero& z : zeros)
            if (std::abs(x - z.x) <= 2.0 * h * (1.0 + 1e-9)) out.valid[j] = false;
        if (fd && (j == 0 || j + 1 == n)) out.valid[j] = false;
        if (!out.valid[j]) continue;
        const double second = fd ? (v[j - 1] - 2.0 * v[j] + v[j + 1]) / (h * h)
                                 : std::get<AnalyticDerivative>(derivative).second(x);
        out.samples[j] = second / v[j];
    }
    return out;
}

double ground_state_residual(const WaveFunction& phi, const discrete_solver::potential::Custom& v) {
    double scale = 0.0;
    const std::vector<double> f = real_samples(phi, scale);
    const std::size_t n = f.size();
    if (v.samples.size() != n) throw StructuralError("ground_state_residual: potential size mismatch");
    const double h = phi.grid().spacing();
    double worst = 0.0;
    for (std::size_t j = 1; j + 1 < n; ++j) {
        if (j < v.valid.size() && !v.valid[j]) continue;
        const double second = (f[j - 1] - 2.0 * f[j] + f[j + 1]) / (h * h);
        worst = std::max(worst, std::abs(-second + v.samples[j] * f[j]));
    }
    return worst / scale;
}

}  // namespace qtrap::dynamics
