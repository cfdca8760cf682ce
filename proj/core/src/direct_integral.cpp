#include "qtrap/direct_integral.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "qtrap/dynamics.hpp"
#include "qtrap/extension_theory.hpp"
#include "qtrap/parallel.hpp"

namespace qtrap::direct_integral {

namespace {

const cplx kI{0.0, 1.0};

struct LineLayout {
    long first_cell;
    std::size_t cells;
    std::size_t per_cell;
};

LineLayout layout_of(const Grid& grid) {
    if (grid.is_periodic()) throw DomainError("line function must live on an interior line grid");
    const Interval& iv = grid.interval();
    const double fa = iv.a() / kPi;
    const double fb = iv.b() / kPi;
    const double ra = std::round(fa);
    const double rb = std::round(fb);
    if (std::abs(fa - ra) > 1e-9 || std::abs(fb - rb) > 1e-9 || rb <= ra)
        throw DomainError("line grid must start and end on cell boundaries k pi");
    const auto cells = static_cast<std::size_t>(rb - ra);
    const std::size_t points = grid.size() + 1;
    if (points % cells != 0) throw DomainError("line grid spacing must be pi / (points per cell)");
    return LineLayout{static_cast<long>(ra), cells, points / cells};
}

// Line sample at cell offset c (0-based) and point j of that cell; the two grid
// ends are taken from the endpoint data.
cplx line_value(const WaveFunction& f, const LineLayout& lay, std::size_t c, std::size_t j) {
    const std::size_t global = c * lay.per_cell + j;
    if (global == 0) return f.value_at_a();
    if (global == lay.cells * lay.per_cell) return f.value_at_b();
    return f[global - 1];
}

// Fiber with endpoint data g(0), g(pi) = e^{i alpha} g(0).
WaveFunction make_fiber(const Grid& grid, CVector values, double alpha) {
    const cplx g0 = values[0];
    return WaveFunction(grid, std::move(values), EndpointValues{g0, std::exp(kI * alpha) * g0});
}

// Centered differences, using g(-h) = e^{-i alpha} g(pi - h) and g(pi + h) = e^{i alpha} g(h).
BoundaryTrace fiber_trace(const WaveFunction& g, double alpha) {
    const auto v = g.values();
    const std::size_t n = v.size();
    const double h = g.grid().spacing();
    const cplx phase = std::exp(kI * alpha);
    BoundaryTrace t;
    t.value_a = g.value_at_a();
    t.value_b = g.value_at_b();
    t.deriv_a = (v[1] - std::conj(phase) * v[n - 1]) / (2.0 * h);
    t.deriv_b = (phase * v[1] - v[n - 1]) / (2.0 * h);
    for (std::size_t j = 0; j < n; ++j) {
        const cplx left = j == 0 ? std::conj(phase) * v[n - 1] : v[j - 1];
        const cplx right = j + 1 == n ? phase * v[0] : v[j + 1];
        t.sup_value = std::max(t.sup_value, std::abs(v[j]));
        t.sup_deriv = std::max(t.sup_deriv, std::abs(right - left) / (2.0 * h));
    }
    t.sup_value = std::max({t.sup_value, std::abs(t.value_a), std::abs(t.value_b)});
    t.sup_deriv = std::max({t.sup_deriv, std::abs(t.deriv_a), std::abs(t.deriv_b)});
    return t;
}

}  // namespace

double boundary_alpha(double fiber_alpha) { return reduce_angle(kTwoPi - fiber_alpha); }

Grid line_grid(long first_cell, long end_cell, std::size_t per_cell) {
    if (end_cell <= first_cell || per_cell < 2) throw DomainError("line_grid: need at least one cell and 2 points per cell");
    const auto cells = static_cast<std::size_t>(end_cell - first_cell);
    return Grid::interior(Interval(static_cast<double>(first_cell) * kPi, static_cast<double>(end_cell) * kPi),
                          cells * per_cell - 1);
}

Grid fiber_grid(std::size_t per_cell) { return Grid::periodic(Interval(0.0, kPi), per_cell); }

FiberDecomposition decompose(const WaveFunction& f, std::size_t m) {
    if (m < 2) throw DomainError("decompose: M must be at least 2");
    const LineLayout lay = layout_of(f.grid());
    double scale = 0.0;
    for (auto z : f.values()) scale = std::max(scale, std::abs(z));
    const double edge = std::max(std::abs(f.value_at_a()), std::abs(f.value_at_b()));
    if (edge > 1e-12 * std::max(scale, 1e-300))
        throw DomainError("decompose: support of f exceeds the sampled window");

    // cells holding nonzero samples
    long lo = -1, hi = -1;
    for (std::size_t c = 0; c < lay.cells; ++c) {
        bool any = false;
        for (std::size_t j = 0; j < lay.per_cell && !any; ++j) any = line_value(f, lay, c, j) != cplx{};
        if (!any) continue;
        if (lo < 0) lo = static_cast<long>(c);
        hi = static_cast<long>(c);
    }
    if (lo < 0) lo = hi = 0;

    const Grid grid = fiber_grid(lay.per_cell);
    FiberDecomposition dec{{}, {}, {lay.first_cell + lo, lay.first_cell + hi}, f.grid(), {}};
    dec.alphas.resize(m);
    for (std::size_t k = 0; k < m; ++k) dec.alphas[k] = kTwoPi * static_cast<double>(k) / static_cast<double>(m);

    std::vector<std::optional<WaveFunction>> fibers(m);
    parallel_for(m, [&](std::size_t a) {
        const double alpha = dec.alphas[a];
        CVector g(lay.per_cell, 0.0);
        for (std::size_t c = 0; c < lay.cells; ++c) {
            const long k = lay.first_cell + static_cast<long>(c);
            const cplx phase = std::exp(-kI * static_cast<double>(k) * alpha);
            for (std::size_t j = 0; j < lay.per_cell; ++j) g[j] += phase * line_value(f, lay, c, j);
        }
        fibers[a] = make_fiber(grid, std::move(g), alpha);
    });
    for (std::size_t a = 0; a < m; ++a) {
        dec.traces.push_back(fiber_trace(*fibers[a], dec.alphas[a]));
        dec.fibers.push_back(std::move(*fibers[a]));
    }
    return dec;
}

WaveFunction reconstruct(const FiberDecomposition& dec) {
    const LineLayout lay = layout_of(dec.line);
    const std::size_t m = dec.fibers.size();
    if (m < 2 || dec.alphas.size() != m) throw StructuralError("reconstruct: malformed decomposition");
    if (lay.cells > m)
        throw DomainError("reconstruct: window of " + std::to_string(lay.cells) + " cells aliases with M = " +
                          std::to_string(m) + " fibers");
    CVector out(dec.line.size(), 0.0);
    parallel_for(lay.cells, [&](std::size_t c) {
        const long k = lay.first_cell + static_cast<long>(c);
        for (std::size_t a = 0; a < m; ++a) {
            const cplx phase = std::exp(kI * static_cast<double>(k) * dec.alphas[a]) / static_cast<double>(m);
            const auto g = dec.fibers[a].values();
            for (std::size_t j = 0; j < lay.per_cell; ++j) {
                const std::size_t global = c * lay.per_cell + j;
                if (global == 0) continue;
                out[global - 1] += phase * g[j];
            }
        }
    });
    return WaveFunction(dec.line, std::move(out));
}

double fiber_boundary_residual(const FiberDecomposition& dec) {
    double worst = 0.0;
    for (std::size_t a = 0; a < dec.fibers.size(); ++a) {
        const BoundaryTrace& t = dec.traces[a];
        if (!(std::max(t.sup_value, t.sup_deriv) > 0.0)) continue;
        worst = std::max(worst, extension_theory::boundary_residual(t, boundary_alpha(dec.alphas[a])));
    }
    return worst;
}

discrete_solver::DiscreteOperator fiber_hamiltonian(const discrete_solver::potential::PeriodicCell& v, double alpha) {
    if (v.intervals() < 3) throw DomainError("fiber_hamiltonian: cell potential needs at least 3 intervals");
    return discrete_solver::assemble(fiber_grid(v.intervals()), v, QuasiPeriodic(alpha));
}

BandTable band_structure(const discrete_solver::potential::PeriodicCell& v, const std::vector<double>& alphas,
                         std::size_t k) {
    BandTable table{alphas, std::vector<std::vector<double>>(alphas.size())};
    parallel_for(alphas.size(), [&](std::size_t i) {
        table.energies[i] = discrete_solver::eigenvalues(fiber_hamiltonian(v, alphas[i]), k);
    });
    return table;
}

double band_continuity_ratio(const BandTable& table, double v_min) {
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < table.alphas.size(); ++i) {
        const double da = std::abs(table.alphas[i + 1] - table.alphas[i]);
        if (da == 0.0) continue;
        const auto& e0 = table.energies[i];
        const auto& e1 = table.energies[i + 1];
        for (std::size_t j = 0; j < std::min(e0.size(), e1.size()); ++j) {
            const double top = std::max(e0[j], e1[j]) - v_min;
            const double bound = 1.5 * (2.0 / kPi) * std::sqrt(std::max(top, 0.0)) * da;
            const double jump = std::abs(e1[j] - e0[j]);
            if (bound > 0.0) {
                worst = std::max(worst, jump / bound);
            } else if (jump > 0.0) {
                worst = std::max(worst, jump / (1e-300));
            }
        }
    }
    return worst;
}

std::vector<UnionWitness> spectrum_union_check(const std::vector<double>& energies) {
    std::vector<UnionWitness> out;
    for (double e : energies) {
        if (!(e >= 0.0)) {
            out.push_back({e, false, 0, 0.0});
            continue;
        }
        const double root = std::sqrt(e);
        const auto n = static_cast<long>(std::floor(root / 2.0));
        const double alpha = kPi * (root - 2.0 * static_cast<double>(n));
        out.push_back({e, alpha >= 0.0 && alpha < kTwoPi, n, alpha});
    }
    return out;
}

FiberDecomposition evolve_fibers(const FiberDecomposition& dec, const discrete_solver::potential::PeriodicCell& v,
                                 double t, std::size_t modes) {
    const std::size_t m = dec.fibers.size();
    if (m == 0) throw StructuralError("evolve_fibers: empty decomposition");
    const Grid& grid = dec.fibers.front().grid();
    if (v.intervals() != grid.size()) throw DomainError("evolve_fibers: cell potential does not match the fiber grid");

    // Fibers alpha and 2 pi - alpha have conjugate Hamiltonians; solve one of each pair.
    auto partner = [&](std::size_t a) -> std::size_t {
        const double target = reduce_angle(kTwoPi - dec.alphas[a]);
        for (std::size_t b = 0; b < m; ++b)
            if (std::abs(dec.alphas[b] - target) < 1e-12) return b;
        return a;
    };
    std::vector<std::size_t> owner(m);
    std::vector<std::size_t> solves;
    for (std::size_t a = 0; a < m; ++a) {
        const std::size_t b = partner(a);
        owner[a] = std::min(a, b);
        if (owner[a] == a) solves.push_back(a);
    }
    std::vector<Spectrum> spectra(m);
    parallel_for(solves.size(), [&](std::size_t s) {
        const std::size_t a = solves[s];
        spectra[a] = discrete_solver::eigensolve(fiber_hamiltonian(v, boundary_alpha(dec.alphas[a])), modes);
    });

    FiberDecomposition out{dec.alphas, {}, dec.source_window, dec.line, {}};
    std::vector<std::optional<WaveFunction>> evolved(m);
    parallel_for(m, [&](std::size_t a) {
        const WaveFunction& g = dec.fibers[a];
        const double nrm = g.norm();
        CVector values(grid.size(), 0.0);
        if (nrm > 0.0) {
            Spectrum basis = spectra[owner[a]];
            if (owner[a] != a) {
                for (auto& vec : basis.vectors)
                    for (auto& z : vec.mutable_values()) z = std::conj(z);
            }
            const auto prop = dynamics::Propagator::spectral(std::move(basis));
            const WaveFunction unit(grid, CVector(g.values().begin(), g.values().end()));
            const WaveFunction psi = dynamics::evolve(prop, (1.0 / nrm) * unit, t);
            for (std::size_t j = 0; j < values.size(); ++j) values[j] = nrm * psi[j];
        }
        evolved[a] = make_fiber(grid, std::move(values), dec.alphas[a]);
    });
    for (std::size_t a = 0; a < m; ++a) {
        out.traces.push_back(fiber_trace(*evolved[a], out.alphas[a]));
        out.fibers.push_back(std::move(*evolved[a]));
    }
    return out;
}

}  // namespace qtrap::direct_integral
