#include <algorithm>
#include <cmath>

#include "cli.hpp"
#include "qtrap/closed_form.hpp"
#include "qtrap/direct_integral.hpp"
#include "qtrap/discrete_solver.hpp"
#include "qtrap/dynamics.hpp"
#include "qtrap/kinematics.hpp"
#include "scenarios.hpp"

namespace qtrap::cli {

namespace {

namespace ds = discrete_solver;

std::size_t points_or(const RunConfig& c, std::size_t fallback) { return c.points ? c.points : fallback; }

closed_form::IntegerRange parse_range(const std::string& text) {
    const auto dots = text.find("..");
    try {
        if (dots == std::string::npos) {
            const long n = std::stol(text);
            return {n, n};
        }
        std::size_t used = 0;
        const long first = std::stol(text.substr(0, dots), &used);
        if (used != dots) throw ConfigError("");
        const std::string rest = text.substr(dots + 2);
        const long last = std::stol(rest, &used);
        if (used != rest.size() || last < first) throw ConfigError("");
        return {first, last};
    } catch (const std::exception&) {
        throw ConfigError("--n expects FIRST..LAST with FIRST <= LAST, got '" + text + "'");
    }
}

std::vector<double> sample_times(const RunConfig& c) {
    std::vector<double> t;
    if (c.samples == 1) return {c.tmax};
    for (std::size_t i = 0; i < c.samples; ++i)
        t.push_back(c.tmax * static_cast<double>(i) / static_cast<double>(c.samples - 1));
    return t;
}

double mean_position(const WaveFunction& f) {
    double m = 0.0;
    double w = 0.0;
    const double h = f.grid().spacing();
    for (std::size_t j = 0; j < f.size(); ++j) {
        const double rho = std::norm(f[j]) * h;
        m += rho * f.grid().point(j);
        w += rho;
    }
    return m / w;
}

}  // namespace

Table cmd_spectrum(const RunConfig& c) {
    Table table;
    if (c.halpha) {
        const auto range = parse_range(c.n_range);
        const Spectrum s = closed_form::h_alpha_spectrum(c.alpha, range);
        table.columns = {"label", "closed_form"};
        for (std::size_t i = 0; i < s.size(); ++i) table.rows.push_back({s.labels[i], s.eigenvalues[i]});
        return table;
    }

    Spectrum exact;
    std::vector<double> fd;
    if (c.well) {
        exact = closed_form::infinite_well_spectrum(static_cast<std::size_t>(c.nmax));
        if (c.fd) {
            const auto op = ds::assemble(scenario::well_grid(points_or(c, 1999)), ds::potential::Zero{}, Dirichlet{});
            fd = ds::eigenvalues(op, exact.size());
        }
    } else {
        const closed_form::CalogeroParams params(c.gamma);
        exact = closed_form::calogero_spectrum(params, static_cast<std::size_t>(c.k - 1));
        if (c.fd) {
            const auto op = ds::assemble(scenario::half_line_grid(c.length, points_or(c, 4000)),
                                         ds::potential::Calogero{c.gamma}, Dirichlet{});
            fd = ds::eigenvalues(op, exact.size());
        }
    }
    table.columns = {"label", "closed_form"};
    if (c.fd) {
        table.columns.push_back("fd");
        table.columns.push_back("rel_error");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < exact.size(); ++i) {
        std::vector<Cell> row{exact.labels[i], exact.eigenvalues[i]};
        if (c.fd) {
            const double rel = std::abs(fd[i] - exact.eigenvalues[i]) / std::max(1.0, std::abs(exact.eigenvalues[i]));
            worst = std::max(worst, rel);
            row.push_back(fd[i]);
            row.push_back(rel);
        }
        table.rows.push_back(std::move(row));
    }
    if (c.fd) table.summary["max_rel_error"] = worst;
    return table;
}

Table cmd_evolve(const RunConfig& c) {
    const Grid grid = scenario::well_grid(points_or(c, 511));
    const WaveFunction psi0 = c.state >= 0 ? closed_form::well_mode(c.state).sample(grid).normalize()
                                           : scenario::gaussian(grid, c.x0, c.sigma, c.p0);
    const dynamics::Propagator prop =
        c.method == "cn" ? dynamics::Propagator::crank_nicolson(ds::assemble(grid, ds::potential::Zero{}, Dirichlet{}), c.dt)
                         : dynamics::Propagator::spectral(dynamics::well_basis(grid, grid.size()));
    Table table;
    table.columns = {"t", "norm", "fidelity", "mean_x"};
    for (double t : sample_times(c)) {
        const WaveFunction psi = dynamics::evolve(prop, psi0, t);
        table.rows.push_back({t, psi.norm(), std::norm(inner_product(psi0, psi)), mean_position(psi)});
    }
    return table;
}

Table cmd_leakage(const RunConfig& c) {
    Table table;
    table.columns = {"t", "inside", "leaked"};
    dynamics::LeakageReport report;
    if (c.multitrap) {
        const closed_form::MultitrapParams params(c.q);
        const Grid grid = scenario::multitrap_window(c.q, c.cell, points_or(c, 256));
        const Interval cell = dynamics::multitrap_cell(params, c.cell);
        const auto prop = dynamics::multitrap_propagator(params, grid);
        report = dynamics::leakage(prop, scenario::cell_packet(grid, cell), cell, sample_times(c));
    } else {
        const std::size_t points = points_or(c, 1600);
        if (points % 2 != 0) throw ConfigError("--points must be even so that x = 0 is not a grid point");
        const Grid grid = scenario::mirrored_grid(c.length, points);
        const ds::PotentialSpec v =
            c.calogero ? ds::PotentialSpec{ds::potential::Calogero{c.gamma}} : ds::PotentialSpec{ds::potential::Zero{}};
        const auto prop = dynamics::Propagator::crank_nicolson(ds::assemble(grid, v, Dirichlet{}), c.dt);
        const Interval half(0.0, c.length);
        report = dynamics::leakage(prop, scenario::gaussian(grid, c.x0, c.sigma, c.p0, half), half, sample_times(c));
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < report.times.size(); ++i) {
        table.rows.push_back({report.times[i], report.inside_mass[i], report.leaked_mass[i]});
        worst = std::max(worst, report.leaked_mass[i]);
    }
    table.summary["max_leaked"] = worst;
    return table;
}

Table cmd_momentum(const RunConfig& c) {
    const Grid grid = scenario::well_grid(points_or(c, 4000));
    const WaveFunction f = closed_form::well_mode(c.state).sample(grid).normalize();
    const auto dist = kinematics::fourier_transform(f, kinematics::symmetric_momenta(c.pmax, c.count));
    Table table;
    table.columns = {"p", "density"};
    for (std::size_t i = 0; i < dist.p_grid.size(); ++i) table.rows.push_back({dist.p_grid[i], dist.density[i]});
    const auto u = kinematics::uncertainty_product(f);
    table.summary["convention"] = kinematics::MomentumDistribution::kConvention;
    table.summary["window_mass"] = kinematics::probability_momentum(dist, Interval(-c.pmax, c.pmax));
    table.summary["delta_q"] = u.delta_q;
    table.summary["delta_p"] = u.delta_p;
    table.summary["product"] = u.product;
    return table;
}

Table cmd_bands(const RunConfig& c) {
    const std::size_t per_cell = points_or(c, 400);
    const auto v = c.potential == "bump" ? scenario::bump_cell(c.height, per_cell) : scenario::zero_cell(per_cell);
    std::vector<double> alphas;
    for (std::size_t i = 0; i < c.alphas; ++i)
        alphas.push_back(kTwoPi * static_cast<double>(i) / static_cast<double>(c.alphas));
    const auto bands = direct_integral::band_structure(v, alphas, static_cast<std::size_t>(c.k));
    Table table;
    table.columns = {"alpha"};
    for (long j = 0; j < c.k; ++j) table.columns.push_back("E" + std::to_string(j));
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        std::vector<Cell> row{alphas[i]};
        for (double e : bands.energies[i]) row.push_back(e);
        table.rows.push_back(std::move(row));
    }
    table.summary["continuity_ratio"] = direct_integral::band_continuity_ratio(bands, v.min());
    if (c.k >= 2) {
        double top0 = -1e300, bottom1 = 1e300;
        for (const auto& e : bands.energies) {
            top0 = std::max(top0, e[0]);
            bottom1 = std::min(bottom1, e[1]);
        }
        table.summary["first_gap"] = bottom1 - top0;
    }
    return table;
}

}  // namespace qtrap::cli
