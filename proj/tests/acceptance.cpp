// One PASS/FAIL line per acceptance criterion. Tolerances are pinned below.
//
// Exit status is 0 when every failing criterion is listed in kKnownFailures
// and every listed one still fails; anything else exits 1.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "qtrap/closed_form.hpp"
#include "qtrap/direct_integral.hpp"
#include "qtrap/discrete_solver.hpp"
#include "qtrap/dynamics.hpp"
#include "qtrap/extension_theory.hpp"
#include "qtrap/kinematics.hpp"
#include "scenarios.hpp"

using namespace qtrap;
namespace ds = qtrap::discrete_solver;
namespace et = qtrap::extension_theory;
namespace di = qtrap::direct_integral;
namespace sc = qtrap::cli::scenario;

namespace {

// The required momentum density at p = 0 (4/pi^3) disagrees with the
// transform of sqrt(2/pi) sin x, which gives 4/pi^2. Kept as a live check.
const std::set<int> kKnownFailures{7};

struct Line {
    std::string what;
    bool ok;
};

struct Report {
    std::vector<Line> lines;
    std::vector<std::string> notes;
    void check(const std::string& what, bool ok) { lines.push_back({what, ok}); }
    void note(const std::string& text) { notes.push_back(text); }
    bool ok() const {
        return std::all_of(lines.begin(), lines.end(), [](const Line& l) { return l.ok; });
    }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double max_rel(const std::vector<double>& got, const std::vector<double>& want, std::size_t k) {
    double worst = 0.0;
    for (std::size_t i = 0; i < k; ++i) worst = std::max(worst, std::abs(got[i] - want[i]) / std::max(1.0, std::abs(want[i])));
    return worst;
}

void closed_form_fidelity(Report& r) {
    const closed_form::IntegerRange labels{-6, 6};
    double worst = 0.0;
    for (int twice : {0, 1, 2}) {  // alpha / pi = 0, 1/2, 1 are exact binary fractions
        const double frac = 0.5 * twice;
        const double alpha = frac * kPi;
        const auto p = closed_form::momentum_spectrum(alpha, labels);
        const auto e = closed_form::h_alpha_spectrum(alpha, labels);
        for (std::size_t i = 0; i < p.size(); ++i)
            worst = std::max(worst, std::abs(p.eigenvalues[i] - (2.0 * static_cast<double>(p.labels[i]) + frac)));
        for (std::size_t i = 0; i < e.size(); ++i) {
            const double k = 2.0 * static_cast<double>(e.labels[i]) + frac;
            worst = std::max(worst, std::abs(e.eigenvalues[i] - k * k));
        }
    }
    r.check(fmt("p = 2n + alpha/pi, E = p^2 exact: max err %.2e <= 1e-12", worst), worst <= 1e-12);

    const auto rot = closed_form::h_alpha_spectrum(0.0, labels);
    bool paired = rot.eigenvalues[0] == 0.0;
    for (std::size_t i = 1; i + 1 < rot.size(); i += 2) paired = paired && rot.eigenvalues[i] == rot.eigenvalues[i + 1];
    r.check("alpha = 0 levels (2n)^2, n != 0, doubly degenerate", paired);
}

void fd_convergence(Report& r) {
    const auto oracle = closed_form::infinite_well_spectrum(9);
    const auto ev = ds::eigenvalues(ds::assemble(sc::well_grid(1999), ds::potential::Zero{}, Dirichlet{}), 10);
    const double rel = max_rel(ev, oracle.eigenvalues, 10);
    r.check(fmt("n = 1999 lowest 10 vs (n+1)^2: rel %.2e <= 1e-4", rel), rel <= 1e-4);

    const auto rep = ds::convergence_report(ds::potential::Zero{}, Dirichlet{}, oracle,
                                            {sc::well_grid(499), sc::well_grid(999), sc::well_grid(1999)}, 10);
    double worst = 0.0;
    for (double o : rep.orders) worst = std::max(worst, std::abs(o - 2.0));
    r.check(fmt("observed order %.4f, %.4f within 2.0 +- 0.3", rep.orders[0], rep.orders[1]), worst <= 0.3);
}

void calogero(Report& r) {
    const Grid grid = sc::half_line_grid(12.0, 4000);
    const auto two = ds::eigenvalues(ds::assemble(grid, ds::potential::Calogero{2.0}, Dirichlet{}), 2);
    const double rel = std::max(std::abs(two[0] - 5.0) / 5.0, std::abs(two[1] - 9.0) / 9.0);
    r.check(fmt("gamma = 2: E0 = %.6f, E1 = %.6f vs 5, 9 rel %.2e <= 1e-2", two[0], two[1], rel), rel <= 1e-2);

    const auto small = ds::eigenvalues(ds::assemble(grid, ds::potential::Calogero{1e-6}, Dirichlet{}), 3);
    const double rel0 = max_rel(small, {3.0, 7.0, 11.0}, 3);
    r.check(fmt("gamma = 1e-6: lowest three vs 4n + 3 rel %.2e <= 1e-2", rel0), rel0 <= 1e-2);
}

void extension_machinery(Report& r) {
    const auto basis = et::deficiency_basis();
    double worst = 0.0;
    for (int k = 0; k < 2; ++k) {
        for (const auto& t : basis.plus(k).terms()) worst = std::max(worst, std::abs(-t.exponent * t.exponent - cplx(0, 2)));
        for (const auto& t : basis.minus(k).terms()) worst = std::max(worst, std::abs(-t.exponent * t.exponent + cplx(0, 2)));
    }
    r.check(fmt("-s^2 = +-2i: max err %.1e <= 1e-15", worst), worst <= 1e-15);

    const Grid grid = sc::well_grid(1023);
    CVector core(grid.size());
    for (std::size_t j = 0; j < core.size(); ++j) {
        const double s = std::sin(grid.point(j));
        core[j] = s * s * s;
    }
    const WaveFunction fm(grid, core);
    double residual = 0.0;
    std::size_t fallbacks = 0;
    std::string report;
    for (int i = 0; i < 32; ++i) {
        const double alpha = kTwoPi * i / 32.0;
        const auto u = et::build_U_alpha(alpha);
        if (u.used_fallback) {
            ++fallbacks;
            if (report.empty()) report = u.report;
        }
        const auto el = et::assemble_extension_element(u.matrix, fm, {cplx(0.7, -0.2), cplx(-0.3, 0.5)});
        residual = std::max(residual, et::boundary_residual(el.trace, alpha));
    }
    r.check(fmt("U_alpha boundary residual at 32 alphas %.2e <= 1e-8", residual), residual <= 1e-8);
    if (fallbacks > 0)
        r.note(fmt("printed U_alpha not unitary at %.0f of 32 alphas, fallback used: ", static_cast<double>(fallbacks)) +
               report);

    const auto el = et::assemble_extension_element(UnitaryMatrix2::minus_identity(),
                                                   WaveFunction(grid, CVector(grid.size(), 0.0)), {1.0, cplx(0.0, 1.0)});
    const double ends = std::max(std::abs(el.trace.value_a), std::abs(el.trace.value_b));
    r.check(fmt("U = -1 endpoint values %.2e <= 1e-10", ends), ends <= 1e-10);
}

void impenetrability(Report& r) {
    double worst = 0.0;
    for (double q : {1.0, 2.0, 3.0}) {
        const closed_form::MultitrapParams params(q);
        const Grid grid = sc::multitrap_window(q, 0, 128);
        const Interval cell = dynamics::multitrap_cell(params, 0);
        const auto prop = dynamics::multitrap_propagator(params, grid);
        const auto rep = dynamics::leakage(prop, sc::cell_packet(grid, cell), cell, {0.5, 1.0, 2.5, 5.0, 7.5, 10.0});
        worst = std::max(worst, *std::max_element(rep.leaked_mass.begin(), rep.leaked_mass.end()));
    }
    r.check(fmt("multitrap leakage for t <= 10: %.2e <= 1e-9", worst), worst <= 1e-9);

    auto leaked = [](const ds::PotentialSpec& v, std::size_t points) {
        const Grid grid = sc::mirrored_grid(8.0, points);
        const Interval half(0.0, 8.0);
        const auto prop = dynamics::Propagator::crank_nicolson(ds::assemble(grid, v, Dirichlet{}), 1e-3);
        const WaveFunction psi0 = sc::gaussian(grid, 2.0, 0.4, -3.0, half);
        return dynamics::leakage(prop, psi0, half, {1.0}).leaked_mass[0];
    };
    const double l1 = leaked(ds::potential::Calogero{2.0}, 400);
    const double l2 = leaked(ds::potential::Calogero{2.0}, 800);
    const double l3 = leaked(ds::potential::Calogero{2.0}, 1600);
    r.check(fmt("mirrored Calogero leakage %.2e > %.2e > %.2e", l1, l2, l3), l1 > l2 && l2 > l3);
    const double free = leaked(ds::potential::Zero{}, 800);
    r.check(fmt("free particle leaks %.3f > 0.01 by t = 1", free), free > 0.01);
}

void unitarity_and_revival(Report& r) {
    const Grid grid = sc::well_grid(255);
    const auto prop = dynamics::Propagator::spectral(dynamics::well_basis(grid, grid.size()));
    const WaveFunction psi0 = sc::gaussian(grid, 1.3, 0.25, 4.0);
    double drift = 0.0;
    for (double t : {0.1, 1.0, 3.7, 10.0, 100.0}) drift = std::max(drift, std::abs(dynamics::evolve(prop, psi0, t).norm() - 1.0));
    r.check(fmt("spectral norm drift %.2e <= 1e-10", drift), drift <= 1e-10);
    const double fidelity = std::norm(inner_product(psi0, dynamics::evolve(prop, psi0, kTwoPi)));
    r.check(fmt("revival fidelity at 2 pi: %.15f >= 1 - 1e-8", fidelity), fidelity >= 1.0 - 1e-8);
}

void kinematics_checks(Report& r) {
    const WaveFunction ground = closed_form::well_mode(0).sample(sc::well_grid(4000)).normalize();
    const double d0 = kinematics::fourier_transform(ground, {0.0}).density[0];
    const double printed = 4.0 / (kPi * kPi * kPi);
    r.check(fmt("density(0) = %.9f vs 4/pi^3 = %.9f within 1e-6", d0, printed), std::abs(d0 - printed) <= 1e-6);
    r.note(fmt("4/pi^2 = %.9f, |density(0) - 4/pi^2| = %.1e", 4.0 / (kPi * kPi), std::abs(d0 - 4.0 / (kPi * kPi))));

    const auto dist = kinematics::fourier_transform(ground, kinematics::symmetric_momenta(40.0, 8001));
    const double mass = kinematics::probability_momentum(dist, Interval(-40.0, 40.0));
    r.check(fmt("momentum mass in [-40, 40]: |1 - %.7f| <= 1e-4", mass), std::abs(mass - 1.0) <= 1e-4);

    const auto u = kinematics::uncertainty_product(ground);
    const double expect = std::sqrt(kPi * kPi / 12.0 - 0.5);
    r.check(fmt("uncertainty product %.8f vs %.8f within 1e-6, >= 0.5", u.product, expect),
            std::abs(u.product - expect) <= 1e-6 && u.product >= 0.5);

    const Grid fine = sc::well_grid(200000);
    double worst = 0.0;
    for (long n : {0L, 1L, 2L, 5L}) {
        const auto un = kinematics::uncertainty_product(closed_form::well_mode(n).sample(fine).normalize());
        worst = std::max(worst, std::abs(un.delta_p - static_cast<double>(n + 1)));
    }
    r.check(fmt("Delta P = n + 1 for n in {0, 1, 2, 5}: err %.2e <= 1e-8", worst), worst <= 1e-8);
}

void direct_integral_checks(Report& r) {
    const std::size_t per_cell = 128;
    const Grid line = di::line_grid(-3, 5, per_cell);
    const WaveFunction f = sc::gaussian(line, kPi, 0.4, 2.0);  // straddles cells 0 and 1
    const auto dec = di::decompose(f, 64);
    const double round = l2_distance(di::reconstruct(dec), f);
    r.check(fmt("round trip M = 64: %.2e <= 1e-8", round), round <= 1e-8);

    double bands = 0.0;
    std::vector<double> alphas;
    for (int i = 0; i < 8; ++i) alphas.push_back(kTwoPi * i / 8.0);
    const auto table = di::band_structure(sc::zero_cell(400), alphas, 6);
    for (std::size_t i = 0; i < alphas.size(); ++i)
        bands = std::max(bands, max_rel(table.energies[i], closed_form::h_alpha_spectrum(alphas[i], {-4, 4}).eigenvalues, 6));
    r.check(fmt("V = 0 bands vs (2n + alpha/pi)^2 rel %.2e <= 1e-3", bands), bands <= 1e-3);

    const double t = 0.2;
    const WaveFunction fibered = di::reconstruct(di::evolve_fibers(dec, sc::zero_cell(per_cell), t, per_cell));
    const auto op = ds::assemble(line, ds::potential::Zero{}, Dirichlet{});
    const WaveFunction direct = dynamics::evolve(dynamics::Propagator::crank_nicolson(op, 2e-5), f, t);
    const double dyn = l2_distance(fibered, direct);
    r.check(fmt("fiber evolution vs line FD at t = 0.2: %.2e <= 1e-3", dyn), dyn <= 1e-3);

    bool all = true;
    for (const auto& w : di::spectrum_union_check({0.0, 1.0, 5.0, 17.3})) {
        const double p = 2.0 * static_cast<double>(w.n) + w.alpha / kPi;
        all = all && w.found && std::abs(p * p - w.energy) <= 1e-12 * std::max(1.0, w.energy);
    }
    r.check("spectrum union for E in {0, 1, 5, 17.3}", all);
}

void inequivalence(Report& r) {
    const WaveFunction psi0 = closed_form::well_mode(0).sample(sc::well_grid(255)).normalize();
    const auto cmp = dynamics::compare_extensions(psi0, 0.0, 0.5);
    r.check(fmt("Dirichlet vs alpha = 0 at t = 0.5: distance %.4f >= 0.1", cmp.distance), cmp.distance >= 0.1);
    const double drift = std::max(cmp.dirichlet_norm_drift, cmp.alpha_norm_drift);
    r.check(fmt("norm drift %.2e <= 1e-10", drift), drift <= 1e-10);
}

void determinism(Report& r) {
    auto once = [] {
        const char* argv[] = {"qtrap", "verify", "--all", "--seed", "7"};
        std::ostringstream out, err;
        const int code = cli::run(5, argv, out, err);
        return std::make_pair(code, out.str());
    };
    const auto a = once();
    const auto b = once();
    r.check(fmt("verify --all --seed 7 twice: byte-identical (%.0f bytes)", static_cast<double>(a.second.size())),
            a.second == b.second && !a.second.empty() && a.first == b.first);
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Report&)>>> criteria{
        {"closed-form fidelity", closed_form_fidelity},
        {"finite-difference convergence", fd_convergence},
        {"Calogero spectrum", calogero},
        {"extension machinery", extension_machinery},
        {"impenetrability", impenetrability},
        {"unitarity and revival", unitarity_and_revival},
        {"kinematics", kinematics_checks},
        {"direct integral", direct_integral_checks},
        {"extension inequivalence", inequivalence},
        {"determinism", determinism},
    };

    int unexpected = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        Report rep;
        const auto start = std::chrono::steady_clock::now();
        try {
            criteria[i].second(rep);
        } catch (const std::exception& e) {
            rep.check(std::string("exception: ") + e.what(), false);
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool known = kKnownFailures.count(id) > 0;
        std::printf("%s criterion %d (%s) [%.2f s]%s\n", rep.ok() ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                    secs, !rep.ok() && known ? " (known)" : "");
        for (const auto& l : rep.lines) std::printf("  %s %s\n", l.ok ? "ok  " : "FAIL", l.what.c_str());
        for (const auto& n : rep.notes) std::printf("  note: %s\n", n.c_str());
        if (rep.ok() == known) ++unexpected;
    }
    std::fflush(stdout);
    return unexpected == 0 ? 0 : 1;
}
