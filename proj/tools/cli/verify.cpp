#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "cli.hpp"
#include "qtrap/closed_form.hpp"
#include "qtrap/direct_integral.hpp"
#include "qtrap/discrete_solver.hpp"
#include "qtrap/dynamics.hpp"
#include "qtrap/extension_theory.hpp"
#include "qtrap/kinematics.hpp"
#include "scenarios.hpp"

namespace qtrap::cli {

namespace {

namespace ds = discrete_solver;
namespace et = extension_theory;
namespace di = direct_integral;

struct Outcome {
    double value;
    double bound;
    bool upper;  // pass when value <= bound, else value >= bound
};

struct Check {
    std::string name;
    std::function<Outcome(std::mt19937_64&)> run;
};

Outcome at_most(double v, double b) { return {v, b, true}; }
Outcome at_least(double v, double b) { return {v, b, false}; }

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Smooth confined state: random combination of the first few well modes.
WaveFunction random_well_state(const Grid& grid, std::mt19937_64& rng, int modes) {
    ExponentialSum f;
    for (int m = 0; m < modes; ++m)
        f += cplx(uniform(rng, -1, 1), uniform(rng, -1, 1)) * closed_form::well_mode(m);
    return f.sample(grid).normalize();
}

std::vector<Check> suite() {
    std::vector<Check> checks;

    checks.push_back({"closed_form.h_alpha_matches_square_of_momentum", [](std::mt19937_64& rng) {
                          double worst = 0.0;
                          for (double alpha : {0.0, kPi / 2, kPi, uniform(rng, 0, kTwoPi)}) {
                              const auto p = closed_form::momentum_spectrum(alpha, {-5, 5});
                              const auto e = closed_form::h_alpha_spectrum(alpha, {-5, 5});
                              for (std::size_t i = 0; i < e.size(); ++i) {
                                  const double expect = 2.0 * static_cast<double>(e.labels[i]) + alpha / kPi;
                                  worst = std::max(worst, std::abs(e.eigenvalues[i] - expect * expect));
                              }
                              for (std::size_t i = 0; i < p.size(); ++i)
                                  worst = std::max(worst, std::abs(p.eigenvalues[i] -
                                                                   (2.0 * static_cast<double>(p.labels[i]) + alpha / kPi)));
                          }
                          return at_most(worst, 1e-12);
                      }});

    checks.push_back({"discrete_solver.dirichlet_second_order", [](std::mt19937_64&) {
                          const auto oracle = closed_form::infinite_well_spectrum(9);
                          const auto r = ds::convergence_report(ds::potential::Zero{}, Dirichlet{}, oracle,
                                                                {scenario::well_grid(199), scenario::well_grid(399),
                                                                 scenario::well_grid(799)},
                                                                10);
                          double worst = 0.0;
                          for (double o : r.orders) worst = std::max(worst, std::abs(o - 2.0));
                          return at_most(worst, 0.3);
                      }});

    checks.push_back({"discrete_solver.quasi_periodic_hermitian", [](std::mt19937_64& rng) {
                          const double height = uniform(rng, 0, 20);
                          const auto v = scenario::bump_cell(height, 64);
                          const auto op = di::fiber_hamiltonian(v, uniform(rng, 0, kTwoPi));
                          return at_most(op.hermiticity_defect(), 1e-12);
                      }});

    checks.push_back({"extension_theory.u_alpha_boundary_residual", [](std::mt19937_64& rng) {
                          const Grid grid = scenario::well_grid(255);
                          CVector core(grid.size());
                          for (std::size_t j = 0; j < core.size(); ++j) {
                              const double s = std::sin(grid.point(j));
                              core[j] = s * s * s;
                          }
                          const WaveFunction fm(grid, core);
                          double worst = 0.0;
                          for (int i = 0; i < 8; ++i) {
                              const double alpha = uniform(rng, 0, kTwoPi);
                              const auto u = et::build_U_alpha(alpha);
                              const auto el = et::assemble_extension_element(
                                  u.matrix, fm, {cplx(uniform(rng, -1, 1), uniform(rng, -1, 1)),
                                                 cplx(uniform(rng, -1, 1), uniform(rng, -1, 1))});
                              worst = std::max(worst, et::boundary_residual(el.trace, alpha));
                          }
                          return at_most(worst, 1e-8);
                      }});

    checks.push_back({"extension_theory.classify_round_trip", [](std::mt19937_64& rng) {
                          double worst = 0.0;
                          for (int i = 0; i < 8; ++i) {
                              const double alpha = uniform(rng, 0.01, kTwoPi - 0.01);
                              const auto cls = et::classify_extension(et::build_U_alpha(alpha).matrix);
                              const auto* qp = std::get_if<et::QuasiPeriodicFamily>(&cls);
                              worst = std::max(worst, qp ? std::abs(qp->alpha - alpha) : 1.0);
                          }
                          return at_most(worst, 1e-9);
                      }});

    checks.push_back({"dynamics.spectral_unitarity_and_composition", [](std::mt19937_64& rng) {
                          const Grid grid = scenario::well_grid(255);
                          const auto prop = dynamics::Propagator::spectral(dynamics::well_basis(grid, grid.size()));
                          const WaveFunction psi0 = scenario::gaussian(grid, uniform(rng, 1.2, 1.9), 0.25,
                                                                       uniform(rng, -5, 5));
                          const double t1 = uniform(rng, 0, 2), t2 = uniform(rng, 0, 2);
                          const WaveFunction a = dynamics::evolve(prop, psi0, t1);
                          const WaveFunction b = dynamics::evolve(prop, a.normalize(), t2);
                          const WaveFunction c = dynamics::evolve(prop, psi0, t1 + t2);
                          return at_most(std::max(std::abs(a.norm() - 1.0), l2_distance(b, c)), 1e-9);
                      }});

    checks.push_back({"dynamics.well_revival", [](std::mt19937_64& rng) {
                          const Grid grid = scenario::well_grid(255);
                          const auto prop = dynamics::Propagator::spectral(dynamics::well_basis(grid, grid.size()));
                          const WaveFunction psi0 = scenario::gaussian(grid, uniform(rng, 1.2, 1.9), 0.25, 4.0);
                          const WaveFunction psi = dynamics::evolve(prop, psi0, kTwoPi);
                          return at_least(std::norm(inner_product(psi0, psi)), 1.0 - 1e-8);
                      }});

    checks.push_back({"dynamics.crank_nicolson_norm_drift", [](std::mt19937_64& rng) {
                          const Grid grid = scenario::well_grid(255);
                          const auto op = ds::assemble(grid, ds::potential::Zero{}, Dirichlet{});
                          const auto prop = dynamics::Propagator::crank_nicolson(op, 1e-4);
                          const WaveFunction psi0 = scenario::gaussian(grid, kPi / 2, 0.3, uniform(rng, -5, 5));
                          return at_most(std::abs(dynamics::evolve(prop, psi0, 1.0).norm() - 1.0), 1e-8);
                      }});

    checks.push_back({"dynamics.multitrap_leakage", [](std::mt19937_64& rng) {
                          const double q = std::vector<double>{1.0, 2.0, 3.0}[rng() % 3];
                          const closed_form::MultitrapParams params(q);
                          const Grid grid = scenario::multitrap_window(q, 0, 128);
                          const Interval cell = dynamics::multitrap_cell(params, 0);
                          const auto prop = dynamics::multitrap_propagator(params, grid);
                          const auto r = dynamics::leakage(prop, scenario::cell_packet(grid, cell), cell, {0.1, 1.0, 10.0});
                          return at_most(*std::max_element(r.leaked_mass.begin(), r.leaked_mass.end()), 1e-9);
                      }});

    checks.push_back({"dynamics.indicator_commutes_with_evolution", [](std::mt19937_64& rng) {
                          const closed_form::MultitrapParams params(1.0);
                          const Grid grid = scenario::multitrap_window(1.0, 0, 128);
                          const Interval cell = dynamics::multitrap_cell(params, 0);
                          const auto prop = dynamics::multitrap_propagator(params, grid);
                          const WaveFunction psi0 = scenario::cell_packet(grid, cell);
                          const double t = uniform(rng, 0, 10);
                          const WaveFunction a = restrict_indicator(dynamics::evolve(prop, psi0, t), cell);
                          const WaveFunction b = dynamics::evolve(prop, restrict_indicator(psi0, cell).normalize(), t);
                          return at_most(l2_distance(a, b), 1e-9);
                      }});

    checks.push_back({"dynamics.barriers_at_multitrap_nodes", [](std::mt19937_64& rng) {
                          const double q = std::vector<double>{1.0, 2.0, 4.0}[rng() % 3];
                          const closed_form::MultitrapParams params(q);
                          const Grid grid = Grid::interior(Interval(-kTwoPi, kTwoPi), 4 * 256 - 1);
                          const auto found =
                              dynamics::detect_barriers(closed_form::multitrap_ground_state(params, grid));
                          const auto expect = params.nodes_in(Interval(-kTwoPi + 1e-9, kTwoPi - 1e-9));
                          if (found.size() != expect.size()) return at_most(1.0, 0.0);
                          double worst = 0.0;
                          for (std::size_t i = 0; i < found.size(); ++i)
                              worst = std::max(worst, std::abs(found[i] - expect[i]));
                          return at_most(worst, 1e-9);
                      }});

    checks.push_back({"dynamics.ground_state_hamiltonian_residual", [](std::mt19937_64& rng) {
                          const double q = uniform(rng, 0.5, 3.0);
                          const Grid grid = Grid::interior(Interval(0.1, 6.0), 40000);
                          CVector v(grid.size());
                          for (std::size_t j = 0; j < v.size(); ++j) v[j] = std::sin(q * grid.point(j));
                          const WaveFunction phi(grid, v);
                          const auto pot = dynamics::hamiltonian_from_ground_state(
                              phi, dynamics::AnalyticDerivative{[q](double x) { return -q * q * std::sin(q * x); }});
                          return at_most(dynamics::ground_state_residual(phi, pot), 1e-6);
                      }});

    checks.push_back({"dynamics.extension_divergence", [](std::mt19937_64&) {
                          const Grid grid = scenario::well_grid(255);
                          const auto cmp = dynamics::compare_extensions(
                              closed_form::well_mode(0).sample(grid).normalize(), 0.0, 0.5);
                          const bool norms = std::max(cmp.dirichlet_norm_drift, cmp.alpha_norm_drift) <= 1e-10;
                          return at_least(norms ? cmp.distance : 0.0, 0.1);
                      }});

    checks.push_back({"kinematics.heisenberg_bound", [](std::mt19937_64& rng) {
                          const Grid grid = scenario::well_grid(2047);
                          double worst = 1e300;
                          for (int i = 0; i < 16; ++i)
                              worst = std::min(worst, kinematics::uncertainty_product(
                                                          random_well_state(grid, rng, 1 + static_cast<int>(rng() % 6)))
                                                          .product);
                          return at_least(worst, 0.5 - 1e-6);
                      }});

    checks.push_back({"kinematics.plancherel_improves_with_window", [](std::mt19937_64&) {
                          const Grid grid = scenario::well_grid(4000);
                          const WaveFunction f = closed_form::well_mode(0).sample(grid).normalize();
                          double prev = 1e300, worst = 0.0;
                          for (double pmax : {20.0, 40.0, 80.0}) {
                              const auto d = kinematics::fourier_transform(
                                  f, kinematics::symmetric_momenta(pmax, static_cast<std::size_t>(pmax * 100) + 1));
                              const double gap = std::abs(1.0 - kinematics::probability_momentum(d, Interval(-pmax, pmax)));
                              if (gap >= prev) worst = 1.0;
                              worst = std::max(worst, gap * pmax);  // tail ~ 1/pmax^3, so gap*pmax stays small
                              prev = gap;
                          }
                          return at_most(worst, 1e-2);
                      }});

    checks.push_back({"kinematics.position_complement", [](std::mt19937_64& rng) {
                          const Grid grid = scenario::well_grid(1023);
                          const WaveFunction f = random_well_state(grid, rng, 4);
                          const double cut = uniform(rng, 0.2, 3.0);
                          const double s = kinematics::probability_position(f, Interval(0.0, cut)) +
                                           kinematics::probability_position(f, Interval(cut, kPi));
                          return at_most(std::abs(s - 1.0), 1e-10);
                      }});

    checks.push_back({"kinematics.translation_covariance", [](std::mt19937_64& rng) {
                          const Grid a = scenario::well_grid(1023);
                          const double shift = std::round(uniform(rng, -5, 5));
                          const Grid b = Grid::interior(Interval(shift, kPi + shift), 1023);
                          const WaveFunction f = random_well_state(a, rng, 3);
                          const WaveFunction g(b, CVector(f.values().begin(), f.values().end()));
                          const auto p = kinematics::symmetric_momenta(20.0, 401);
                          const auto da = kinematics::fourier_transform(f, p);
                          const auto db = kinematics::fourier_transform(g, p);
                          double worst = 0.0;
                          for (std::size_t i = 0; i < p.size(); ++i)
                              worst = std::max(worst, std::abs(da.density[i] - db.density[i]));
                          return at_most(worst, 1e-10);
                      }});

    checks.push_back({"kinematics.density_at_zero_matches_analytic_transform", [](std::mt19937_64&) {
                          const Grid grid = scenario::well_grid(4000);
                          const WaveFunction f = closed_form::well_mode(0).sample(grid).normalize();
                          const auto d = kinematics::fourier_transform(f, {0.0});
                          // f~(0) = (1/2 pi) sqrt(2/pi) * 2
                          const double amp = std::sqrt(2.0 / kPi) / kPi;
                          return at_most(std::abs(d.density[0] - kTwoPi * amp * amp), 1e-6);
                      }});

    checks.push_back({"direct_integral.parseval_and_round_trip", [](std::mt19937_64& rng) {
                          const Grid line = di::line_grid(-2, 4, 128);
                          const WaveFunction f = scenario::gaussian(line, kPi + uniform(rng, -0.3, 0.3), 0.3,
                                                                    uniform(rng, -3, 3));
                          const auto dec = di::decompose(f, 16);
                          double mean = 0.0;
                          for (const auto& g : dec.fibers) mean += g.squared_norm() / 16.0;
                          const double err = std::max(std::abs(mean - 1.0), l2_distance(di::reconstruct(dec), f));
                          return at_most(std::max(err, di::fiber_boundary_residual(dec)), 1e-8);
                      }});

    checks.push_back({"direct_integral.free_bands_match_h_alpha", [](std::mt19937_64& rng) {
                          std::vector<double> alphas;
                          for (int i = 0; i < 4; ++i) alphas.push_back(uniform(rng, 0, kTwoPi));
                          const auto bands = di::band_structure(scenario::zero_cell(400), alphas, 6);
                          double worst = 0.0;
                          for (std::size_t i = 0; i < alphas.size(); ++i) {
                              const auto exact = closed_form::h_alpha_spectrum(alphas[i], {-4, 4});
                              for (std::size_t j = 0; j < 6; ++j)
                                  worst = std::max(worst, std::abs(bands.energies[i][j] - exact.eigenvalues[j]) /
                                                              std::max(1.0, exact.eigenvalues[j]));
                          }
                          return at_most(worst, 1e-3);
                      }});

    checks.push_back({"direct_integral.bands_continuous", [](std::mt19937_64&) {
                          const auto v = scenario::bump_cell(10.0, 128);
                          std::vector<double> alphas;
                          for (int i = 0; i <= 32; ++i) alphas.push_back(kTwoPi * i / 32.0);
                          return at_most(di::band_continuity_ratio(di::band_structure(v, alphas, 4), v.min()), 1.0);
                      }});

    checks.push_back({"direct_integral.spectrum_union", [](std::mt19937_64& rng) {
                          std::vector<double> energies{0.0, 1.0, 5.0, 17.3, uniform(rng, 0, 100)};
                          double worst = 0.0;
                          for (const auto& w : di::spectrum_union_check(energies)) {
                              const double p = 2.0 * static_cast<double>(w.n) + w.alpha / kPi;
                              worst = std::max(worst, w.found ? std::abs(p * p - w.energy) : 1.0);
                          }
                          return at_most(worst, 1e-12);
                      }});

    return checks;
}

}  // namespace

Table cmd_verify(const RunConfig& c) {
    Table table;
    table.columns = {"invariant", "status", "value", "bound"};
    std::mt19937_64 rng(c.seed);
    std::size_t failed = 0;
    for (const auto& check : suite()) {
        std::mt19937_64 local(rng());  // each check draws from its own stream
        std::string status;
        Outcome o{0.0, 0.0, true};
        try {
            o = check.run(local);
            const bool ok = o.upper ? o.value <= o.bound : o.value >= o.bound;
            status = ok ? "PASS" : "FAIL";
        } catch (const std::exception& e) {
            status = std::string("ERROR: ") + e.what();
        }
        if (status != "PASS") ++failed;
        table.rows.push_back({check.name, status, o.value, o.bound});
    }
    table.summary["checks"] = static_cast<long>(table.rows.size());
    table.summary["failed"] = static_cast<long>(failed);
    table.status = failed == 0 ? 0 : 1;
    return table;
}

}  // namespace qtrap::cli
