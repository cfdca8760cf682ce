#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cli.hpp"
#include "qtrap/errors.hpp"

namespace qtrap::cli {

namespace {

void add_output_options(CLI::App* sub, RunConfig& c, std::string& config_path) {
    sub->add_option("--format", c.format, "csv or json");
    sub->add_option("--output", c.output, "output file (default: standard output)");
    sub->add_option("--config", config_path, "JSON file whose keys override the flags");
    sub->add_option("--seed", c.seed, "seed for randomized checks");
    sub->add_flag("--timing", c.timing, "include wall time in JSON metadata");
}

void add_packet_options(CLI::App* sub, RunConfig& c) {
    sub->add_option("--x0", c.x0, "packet center");
    sub->add_option("--sigma", c.sigma, "packet position spread");
    sub->add_option("--p0", c.p0, "packet mean momentum");
}

Table dispatch(const RunConfig& c) {
    if (c.command == "spectrum") return cmd_spectrum(c);
    if (c.command == "evolve") return cmd_evolve(c);
    if (c.command == "leakage") return cmd_leakage(c);
    if (c.command == "momentum") return cmd_momentum(c);
    if (c.command == "bands") return cmd_bands(c);
    return cmd_verify(c);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig c;
    std::string config_path;
    CLI::App app{"Confined quantum dynamics: spectra, evolution, leakage, momentum and bands"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    auto* spectrum = app.add_subcommand("spectrum", "eigenvalues, closed form and finite differences");
    spectrum->add_flag("--well", c.well, "infinite well on [0, pi]");
    spectrum->add_flag("--calogero", c.calogero, "Calogero oscillator x^2 + gamma/x^2 on a half line");
    spectrum->add_flag("--halpha", c.halpha, "quasi-periodic kinetic energy H_alpha");
    spectrum->add_flag("--fd", c.fd, "add finite-difference eigenvalues and relative errors");
    spectrum->add_option("--nmax", c.nmax, "highest well level");
    spectrum->add_option("--gamma", c.gamma, "Calogero coupling (> -1/4)");
    spectrum->add_option("--k", c.k, "number of Calogero levels");
    spectrum->add_option("--alpha", c.alpha, "quasi-momentum angle");
    spectrum->add_option("--n", c.n_range, "label range FIRST..LAST");
    spectrum->add_option("--points", c.points, "grid points");
    spectrum->add_option("--length", c.length, "half-line length for Calogero");

    auto* evolve = app.add_subcommand("evolve", "time series of a state in the infinite well");
    evolve->add_option("--state", c.state, "well eigenstate (default: Gaussian packet)");
    add_packet_options(evolve, c);
    evolve->add_option("--method", c.method, "spectral or cn");
    evolve->add_option("--dt", c.dt, "Crank-Nicolson step");
    evolve->add_option("--tmax", c.tmax, "final time");
    evolve->add_option("--samples", c.samples, "number of output times");
    evolve->add_option("--points", c.points, "grid points");

    auto* leakage = app.add_subcommand("leakage", "probability leaving a cell over time");
    leakage->add_flag("--multitrap", c.multitrap, "H_q with barriers at k pi/q");
    leakage->add_flag("--calogero", c.calogero, "mirrored Calogero operator on (-L, L)");
    leakage->add_flag("--free", c.free, "free particle on (-L, L), no barrier");
    leakage->add_option("--q", c.q, "multitrap wave number");
    leakage->add_option("--cell", c.cell, "multitrap cell index");
    leakage->add_option("--gamma", c.gamma, "Calogero coupling");
    leakage->add_option("--length", c.length, "half width L");
    leakage->add_option("--dt", c.dt, "Crank-Nicolson step");
    leakage->add_option("--tmax", c.tmax, "final time");
    leakage->add_option("--samples", c.samples, "number of output times");
    leakage->add_option("--points", c.points, "grid points (per cell for --multitrap)");
    add_packet_options(leakage, c);

    auto* momentum = app.add_subcommand("momentum", "full-line momentum density of a well eigenstate");
    momentum->add_option("--well-state,--state", c.state, "well eigenstate index");
    momentum->add_option("--pmax", c.pmax, "momentum window half width");
    momentum->add_option("--count", c.count, "momentum samples");
    momentum->add_option("--points", c.points, "grid points");

    auto* bands = app.add_subcommand("bands", "band structure of a periodic cell potential");
    bands->add_option("--potential", c.potential, "zero or bump");
    bands->add_option("--height", c.height, "bump height");
    bands->add_option("--alphas", c.alphas, "alpha samples in [0, 2 pi)");
    bands->add_option("--k", c.k, "bands");
    bands->add_option("--points", c.points, "points per cell");

    auto* verify = app.add_subcommand("verify", "run the invariant suite");
    verify->add_flag("--all", c.all, "every invariant");

    for (auto* sub : {spectrum, evolve, leakage, momentum, bands, verify}) add_output_options(sub, c, config_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        std::ostringstream o, e2;
        app.exit(e, o, e2);
        out << o.str();
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << '\n';
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        c.command = app.get_subcommands().front()->get_name();
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw ConfigError("cannot read config file " + config_path);
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(in);
            } catch (const nlohmann::json::exception& e) {
                throw ConfigError(std::string("config file is not valid JSON: ") + e.what());
            }
            apply_json_config(c, j);
        }
        validate(c);

        const auto start = std::chrono::steady_clock::now();
        Table table = dispatch(c);
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        std::ofstream file;
        if (!c.output.empty()) {
            file.open(c.output);
            if (!file) throw ConfigError("cannot write " + c.output);
        }
        std::ostream& sink = c.output.empty() ? out : file;
        if (c.format == "json") {
            write_json(sink, table, c, c.timing ? &wall : nullptr);
        } else {
            write_csv(sink, table);
        }
        if (table.status != 0) err << "verify: " << table.summary["failed"] << " invariant(s) failed\n";
        return table.status;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const StructuralError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << '\n';
        return 3;
    }
}

}  // namespace qtrap::cli
