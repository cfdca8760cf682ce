#include <functional>
#include <map>

#include "cli.hpp"

namespace qtrap::cli {

namespace {

using Json = nlohmann::json;

template <class T>
T as(const Json& v, const std::string& key) {
    try {
        if constexpr (std::is_same_v<T, bool>) {
            if (!v.is_boolean()) throw ConfigError("");
        } else if constexpr (std::is_same_v<T, std::string>) {
            if (!v.is_string()) throw ConfigError("");
        } else if constexpr (std::is_floating_point_v<T>) {
            if (!v.is_number()) throw ConfigError("");
        } else if constexpr (std::is_unsigned_v<T>) {
            if (!v.is_number_unsigned()) throw ConfigError("");
        } else {
            if (!v.is_number_integer()) throw ConfigError("");
        }
        return v.get<T>();
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "' has the wrong type");
    }
}

template <class T>
std::function<void(const Json&)> setter_for(T& field, const std::string& key) {
    return [&field, key](const Json& v) { field = as<T>(v, key); };
}

std::map<std::string, std::function<void(const Json&)>> setters(RunConfig& c) {
    return {
        {"well", setter_for(c.well, "well")},
        {"calogero", setter_for(c.calogero, "calogero")},
        {"halpha", setter_for(c.halpha, "halpha")},
        {"multitrap", setter_for(c.multitrap, "multitrap")},
        {"free", setter_for(c.free, "free")},
        {"fd", setter_for(c.fd, "fd")},
        {"all", setter_for(c.all, "all")},
        {"gamma", setter_for(c.gamma, "gamma")},
        {"alpha", setter_for(c.alpha, "alpha")},
        {"q", setter_for(c.q, "q")},
        {"length", setter_for(c.length, "length")},
        {"tmax", setter_for(c.tmax, "tmax")},
        {"dt", setter_for(c.dt, "dt")},
        {"pmax", setter_for(c.pmax, "pmax")},
        {"height", setter_for(c.height, "height")},
        {"x0", setter_for(c.x0, "x0")},
        {"sigma", setter_for(c.sigma, "sigma")},
        {"p0", setter_for(c.p0, "p0")},
        {"nmax", setter_for(c.nmax, "nmax")},
        {"k", setter_for(c.k, "k")},
        {"cell", setter_for(c.cell, "cell")},
        {"state", setter_for(c.state, "state")},
        {"well-state", setter_for(c.state, "well-state")},
        {"n", setter_for(c.n_range, "n")},
        {"method", setter_for(c.method, "method")},
        {"potential", setter_for(c.potential, "potential")},
        {"points", setter_for(c.points, "points")},
        {"samples", setter_for(c.samples, "samples")},
        {"count", setter_for(c.count, "count")},
        {"alphas", setter_for(c.alphas, "alphas")},
        {"format", setter_for(c.format, "format")},
        {"output", setter_for(c.output, "output")},
        {"seed", setter_for(c.seed, "seed")},
        {"timing", setter_for(c.timing, "timing")},
    };
}

}  // namespace

nlohmann::ordered_json RunConfig::to_json() const {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["well"] = well;
    j["calogero"] = calogero;
    j["halpha"] = halpha;
    j["multitrap"] = multitrap;
    j["free"] = free;
    j["fd"] = fd;
    j["all"] = all;
    j["gamma"] = gamma;
    j["alpha"] = alpha;
    j["q"] = q;
    j["length"] = length;
    j["tmax"] = tmax;
    j["dt"] = dt;
    j["pmax"] = pmax;
    j["height"] = height;
    j["x0"] = x0;
    j["sigma"] = sigma;
    j["p0"] = p0;
    j["nmax"] = nmax;
    j["k"] = k;
    j["cell"] = cell;
    j["state"] = state;
    j["n"] = n_range;
    j["method"] = method;
    j["potential"] = potential;
    j["points"] = points;
    j["samples"] = samples;
    j["count"] = count;
    j["alphas"] = alphas;
    j["format"] = format;
    j["seed"] = seed;
    return j;
}

void apply_json_config(RunConfig& config, const nlohmann::json& overrides) {
    if (!overrides.is_object()) throw ConfigError("config file must hold a JSON object");
    auto table = setters(config);
    for (const auto& [key, value] : overrides.items()) {
        if (key == "command") {
            if (!value.is_string() || value.get<std::string>() != config.command)
                throw ConfigError("config file is for command '" + value.dump() + "', not '" + config.command + "'");
            continue;
        }
        auto it = table.find(key);
        if (it == table.end()) throw ConfigError("unknown config key '" + key + "'");
        it->second(value);
    }
}

void validate(const RunConfig& c) {
    if (c.format != "csv" && c.format != "json") throw ConfigError("--format must be csv or json");
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) throw ConfigError(std::string("--") + name + " must be positive");
    };
    if (c.command == "spectrum") {
        const int chosen = int(c.well) + int(c.calogero) + int(c.halpha);
        if (chosen != 1) throw ConfigError("spectrum: choose exactly one of --well, --calogero, --halpha");
        if (c.well && c.nmax < 0) throw ConfigError("--nmax must be >= 0");
        if (c.calogero && c.k < 1) throw ConfigError("--k must be >= 1");
        if (c.calogero && !(c.gamma > -0.25)) throw ConfigError("--gamma must exceed -1/4");
        if (c.calogero) positive(c.length, "length");
        if (c.halpha && c.fd) throw ConfigError("--fd is available for --well and --calogero only");
    } else if (c.command == "evolve") {
        if (c.method != "spectral" && c.method != "cn") throw ConfigError("--method must be spectral or cn");
        positive(c.dt, "dt");
        if (c.tmax < 0.0) throw ConfigError("--tmax must be >= 0");
        positive(c.sigma, "sigma");
        if (c.samples < 1) throw ConfigError("--samples must be >= 1");
    } else if (c.command == "leakage") {
        const int chosen = int(c.multitrap) + int(c.calogero) + int(c.free);
        if (chosen != 1) throw ConfigError("leakage: choose exactly one of --multitrap, --calogero, --free");
        positive(c.q, "q");
        positive(c.dt, "dt");
        positive(c.length, "length");
        if (c.tmax < 0.0) throw ConfigError("--tmax must be >= 0");
        if (c.samples < 1) throw ConfigError("--samples must be >= 1");
    } else if (c.command == "momentum") {
        if (c.state < 0) throw ConfigError("momentum: --well-state N (N >= 0) is required");
        positive(c.pmax, "pmax");
        if (c.count < 2) throw ConfigError("--count must be >= 2");
    } else if (c.command == "bands") {
        if (c.potential != "zero" && c.potential != "bump") throw ConfigError("--potential must be zero or bump");
        if (c.alphas < 2) throw ConfigError("--alphas must be >= 2");
        if (c.k < 1) throw ConfigError("--k must be >= 1");
    } else if (c.command == "verify") {
        if (!c.all) throw ConfigError("verify: pass --all");
    }
}

}  // namespace qtrap::cli
