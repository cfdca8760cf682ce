#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace qtrap::cli;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "qtrap");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("qtrap_test_" + name)).string();
}

}  // namespace

TEST_CASE("well spectrum table") {
    const auto r = invoke({"spectrum", "--well", "--nmax", "4", "--fd", "--points", "511"});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 6);
    CHECK(rows[0] == std::vector<std::string>{"label", "closed_form", "fd", "rel_error"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double n = std::stod(rows[i][0]);
        CHECK(std::stod(rows[i][1]) == (n + 1) * (n + 1));
        const double fd = std::stod(rows[i][2]);
        CHECK(std::abs(std::stod(rows[i][3]) - std::abs(fd - (n + 1) * (n + 1)) / ((n + 1) * (n + 1))) <= 1e-12);
        CHECK(std::stod(rows[i][3]) <= 1e-3);
    }
}

TEST_CASE("Calogero and H_alpha spectra") {
    const auto c = parse_csv(invoke({"spectrum", "--calogero", "--gamma", "2", "--k", "4"}).out);
    REQUIRE(c.size() == 5);
    for (std::size_t i = 1; i < c.size(); ++i) CHECK(std::stod(c[i][1]) == doctest::Approx(4.0 * (i - 1) + 5.0));

    const auto h = parse_csv(invoke({"spectrum", "--halpha", "--alpha", "1", "--n", "-1..1"}).out);
    REQUIRE(h.size() == 4);
    for (std::size_t i = 1; i < h.size(); ++i) {
        const double n = std::stod(h[i][0]);
        const double k = 2 * n + 1.0 / M_PI;
        CHECK(std::stod(h[i][1]) == doctest::Approx(k * k).epsilon(1e-14));
    }
}

TEST_CASE("csv values round-trip exactly") {
    const auto r = invoke({"spectrum", "--halpha", "--alpha", "0.3", "--n", "0..0"});
    const auto rows = parse_csv(r.out);
    const double k = 0.3 / M_PI;
    CHECK(std::stod(rows[1][1]) == k * k);
    CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("json output carries metadata and rows") {
    const auto r = invoke({"spectrum", "--well", "--nmax", "2", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["metadata"]["version"] == kVersion);
    CHECK(j["metadata"]["config"]["nmax"] == 2);
    CHECK(j["columns"].size() == 2);
    CHECK(j["rows"].size() == 3);
    CHECK(j["rows"][2][1].get<double>() == 9.0);
    CHECK_FALSE(j["metadata"].contains("wall_seconds"));
}

TEST_CASE("invalid configurations exit with 2") {
    CHECK(invoke({"spectrum"}).code == 2);
    CHECK(invoke({"spectrum", "--well", "--calogero"}).code == 2);
    CHECK(invoke({"spectrum", "--calogero", "--gamma", "-0.3"}).code == 2);
    CHECK(invoke({"spectrum", "--halpha", "--n", "3..1"}).code == 2);
    CHECK(invoke({"spectrum", "--well", "--format", "xml"}).code == 2);
    CHECK(invoke({"evolve", "--method", "euler"}).code == 2);
    CHECK(invoke({"evolve", "--tmax", "-1"}).code == 2);
    CHECK(invoke({"bands", "--potential", "square"}).code == 2);
    CHECK(invoke({"leakage"}).code == 2);
    CHECK(invoke({"momentum", "--state", "-1"}).code == 2);
    CHECK(invoke({"nonsense"}).code == 2);
    const auto r = invoke({"spectrum", "--well", "--bogus"});
    CHECK(r.code == 2);
    CHECK(r.err.find("error") != std::string::npos);
    CHECK(r.out.empty());
}

TEST_CASE("config files override flags and reject unknown keys") {
    const std::string good = temp_path("good.json");
    const std::string bad = temp_path("bad.json");
    const std::string broken = temp_path("broken.json");
    std::ofstream(good) << R"({"nmax": 1, "fd": true})";
    std::ofstream(bad) << R"({"nmaxx": 1})";
    std::ofstream(broken) << "{nmax";

    const auto r = invoke({"spectrum", "--well", "--nmax", "7", "--config", good});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    CHECK(rows.size() == 3);
    CHECK(rows[0].size() == 4);

    CHECK(invoke({"spectrum", "--well", "--config", bad}).code == 2);
    CHECK(invoke({"spectrum", "--well", "--config", broken}).code == 2);
    CHECK(invoke({"spectrum", "--well", "--config", temp_path("missing.json")}).code == 2);

    std::ofstream(bad) << R"({"nmax": "three"})";
    CHECK(invoke({"spectrum", "--well", "--config", bad}).code == 2);
    std::filesystem::remove(good);
    std::filesystem::remove(bad);
    std::filesystem::remove(broken);
}

TEST_CASE("output file receives the table") {
    const std::string path = temp_path("out.csv");
    const auto r = invoke({"spectrum", "--well", "--nmax", "1", "--output", path});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    std::stringstream s;
    s << in.rdbuf();
    CHECK(s.str() == invoke({"spectrum", "--well", "--nmax", "1"}).out);
    std::filesystem::remove(path);
}

TEST_CASE("other commands produce well-formed tables") {
    const auto bands = parse_csv(invoke({"bands", "--alphas", "3", "--k", "2"}).out);
    REQUIRE(bands.size() == 4);
    CHECK(bands[0] == std::vector<std::string>{"alpha", "E0", "E1"});
    CHECK(std::stod(bands[2][1]) == doctest::Approx(4.0 / 9.0).epsilon(1e-4));

    const auto mom = parse_csv(invoke({"momentum", "--state", "0", "--count", "5", "--pmax", "2"}).out);
    REQUIRE(mom.size() == 6);
    CHECK(std::stod(mom[3][1]) == doctest::Approx(4.0 / (M_PI * M_PI)).epsilon(1e-6));

    const auto ev = parse_csv(invoke({"evolve", "--state", "0", "--samples", "3"}).out);
    REQUIRE(ev.size() == 4);
    for (std::size_t i = 1; i < ev.size(); ++i) CHECK(std::abs(std::stod(ev[i][1]) - 1.0) <= 1e-10);

    const auto leak = parse_csv(invoke({"leakage", "--multitrap", "--q", "2", "--samples", "3"}).out);
    REQUIRE(leak.size() == 4);
    for (std::size_t i = 1; i < leak.size(); ++i) CHECK(std::abs(std::stod(leak[i][2])) <= 1e-10);
}

TEST_CASE("help and version") {
    const auto v = invoke({"--version"});
    CHECK(v.code == 0);
    CHECK(v.out == std::string(kVersion) + "\n");
    const auto h = invoke({"--help"});
    CHECK(h.code == 0);
    CHECK(h.out.find("spectrum") != std::string::npos);
}

TEST_CASE("runs are deterministic") {
    const std::vector<std::string> cmd{"evolve", "--method", "cn", "--samples", "4", "--tmax", "0.2"};
    CHECK(invoke(cmd).out == invoke(cmd).out);
    const auto a = invoke({"verify", "--all", "--seed", "7"});
    const auto b = invoke({"verify", "--all", "--seed", "7"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK_FALSE(a.out.empty());
}
