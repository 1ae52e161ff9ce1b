#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "fastpoisson/cli.hpp"
#include "fastpoisson/field_io.hpp"

using namespace fastpoisson;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "fpsolve");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("fp_cli_" + std::to_string(::getpid()) + "_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<std::vector<std::string>> read_csv(const std::string& text) {
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

// rhs of extents (12, 10) with mean 0.25 plus a smooth part
fs::path write_rhs(const fs::path& dir) {
    FieldBuffer<double> f(Extents{12, 10});
    for_each_index(f.extents(), [&](std::size_t i, std::size_t j, std::size_t) {
        f(i, j) = 0.25 + std::sin(0.7 * static_cast<double>(i)) * std::cos(0.3 * static_cast<double>(j));
    });
    io::write_field(dir, "rhs", f, {});
    return dir / "rhs.json";
}

}  // namespace

TEST_CASE("help and parse errors") {
    CHECK(run({"--help"}).code == cli::kOk);
    CHECK(run({}).code == cli::kConfigError);
    CHECK(run({"frobnicate"}).code == cli::kConfigError);
    CHECK(run({"bench", "--reps", "many"}).code == cli::kConfigError);
}

TEST_CASE("solve is deterministic and reports the removed mean") {
    const auto dir = scratch("solve");
    const auto rhs = write_rhs(dir);
    const std::vector<std::string> flags{"--bc", "neumann", "--grid", "staggered", "--approx", "fd2"};
    auto a = flags, b = flags;
    a.insert(a.begin(), {"solve", "--in", rhs.string(), "--out", (dir / "a").string()});
    b.insert(b.begin(), {"solve", "--in", rhs.string(), "--out", (dir / "b").string()});
    REQUIRE(run(a).code == cli::kOk);
    REQUIRE(run(b).code == cli::kOk);
    CHECK(slurp(dir / "a" / "solution.bin") == slurp(dir / "b" / "solution.bin"));
    CHECK(slurp(dir / "a" / "solution.json") == slurp(dir / "b" / "solution.json"));

    const auto report = io::read_json(dir / "a" / "report.json");
    CHECK(report.at("removed_mean").get<double>() != 0.0);
    CHECK(report.at("mode") == "uniform");
    const auto manifest = io::read_json(dir / "a" / "manifest.json");
    CHECK(manifest.at("subcommand") == "solve");
    CHECK(manifest.at("config").at("approximation") == "fd2");
    CHECK(manifest.at("config").at("axes").size() == 2);
    CHECK(manifest.at("threads") == 1);
    CHECK(manifest.contains("timestamp"));

    const auto sol = io::read_field(dir / "a" / "solution.json");
    CHECK(sol.data.extents() == Extents{12, 10});
    CHECK(sol.header.grids.size() == 2);
    fs::remove_all(dir);
}

TEST_CASE("solve exit codes") {
    const auto dir = scratch("solve_errors");
    const auto rhs = write_rhs(dir);
    const auto out = (dir / "o").string();

    const auto mismatch = run({"solve", "--in", rhs.string(), "--out", out, "--size", "12,11"});
    CHECK(mismatch.code == cli::kConfigError);
    CHECK(mismatch.err.find("(12x10)") != std::string::npos);
    CHECK(mismatch.err.find("(12x11)") != std::string::npos);

    CHECK(run({"solve", "--in", (dir / "nope.json").string(), "--out", out}).code == cli::kIoError);
    CHECK(run({"solve", "--in", rhs.string(), "--out", out, "--format-version", "2"}).code == cli::kConfigError);
    CHECK(run({"solve", "--in", rhs.string(), "--out", out, "--bc", "sideways"}).code == cli::kConfigError);
    CHECK(run({"solve", "--in", rhs.string(), "--out", out, "--bc", "neumann,dirichlet"}).code ==
          cli::kConfigError);

    FieldBuffer<double> bad(Extents{4, 4});
    bad(1, 2) = std::numeric_limits<double>::quiet_NaN();
    io::write_field(dir, "bad", bad, {});
    CHECK(run({"solve", "--in", (dir / "bad.json").string(), "--out", out}).code == cli::kIoError);
    fs::remove_all(dir);
}

TEST_CASE("verify filtering and fault hook") {
    const auto all = run({"verify"});
    CHECK(all.code == cli::kOk);
    const auto summary = nlohmann::json::parse(all.out);
    CHECK(summary.at("failed") == 0);
    CHECK(summary.at("total").get<std::size_t>() >= 10);

    const auto dir = scratch("verify");
    const auto filtered = run({"verify", "--bc", "dirichlet", "--grid", "staggered", "--out", dir.string()});
    CHECK(filtered.code == cli::kOk);
    const auto report = io::read_json(dir / "report.json");
    CHECK(report.at("total").get<std::size_t>() > 0);
    for (const auto& c : report.at("cases")) {
        const auto name = c.at("name").get<std::string>();
        CHECK_MESSAGE(name.find("dirichlet-staggered") != std::string::npos, name);
    }
    CHECK(io::read_json(dir / "manifest.json").at("subcommand") == "verify");

    const auto faulty = run({"verify", "--fault-factor", "1.000001"});
    CHECK(faulty.code == cli::kSuiteFailure);
    CHECK(nlohmann::json::parse(faulty.out).at("failed").get<std::size_t>() > 0);
    fs::remove_all(dir);
}

TEST_CASE("bench writes the CSV contract") {
    const auto dir = scratch("bench");
    REQUIRE(run({"bench", "--sizes", "16,32", "--reps", "3", "--out", dir.string()}).code == cli::kOk);
    const auto rows = read_csv(slurp(dir / "bench.csv"));
    REQUIRE(rows.size() == 9);
    CHECK(rows[0] == std::vector<std::string>{"size", "phase", "median", "min", "threads"});
    for (std::size_t r = 1; r < rows.size(); ++r) {
        REQUIRE(rows[r].size() == 5);
        CHECK(std::stod(rows[r][3]) <= std::stod(rows[r][2]));
        CHECK(rows[r][4] == "1");
    }
    CHECK(rows[4][1] == "total");
    CHECK(io::read_json(dir / "manifest.json").at("config").at("reps") == 3);
    CHECK(run({"bench", "--sizes", "16,0"}).code == cli::kConfigError);
    CHECK(run({"bench", "--sizes", "2097152", "--dims", "3"}).code == cli::kAllocationError);
    fs::remove_all(dir);
}

TEST_CASE("demo-flow taylor-green time series") {
    const auto dir = scratch("tg");
    REQUIRE(run({"demo-flow", "--size", "32,32", "--steps", "20", "--out", dir.string()}).code == cli::kOk);
    const auto rows = read_csv(slurp(dir / "timeseries.csv"));
    REQUIRE(rows.size() == 22);
    CHECK(rows[0] == std::vector<std::string>{"step", "time", "kinetic_energy", "ke_analytic", "max_divergence",
                                              "divergence_bound", "cfl"});
    for (std::size_t r = 1; r < rows.size(); ++r) {
        CHECK(std::stod(rows[r][4]) <= std::stod(rows[r][5]));
        if (r > 1) CHECK(std::stod(rows[r][2]) < std::stod(rows[r - 1][2]));
    }
    const auto report = io::read_json(dir / "report.json");
    CHECK(report.at("steps_completed") == 20);
    CHECK(report.at("divergence_within_bound") == true);
    CHECK(fs::exists(dir / "step000020_u0.json"));
    CHECK(io::read_json(dir / "manifest.json").at("config").at("nu") == 0.01);
    fs::remove_all(dir);
}

TEST_CASE("demo-flow channel at rest stays at rest") {
    const auto dir = scratch("channel");
    REQUIRE(run({"demo-flow", "--case", "channel", "--size", "16,9", "--ic", "zero", "--forcing", "0", "--steps",
                 "5", "--snapshot-every", "1", "--out", dir.string()})
                .code == cli::kOk);
    for (int s = 0; s <= 5; ++s) {
        char stem[32];
        std::snprintf(stem, sizeof stem, "step%06d", s);
        for (const char* part : {"_u0", "_u1", "_p"}) {
            const auto f = io::read_field(dir / (std::string(stem) + part + ".json"));
            for (double v : f.data.data()) CHECK(v == 0.0);
        }
    }
    fs::remove_all(dir);
}

TEST_CASE("demo-flow instability exits with the step index") {
    const auto r = run({"demo-flow", "--size", "16,16", "--dt", "10"});
    CHECK(r.code == cli::kInstability);
    CHECK(r.err.find("instability at step") != std::string::npos);
    CHECK(run({"demo-flow", "--case", "vortex-street"}).code == cli::kConfigError);
    CHECK(run({"demo-flow", "--dt", "0"}).code == cli::kConfigError);
}
