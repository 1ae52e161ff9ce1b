#include "fastpoisson/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <new>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fastpoisson/field_io.hpp"
#include "fastpoisson/flow.hpp"
#include "fastpoisson/solver.hpp"
#include "fastpoisson/verify.hpp"

namespace fastpoisson::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

// Flag values that fail to parse or contradict each other.
class UsageError : public Error {
public:
    using Error::Error;
};

// Raised by demo-flow with the failing step attached.
struct Instability {
    std::size_t step;
    std::string message;
};

template <class T>
T parse_number(std::string_view text, std::string_view flag) {
    T value{};
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty())
        throw UsageError(std::string(flag) + ": cannot parse \"" + std::string(text) + "\"");
    return value;
}

std::vector<std::string> split(std::string_view text) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        parts.emplace_back(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return parts;
}

template <class T>
std::vector<T> parse_list(std::string_view text, std::string_view flag) {
    std::vector<T> values;
    for (const auto& part : split(text)) values.push_back(parse_number<T>(part, flag));
    return values;
}

// One value broadcasts to every axis; otherwise exactly `dims` values.
template <class T>
std::vector<T> broadcast(std::vector<T> values, int dims, std::string_view flag) {
    const auto d = static_cast<std::size_t>(dims);
    if (values.size() == 1) return std::vector<T>(d, values.front());
    if (values.size() != d)
        throw UsageError(std::string(flag) + ": expected 1 or " + std::to_string(dims) + " values, got " +
                         std::to_string(values.size()));
    return values;
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

std::string utc_timestamp() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void make_output_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw io::IoError("cannot create output directory " + dir.string());
}

json manifest(const std::string& subcommand, json config, std::uint64_t seed, unsigned threads,
              const std::vector<std::string>& outputs) {
    return {{"subcommand", subcommand},
            {"config", std::move(config)},
            {"seed", seed},
            {"threads", threads},
            {"outputs", outputs},
            {"version", kVersion},
            {"format_version", io::kFormatVersion},
            {"timestamp", utc_timestamp()}};
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io::IoError("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw io::IoError("failed writing " + path.string());
}

// ---------------------------------------------------------------------------
// Shared grid flags

struct GridFlags {
    std::string dims;
    std::string size;
    std::string length;
    std::string bc;
    std::string grid;
    std::string approx;
    unsigned threads = 1;
    std::uint64_t seed = 12345;
    int format_version = io::kFormatVersion;

    void add(CLI::App& app, bool with_size = true) {
        app.add_option("--dims", dims, "number of axes (1-3)");
        if (with_size) app.add_option("--size", size, "points per axis, NX[,NY[,NZ]]");
        app.add_option("--length", length, "domain length per axis, LX[,LY[,LZ]]");
        app.add_option("--bc", bc, "periodic|dirichlet|neumann, one value or one per axis");
        app.add_option("--grid", grid, "regular|staggered, one value or one per axis");
        app.add_option("--approx", approx, "spectral|fd2");
        app.add_option("--threads", threads, "worker threads")->capture_default_str();
        app.add_option("--seed", seed, "random seed")->capture_default_str();
        app.add_option("--format-version", format_version, "field file format version")->capture_default_str();
    }

    void check_format() const {
        if (format_version != io::kFormatVersion)
            throw UsageError("--format-version: only version " + std::to_string(io::kFormatVersion) +
                             " is supported");
        if (threads == 0) throw UsageError("--threads must be at least 1");
    }

    // Resolves the configuration. `base` supplies per-axis defaults (e.g.
    // from a field header); flags override it.
    SolverConfig resolve(std::vector<GridSpec> base, int default_dims) const {
        std::optional<std::vector<std::size_t>> sizes;
        if (!size.empty()) sizes = parse_list<std::size_t>(size, "--size");
        int d = base.empty() ? default_dims : static_cast<int>(base.size());
        if (!dims.empty()) d = parse_number<int>(dims, "--dims");
        else if (sizes && sizes->size() > 1) d = static_cast<int>(sizes->size());
        if (d < 1 || d > static_cast<int>(kMaxDims)) throw UsageError("--dims must be 1, 2 or 3");
        base.resize(static_cast<std::size_t>(d));

        SolverConfig c;
        c.axes = base;
        const auto ud = static_cast<std::size_t>(d);
        if (sizes) {
            const auto n = broadcast(*sizes, d, "--size");
            for (std::size_t a = 0; a < ud; ++a) c.axes[a].n = n[a];
        }
        if (!length.empty()) {
            const auto l = broadcast(parse_list<double>(length, "--length"), d, "--length");
            for (std::size_t a = 0; a < ud; ++a) c.axes[a].length = l[a];
        }
        if (!bc.empty()) {
            const auto parts = broadcast(split(bc), d, "--bc");
            for (std::size_t a = 0; a < ud; ++a) {
                const auto v = parse_boundary_condition(parts[a]);
                if (!v) throw UsageError("--bc: unknown boundary condition \"" + parts[a] + "\"");
                c.axes[a].bc = *v;
            }
        }
        if (!grid.empty()) {
            const auto parts = broadcast(split(grid), d, "--grid");
            for (std::size_t a = 0; a < ud; ++a) {
                const auto v = parse_grid_kind(parts[a]);
                if (!v) throw UsageError("--grid: unknown grid kind \"" + parts[a] + "\"");
                c.axes[a].kind = *v;
            }
        }
        if (!approx.empty()) {
            const auto v = parse_approximation(approx);
            if (!v) throw UsageError("--approx: unknown approximation \"" + approx + "\"");
            c.approximation = *v;
        }
        classify(c);
        return c;
    }
};

// ---------------------------------------------------------------------------
// solve

struct SolveArgs {
    GridFlags grid;
    std::string in;
    std::string out;
    std::string precision = "float64";
};

int cmd_solve(const SolveArgs& args, std::ostream& out) {
    args.grid.check_format();
    io::Precision precision;
    if (args.precision == "float64") precision = io::Precision::Float64;
    else if (args.precision == "float32") precision = io::Precision::Float32;
    else throw UsageError("--precision must be float64 or float32");

    auto loaded = io::read_field(args.in);
    std::vector<GridSpec> base = loaded.header.grids;
    if (base.empty()) {
        base.resize(static_cast<std::size_t>(loaded.header.extents.dims));
        for (int a = 0; a < loaded.header.extents.dims; ++a)
            base[static_cast<std::size_t>(a)].n = loaded.header.extents[static_cast<std::size_t>(a)];
    }
    const SolverConfig config = args.grid.resolve(base, loaded.header.extents.dims);
    if (config.extents() != loaded.header.extents)
        throw ExtentError("input field has extents " + to_string(loaded.header.extents) +
                          " but the flags describe " + to_string(config.extents()));

    SolverOptions options;
    options.threads = args.grid.threads;
    const SolverPlan<double> plan(config, options);
    FieldBuffer<double> solution(config.extents());
    const SolveReport report = plan.solve(loaded.data.view(), solution.view());

    const fs::path dir(args.out);
    make_output_dir(dir);
    io::write_field(dir, "solution", solution, config.axes, precision);
    const json report_json = {{"removed_mean", report.removed_mean},
                              {"mode", to_string(report.mode)},
                              {"axis_order", report.axis_order},
                              {"timing",
                               {{"forward", report.timing.forward},
                                {"diagonal", report.timing.diagonal},
                                {"backward", report.timing.backward},
                                {"total", report.timing.total()}}}};
    io::write_json(dir / "report.json", report_json);
    json config_json = io::to_json(config);
    config_json["input"] = args.in;
    config_json["precision"] = args.precision;
    io::write_json(dir / "manifest.json",
                   manifest("solve", config_json, args.grid.seed, args.grid.threads,
                            {"solution.json", "solution.bin", "report.json"}));
    out << "solved " << to_string(config.extents()) << " (" << to_string(report.mode)
        << "), removed mean " << format_double(report.removed_mean) << "\n";
    return kOk;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyArgs {
    std::string bc;
    std::string grid;
    std::string approx;
    std::optional<int> fault_axis;
    std::optional<std::size_t> fault_index;
    std::optional<double> fault_factor;
    std::uint64_t seed = 12345;
    int format_version = io::kFormatVersion;
    std::string out;
};

int cmd_verify(const VerifyArgs& args, std::ostream& out) {
    if (args.format_version != io::kFormatVersion) throw UsageError("--format-version: unsupported version");
    verify::SuiteFilter filter;
    filter.seed = args.seed;
    json config = json::object();
    if (!args.bc.empty()) {
        filter.bc = parse_boundary_condition(args.bc);
        if (!filter.bc) throw UsageError("--bc: unknown boundary condition \"" + args.bc + "\"");
        config["bc"] = args.bc;
    }
    if (!args.grid.empty()) {
        filter.grid = parse_grid_kind(args.grid);
        if (!filter.grid) throw UsageError("--grid: unknown grid kind \"" + args.grid + "\"");
        config["grid"] = args.grid;
    }
    if (!args.approx.empty()) {
        filter.approximation = parse_approximation(args.approx);
        if (!filter.approximation) throw UsageError("--approx: unknown approximation \"" + args.approx + "\"");
        config["approx"] = args.approx;
    }
    if (args.fault_axis || args.fault_index || args.fault_factor) {
        SolverOptions::EigenvalueFault fault;
        fault.axis = args.fault_axis.value_or(0);
        fault.index = args.fault_index.value_or(1);
        fault.factor = args.fault_factor.value_or(1.0 + 1e-6);
        filter.fault = fault;
        config["fault"] = {{"axis", fault.axis}, {"index", fault.index}, {"factor", fault.factor}};
    }

    const auto results = verify::run_suites(filter);
    json cases = json::array();
    std::size_t failed = 0;
    for (const auto& r : results) {
        if (!r.passed) ++failed;
        cases.push_back({{"suite", r.suite},
                         {"name", r.name},
                         {"passed", r.passed},
                         {"measured", r.measured},
                         {"tolerance", r.tolerance}});
    }
    const json summary = {{"total", results.size()},
                          {"failed", failed},
                          {"passed", failed == 0 && !results.empty()},
                          {"cases", cases}};
    out << summary.dump(2) << "\n";
    if (!args.out.empty()) {
        const fs::path dir(args.out);
        make_output_dir(dir);
        io::write_json(dir / "report.json", summary);
        io::write_json(dir / "manifest.json", manifest("verify", config, args.seed, 1, {"report.json"}));
    }
    return failed == 0 && !results.empty() ? kOk : kSuiteFailure;
}

// ---------------------------------------------------------------------------
// bench

struct BenchArgs {
    GridFlags grid;
    std::string sizes = "64,128,256";
    std::size_t reps = 5;
    std::string out;
};

struct Samples {
    std::vector<double> forward, diagonal, backward, total;
};

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double minimum(const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); }

int cmd_bench(const BenchArgs& args, std::ostream& out) {
    args.grid.check_format();
    if (args.reps == 0) throw UsageError("--reps must be at least 1");
    const auto sizes = parse_list<std::size_t>(args.sizes, "--sizes");
    GridFlags flags = args.grid;
    if (flags.dims.empty()) flags.dims = "2";

    std::ostringstream csv;
    csv << "size,phase,median,min,threads\n";
    json config = json::object();
    for (const std::size_t n : sizes) {
        if (n == 0) throw UsageError("--sizes: sizes must be positive");
        flags.size = std::to_string(n);
        const SolverConfig c = flags.resolve({}, 2);
        config = io::to_json(c);
        SolverOptions options;
        options.threads = flags.threads;
        const SolverPlan<double> plan(c, options);
        FieldBuffer<double> rhs(c.extents());
        std::mt19937_64 rng(flags.seed);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        for (double& v : rhs.data()) v = dist(rng);
        FieldBuffer<double> solution(c.extents());
        plan.solve(rhs.view(), solution.view());  // warm-up, not timed

        Samples s;
        for (std::size_t r = 0; r < args.reps; ++r) {
            const auto start = Clock::now();
            const SolveReport report = plan.solve(rhs.view(), solution.view());
            s.total.push_back(std::chrono::duration<double>(Clock::now() - start).count());
            s.forward.push_back(report.timing.forward);
            s.diagonal.push_back(report.timing.diagonal);
            s.backward.push_back(report.timing.backward);
        }
        const std::pair<const char*, const std::vector<double>*> phases[] = {
            {"forward", &s.forward}, {"diagonal", &s.diagonal}, {"backward", &s.backward}, {"total", &s.total}};
        for (const auto& [name, v] : phases)
            csv << n << ',' << name << ',' << format_double(median(*v)) << ',' << format_double(minimum(*v)) << ','
                << flags.threads << '\n';
    }
    config.erase("axes");
    config["sizes"] = sizes;
    config["reps"] = args.reps;
    config["bc"] = flags.bc.empty() ? "periodic" : flags.bc;
    config["grid"] = flags.grid.empty() ? "regular" : flags.grid;

    if (args.out.empty()) {
        out << csv.str();
    } else {
        const fs::path dir(args.out);
        make_output_dir(dir);
        write_text(dir / "bench.csv", csv.str());
        io::write_json(dir / "manifest.json", manifest("bench", config, flags.seed, flags.threads, {"bench.csv"}));
        out << "wrote " << (dir / "bench.csv").string() << "\n";
    }
    return kOk;
}

// ---------------------------------------------------------------------------
// demo-flow

struct FlowArgs {
    std::string flow_case = "taylor-green";
    std::string size;
    std::string length;
    double nu = 0.01;
    double dt = 0.01;
    std::size_t steps = 100;
    std::size_t output_every = 1;
    std::size_t snapshot_every = 0;
    double amplitude = 1.0;
    std::optional<double> perturbation;
    std::optional<double> forcing;
    std::string ic = "default";
    std::uint64_t seed = 12345;
    unsigned threads = 1;
    int format_version = io::kFormatVersion;
    std::string out;
};

void write_snapshot(const fs::path& dir, std::size_t step, const flow::FlowSolver& solver,
                    const flow::FlowState& state, std::vector<std::string>& outputs) {
    char stem[32];
    std::snprintf(stem, sizeof stem, "step%06zu", step);
    for (std::size_t a = 0; a < state.velocity.u.size(); ++a) {
        const std::string name = std::string(stem) + "_u" + std::to_string(a);
        io::write_field(dir, name, state.velocity.u[a], {});
        outputs.push_back(name + ".json");
    }
    const std::string name = std::string(stem) + "_p";
    io::write_field(dir, name, state.pressure, solver.pressure_config().axes);
    outputs.push_back(name + ".json");
}

int cmd_demo_flow(const FlowArgs& args, std::ostream& out, std::ostream& err) {
    if (args.format_version != io::kFormatVersion) throw UsageError("--format-version: unsupported version");
    const bool tg = args.flow_case == "taylor-green";
    if (!tg && args.flow_case != "channel") throw UsageError("--case must be taylor-green or channel");
    if (args.ic != "default" && args.ic != "zero") throw UsageError("--ic must be default or zero");
    if (!(args.dt > 0.0) || !std::isfinite(args.dt)) throw UsageError("--dt must be positive");
    if (args.output_every == 0) throw UsageError("--output-every must be at least 1");
    if (args.threads == 0) throw UsageError("--threads must be at least 1");

    flow::FlowGrid grid;
    grid.cells = args.size.empty() ? std::vector<std::size_t>{64, 64}
                                   : parse_list<std::size_t>(args.size, "--size");
    const int d = static_cast<int>(grid.cells.size());
    if (d < 2 || d > 3) throw UsageError("--size: the flow demo needs 2 or 3 values");
    const double two_pi = 2.0 * std::numbers::pi;
    if (!args.length.empty()) {
        grid.lengths = broadcast(parse_list<double>(args.length, "--length"), d, "--length");
    } else {
        grid.lengths.assign(static_cast<std::size_t>(d), two_pi);
        if (!tg) grid.lengths.back() = 1.0;
    }
    grid.periodic.assign(static_cast<std::size_t>(d), true);
    if (!tg) grid.periodic.back() = false;

    const double wall_gap = grid.lengths.back();
    const double forcing_x =
        args.forcing.value_or(tg ? 0.0 : 8.0 * args.nu * args.amplitude / (wall_gap * wall_gap));
    const flow::FlowSolver solver(grid, args.nu, {forcing_x, 0.0, 0.0}, args.threads);

    flow::FlowState state = solver.zero_state();
    if (args.ic == "default") {
        state = tg ? flow::taylor_green(solver, args.amplitude)
                   : flow::channel(solver, args.amplitude, args.perturbation.value_or(0.05), args.seed);
    }

    double min_dx = std::numeric_limits<double>::infinity();
    for (int a = 0; a < d; ++a) min_dx = std::min(min_dx, grid.dx(a));
    auto cfl_of = [&](const flow::Velocity& u) {
        double c = 0.0;
        for (int a = 0; a < d; ++a) {
            double m = 0.0;
            for (double v : u.u[static_cast<std::size_t>(a)].data()) m = std::max(m, std::abs(v));
            c += m * args.dt / grid.dx(a);
        }
        return c;
    };
    const double cfl0 = cfl_of(state.velocity);
    err << "advisory: initial CFL " << format_double(cfl0) << (cfl0 > 1.0 ? " (likely unstable)" : "") << "\n";

    const double ke0 = solver.kinetic_energy(state.velocity);
    double decay_rate = 0.0;  // analytic KE decay rate for Taylor-Green
    if (tg) {
        const double kx = two_pi / grid.lengths[0], ky = two_pi / grid.lengths[1];
        decay_rate = 2.0 * args.nu * (kx * kx + ky * ky);
    }

    std::ostringstream csv;
    csv << "step,time,kinetic_energy" << (tg ? ",ke_analytic" : "") << ",max_divergence,divergence_bound,cfl\n";
    auto max_abs = [](const FieldBuffer<double>& f) {
        double m = 0.0;
        for (double v : f.data()) m = std::max(m, std::abs(v));
        return m;
    };
    double worst_ratio = 0.0;
    bool divergence_ok = true;
    auto record = [&](std::size_t step, double divergence) {
        const double bound = 1e-10 * solver.max_speed(state.velocity) / min_dx;
        if (divergence > bound) divergence_ok = false;
        if (bound > 0.0) worst_ratio = std::max(worst_ratio, divergence / bound);
        if (step % args.output_every != 0 && step != args.steps) return;
        const double ke = solver.kinetic_energy(state.velocity);
        csv << step << ',' << format_double(state.time) << ',' << format_double(ke);
        if (tg) csv << ',' << format_double(ke0 * std::exp(-decay_rate * state.time));
        csv << ',' << format_double(divergence) << ',' << format_double(bound) << ','
            << format_double(cfl_of(state.velocity)) << '\n';
    };

    const bool to_dir = !args.out.empty();
    const fs::path dir(args.out);
    std::vector<std::string> outputs{"timeseries.csv", "report.json"};
    if (to_dir) make_output_dir(dir);
    auto maybe_snapshot = [&](std::size_t step) {
        if (!to_dir) return;
        const bool periodic_hit = args.snapshot_every > 0 && step % args.snapshot_every == 0;
        if (periodic_hit || step == args.steps) write_snapshot(dir, step, solver, state, outputs);
    };

    record(0, max_abs(solver.divergence(state.velocity)));
    maybe_snapshot(0);
    std::optional<Instability> failure;
    std::size_t done = 0;
    for (std::size_t s = 1; s <= args.steps; ++s) {
        try {
            const flow::StepReport r = solver.step(state, args.dt);
            state.time = static_cast<double>(s) * args.dt;
            record(s, *std::max_element(r.divergence.begin(), r.divergence.end()));
        } catch (const flow::NonFiniteError& e) {
            failure = Instability{s, e.what()};
            break;
        }
        done = s;
        maybe_snapshot(s);
    }

    const double ke_final = solver.kinetic_energy(state.velocity);
    json report = {{"case", args.flow_case},
                   {"steps_completed", done},
                   {"time", state.time},
                   {"kinetic_energy", ke_final},
                   {"initial_kinetic_energy", ke0},
                   {"max_divergence_over_bound", worst_ratio},
                   {"divergence_within_bound", divergence_ok},
                   {"unstable", failure.has_value()}};
    if (tg && ke0 > 0.0)
        report["ke_relative_error"] = std::abs(ke_final / (ke0 * std::exp(-decay_rate * state.time)) - 1.0);
    if (failure) report["failed_step"] = failure->step;

    json config = {{"case", args.flow_case},
                   {"cells", grid.cells},
                   {"lengths", grid.lengths},
                   {"periodic", grid.periodic},
                   {"nu", args.nu},
                   {"dt", args.dt},
                   {"steps", args.steps},
                   {"output_every", args.output_every},
                   {"snapshot_every", args.snapshot_every},
                   {"amplitude", args.amplitude},
                   {"perturbation", tg ? 0.0 : args.perturbation.value_or(0.05)},
                   {"forcing", forcing_x},
                   {"ic", args.ic}};
    if (to_dir) {
        write_text(dir / "timeseries.csv", csv.str());
        io::write_json(dir / "report.json", report);
        io::write_json(dir / "manifest.json", manifest("demo-flow", config, args.seed, args.threads, outputs));
    } else {
        out << csv.str();
    }
    if (failure) {
        err << "error: instability at step " << failure->step << ": " << failure->message << "\n";
        return kInstability;
    }
    if (to_dir) out << "completed " << done << " steps, KE " << format_double(ke_final) << "\n";
    return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fast Poisson solver: solve, verify, bench and flow demo", "fpsolve"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    SolveArgs solve;
    auto* solve_cmd = app.add_subcommand("solve", "solve lap(phi) = rhs for a stored field");
    solve.grid.add(*solve_cmd);
    solve_cmd->add_option("--in", solve.in, "rhs header (.json)")->required();
    solve_cmd->add_option("--out", solve.out, "output directory")->required();
    solve_cmd->add_option("--precision", solve.precision, "float64|float32 output")->capture_default_str();

    VerifyArgs ver;
    auto* verify_cmd = app.add_subcommand("verify", "run the verification suites");
    verify_cmd->add_option("--bc", ver.bc, "only this boundary condition");
    verify_cmd->add_option("--grid", ver.grid, "only this grid kind");
    verify_cmd->add_option("--approx", ver.approx, "only this approximation");
    verify_cmd->add_option("--fault-axis", ver.fault_axis, "test hook: axis of the scaled eigenvalue");
    verify_cmd->add_option("--fault-index", ver.fault_index, "test hook: index of the scaled eigenvalue");
    verify_cmd->add_option("--fault-factor", ver.fault_factor, "test hook: eigenvalue scale factor");
    verify_cmd->add_option("--seed", ver.seed, "random seed")->capture_default_str();
    verify_cmd->add_option("--format-version", ver.format_version, "file format version")->capture_default_str();
    verify_cmd->add_option("--out", ver.out, "directory for report.json and manifest.json");

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "time solves over a size sweep");
    bench.grid.add(*bench_cmd, false);
    bench_cmd->add_option("--sizes", bench.sizes, "points per axis, comma separated")->capture_default_str();
    bench_cmd->add_option("--reps", bench.reps, "timed repetitions per size")->capture_default_str();
    bench_cmd->add_option("--out", bench.out, "directory for bench.csv and manifest.json");

    FlowArgs fl;
    auto* flow_cmd = app.add_subcommand("demo-flow", "run the incompressible flow demo");
    flow_cmd->add_option("--case", fl.flow_case, "taylor-green|channel")->capture_default_str();
    flow_cmd->add_option("--size", fl.size, "cells per axis, NX,NY[,NZ]");
    flow_cmd->add_option("--length", fl.length, "domain length per axis");
    flow_cmd->add_option("--nu", fl.nu, "kinematic viscosity")->capture_default_str();
    flow_cmd->add_option("--dt", fl.dt, "time step")->capture_default_str();
    flow_cmd->add_option("--steps", fl.steps, "number of steps")->capture_default_str();
    flow_cmd->add_option("--output-every", fl.output_every, "time series interval")->capture_default_str();
    flow_cmd->add_option("--snapshot-every", fl.snapshot_every, "snapshot interval, 0 for final only")
        ->capture_default_str();
    flow_cmd->add_option("--amplitude", fl.amplitude, "velocity scale U")->capture_default_str();
    flow_cmd->add_option("--perturbation", fl.perturbation, "channel perturbation amplitude");
    flow_cmd->add_option("--forcing", fl.forcing, "streamwise body force");
    flow_cmd->add_option("--ic", fl.ic, "default|zero")->capture_default_str();
    flow_cmd->add_option("--seed", fl.seed, "random seed")->capture_default_str();
    flow_cmd->add_option("--threads", fl.threads, "worker threads")->capture_default_str();
    flow_cmd->add_option("--format-version", fl.format_version, "file format version")->capture_default_str();
    flow_cmd->add_option("--out", fl.out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return kOk;
        }
        app.exit(e, out, err);
        return kConfigError;
    }

    try {
        if (*solve_cmd) return cmd_solve(solve, out);
        if (*verify_cmd) return cmd_verify(ver, out);
        if (*bench_cmd) return cmd_bench(bench, out);
        return cmd_demo_flow(fl, out, err);
    } catch (const io::IoError& e) {
        err << "error: " << e.what() << "\n";
        return kIoError;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kIoError;
    } catch (const std::bad_alloc&) {
        err << "error: allocation failed\n";
        return kAllocationError;
    } catch (const std::length_error& e) {
        err << "error: allocation failed: " << e.what() << "\n";
        return kAllocationError;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kConfigError;
    }
}

}  // namespace fastpoisson::cli
