#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>
#include <vector>

#include "fastpoisson/solver.hpp"
#include "fastpoisson/verify.hpp"

using namespace fastpoisson;

namespace {

const double pi = std::numbers::pi;
constexpr auto P = BoundaryCondition::Periodic;
constexpr auto D = BoundaryCondition::Dirichlet;
constexpr auto N = BoundaryCondition::Neumann;
constexpr auto R = GridKind::Regular;
constexpr auto S = GridKind::Staggered;
constexpr auto FD2 = Approximation::FiniteDifference2;
constexpr auto SPECTRAL = Approximation::PseudoSpectral;

FieldBuffer<double> random_field(const Extents& e, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1, 1);
    FieldBuffer<double> f(e);
    for (auto& v : f.data()) v = u(rng);
    return f;
}

FieldBuffer<double> solve(const SolverConfig& c, const FieldBuffer<double>& rhs, SolveReport* report = nullptr,
                          SolverOptions options = {}) {
    const SolverPlan<double> plan(c, options);
    FieldBuffer<double> out(c.extents());
    const auto r = plan.solve(rhs.view(), out.view());
    if (report) *report = r;
    return out;
}

double max_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double max_abs(std::span<const double> a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

double mean(std::span<const double> a) {
    double s = 0.0;
    for (double v : a) s += v;
    return s / static_cast<double>(a.size());
}

}  // namespace

TEST_CASE("plan construction picks transforms and tables") {
    const SolverPlan<double> p3({{{8, 1, P, R}, {8, 1, P, R}, {8, 1, P, R}}, SPECTRAL});
    CHECK(p3.mode() == SolveMode::Uniform);
    CHECK(p3.transforms(2).forward == TransformKind::DFT);
    CHECK(p3.eigenvalues(1).values[1] == doctest::Approx(-4 * pi * pi));
    CHECK(p3.singular());

    const SolverPlan<double> mixed({{{8, 1, P, R}, {6, 1, N, S}, {5, 2, N, S}}, FD2});
    CHECK(mixed.mode() == SolveMode::Mixed);
    CHECK(mixed.transforms(1) == TransformPair{TransformKind::DCT2, TransformKind::DCT3});
    CHECK(mixed.eigenvalues(2).values[1] == doctest::Approx(fd2_eigenvalues({5, 2, N, S}).values[1]));
    CHECK(mixed.axis_order() == std::vector<int>{0, 1, 2});

    const SolverPlan<double> relabeled({{{6, 1, D, S}, {8, 1, P, R}}, FD2});
    CHECK(relabeled.mode() == SolveMode::Mixed);
    CHECK(relabeled.axis_order() == std::vector<int>{1, 0});
    CHECK_FALSE(relabeled.singular());
}

TEST_CASE("unsupported configurations are rejected") {
    CHECK_THROWS_AS(SolverPlan<double>({{{4, 1, D, R}, {4, 1, N, R}}, FD2}), ConfigError);
    CHECK_THROWS_AS(SolverPlan<double>({{{4, 1, P, R}, {4, 1, D, R}, {4, 1, D, S}}, FD2}), ConfigError);
    CHECK_THROWS_AS(SolverPlan<double>({{{4, 1, P, S}}, FD2}), ConfigError);
    CHECK_THROWS_AS(SolverPlan<double>({{}, FD2}), ConfigError);
    CHECK_THROWS_AS(SolverPlan<double>({{{4, 1, P, R}, {4, 1, P, R}, {4, 1, P, R}, {4, 1, P, R}}, FD2}),
                    ConfigError);
    try {
        SolverPlan<double>({{{4, 1, D, R}, {4, 1, N, S}}, FD2});
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("neumann/staggered") != std::string::npos);
    }
}

TEST_CASE("eigenvector in, eigenvector over lambda out") {
    for (auto approx : {SPECTRAL, FD2}) {
        const GridSpec g{8, 1.3, D, R};
        const SolverConfig c{{g}, approx};
        const auto lambda = eigenvalues_for(g, approx).values[2];
        const auto v = verify::basis_vector(g, 2);
        FieldBuffer<double> rhs(c.extents());
        for (std::size_t j = 0; j < 8; ++j) rhs(j) = lambda * v[j].real();
        const auto phi = solve(c, rhs);
        for (std::size_t j = 0; j < 8; ++j) CHECK(std::abs(phi(j) - v[j].real()) <= 1e-12);
    }
}

TEST_CASE("zero rhs gives zero") {
    const SolverConfig c{{{7, 1, N, R}, {5, 2, N, R}}, FD2};
    SolveReport r;
    const auto phi = solve(c, FieldBuffer<double>(c.extents()), &r);
    CHECK(max_abs(phi.data()) == 0.0);
    CHECK(r.removed_mean == 0.0);
}

TEST_CASE("constant rhs on an all-Neumann grid is the removed mean") {
    for (auto kind : {R, S}) {
        const SolverConfig c{{{7, 1, N, kind}, {6, 2, N, kind}}, FD2};
        SolveReport r;
        const auto phi = solve(c, FieldBuffer<double>(c.extents(), 2.5), &r);
        CHECK(max_abs(phi.data()) <= 1e-13);
        CHECK(r.removed_mean == doctest::Approx(2.5));
    }
    const SolverConfig periodic{{{8, 1, P, R}, {4, 1, P, R}}, SPECTRAL};
    SolveReport r;
    solve(periodic, FieldBuffer<double>(periodic.extents(), -1.25), &r);
    CHECK(r.removed_mean == doctest::Approx(-1.25));
}

TEST_CASE("removed mean is zero with a Dirichlet axis") {
    const SolverConfig c{{{8, 1, P, R}, {6, 1, D, S}}, FD2};
    SolveReport r;
    solve(c, FieldBuffer<double>(c.extents(), 3.0), &r);
    CHECK(r.removed_mean == 0.0);
    CHECK(r.mode == SolveMode::Mixed);
}

TEST_CASE("fd2 residual is at roundoff") {
    const std::vector<SolverConfig> configs{
        {{{64, 1, P, R}, {48, 2, P, R}}, FD2},
        {{{33, 1, D, R}, {40, 1, D, R}}, FD2},
        {{{16, 1, D, S}, {12, 1, D, S}, {10, 1, D, S}}, FD2},
        {{{20, 1, N, R}, {17, 1, N, R}}, FD2},
        {{{128, 3, N, S}}, FD2},
        {{{32, 1, P, R}, {20, 1, N, S}, {24, 1, N, S}}, FD2},
        {{{30, 1, D, R}, {16, 1, P, R}, {18, 1, P, R}}, FD2},
    };
    for (const auto& c : configs) {
        auto rhs = random_field(c.extents(), 9);
        SolveReport r;
        const auto phi = solve(c, rhs, &r);
        const auto lap = apply_discrete_laplacian(c, phi.view());
        // rhs minus its null-space projection
        if (r.removed_mean != 0.0 || SolverPlan<double>(c).singular()) {
            const auto w = verify::null_weights(c);
            double num = 0.0, den = 0.0;
            for (std::size_t i = 0; i < rhs.size(); ++i) {
                num += w(static_cast<Eigen::Index>(i)) * rhs.data()[i];
                den += w(static_cast<Eigen::Index>(i));
            }
            CHECK(r.removed_mean == doctest::Approx(num / den));
            for (auto& v : rhs.data()) v -= num / den;
        }
        CHECK(max_diff(lap.data(), rhs.data()) <= 1e-10 * max_abs(rhs.data()));
    }
}

TEST_CASE("spectral solve inverts the spectral operator") {
    // transform(solution) * lambda == transform(rhs) except the null mode:
    // checked through periodic modes whose rhs is their own Laplacian
    const SolverConfig c{{{16, 2.0, P, R}, {12, 1.0, P, R}}, SPECTRAL};
    FieldBuffer<double> rhs(c.extents()), expected(c.extents());
    const auto x = grid_points(c.axes[0]), y = grid_points(c.axes[1]);
    for_each_index(c.extents(), [&](std::size_t i, std::size_t j, std::size_t) {
        const double ax = 2 * pi * 3 / 2.0, ay = 2 * pi * 5 / 1.0;
        const double f = std::cos(ax * x[i] + 0.3) * std::sin(ay * y[j]) + std::sin(2 * pi * 7 / 2.0 * x[i]);
        expected(i, j) = f;
        rhs(i, j) = -(ax * ax + ay * ay) * std::cos(ax * x[i] + 0.3) * std::sin(ay * y[j]) -
                    std::pow(2 * pi * 7 / 2.0, 2) * std::sin(2 * pi * 7 / 2.0 * x[i]);
    });
    const auto phi = solve(c, rhs);
    CHECK(max_diff(phi.data(), expected.data()) <= 1e-12);
}

TEST_CASE("mixed product mode") {
    // x periodic, z Neumann staggered: e^{2 pi i m x / Lx} cos(pi q z / Lz)
    // taken as its real part; rhs / (lambda_x + lambda_z)
    for (auto approx : {SPECTRAL, FD2}) {
        const GridSpec gx{12, 2.0, P, R}, gz{9, 1.5, N, S};
        const SolverConfig c{{gx, gz}, approx};
        const std::size_t m = 2, q = 3;
        const auto lx = eigenvalues_for(gx, approx).values[m];
        const auto lz = eigenvalues_for(gz, approx).values[q];
        const auto bx = verify::basis_vector(gx, m), bz = verify::basis_vector(gz, q);
        FieldBuffer<double> rhs(c.extents()), expected(c.extents());
        for_each_index(c.extents(), [&](std::size_t i, std::size_t j, std::size_t) {
            expected(i, j) = bx[i].real() * bz[j].real();
            rhs(i, j) = (lx + lz) * expected(i, j);
        });
        const SolverPlan<double> plan(c);
        FieldBuffer<double> phi(c.extents());
        const auto r = plan.solve_mixed(rhs.view(), phi.view());
        CHECK(r.mode == SolveMode::Mixed);
        CHECK(max_diff(phi.data(), expected.data()) <= 1e-12 * max_abs(expected.data()));
    }
}

TEST_CASE("x-independent rhs reduces to the 1D solve") {
    for (auto [bc, kind] : {std::pair{D, R}, {D, S}, {N, R}, {N, S}}) {
        const GridSpec gz{13, 1.7, bc, kind};
        const SolverConfig c2{{{10, 3.0, P, R}, gz}, FD2}, c1{{gz}, FD2};
        auto line = random_field(c1.extents(), 21);
        FieldBuffer<double> rhs(c2.extents());
        for_each_index(c2.extents(), [&](std::size_t i, std::size_t j, std::size_t) { rhs(i, j) = line(j); });
        const auto phi2 = solve(c2, rhs);
        const auto phi1 = solve(c1, line);
        double err = 0.0;
        for_each_index(c2.extents(), [&](std::size_t i, std::size_t j, std::size_t) {
            err = std::max(err, std::abs(phi2(i, j) - phi1(j)));
        });
        CHECK(err <= 1e-12 * max_abs(phi1.data()));
    }
}

TEST_CASE("solve_mixed refuses non-mixed plans") {
    const SolverPlan<double> plan({{{4, 1, P, R}, {4, 1, P, R}}, SPECTRAL});
    FieldBuffer<double> f(plan.extents());
    CHECK_THROWS_AS(plan.solve_mixed(f.view(), f.view()), ConfigError);
}

TEST_CASE("linearity") {
    const SolverConfig c{{{16, 1, D, S}, {11, 2, D, S}}, SPECTRAL};
    const auto f = random_field(c.extents(), 1), g = random_field(c.extents(), 2);
    FieldBuffer<double> h(c.extents());
    for (std::size_t i = 0; i < h.size(); ++i) h.data()[i] = 1.5 * f.data()[i] - 0.25 * g.data()[i];
    const auto sf = solve(c, f), sg = solve(c, g), sh = solve(c, h);
    double err = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i)
        err = std::max(err, std::abs(sh.data()[i] - (1.5 * sf.data()[i] - 0.25 * sg.data()[i])));
    CHECK(err <= 1e-12 * max_abs(sh.data()));
}

TEST_CASE("cyclic shift commutes with periodic solves") {
    const SolverConfig c{{{12, 1, P, R}, {10, 1, N, S}}, FD2};
    const auto f = random_field(c.extents(), 3);
    FieldBuffer<double> shifted(c.extents());
    for_each_index(c.extents(), [&](std::size_t i, std::size_t j, std::size_t) { shifted((i + 5) % 12, j) = f(i, j); });
    const auto a = solve(c, f), b = solve(c, shifted);
    double err = 0.0;
    for_each_index(c.extents(), [&](std::size_t i, std::size_t j, std::size_t) {
        err = std::max(err, std::abs(b((i + 5) % 12, j) - a(i, j)));
    });
    CHECK(err <= 1e-13 * max_abs(a.data()));
}

TEST_CASE("sub-block fields give the tight-array result") {
    const SolverConfig c{{{12, 1, P, R}, {9, 1, N, S}, {7, 1, N, S}}, FD2};
    const Extents e = c.extents(), outer{16, 13, 10};
    const Index3 off{2, 2, 1};
    const auto tight = random_field(e, 4);
    const auto expected = solve(c, tight);

    const double sentinel = 777.0;
    std::vector<double> rhs_big(outer.size(), sentinel), sol_big(outer.size(), sentinel);
    auto rhs_view = Field<double>::subblock(std::span<double>(rhs_big), outer, off, e);
    auto sol_view = Field<double>::subblock(std::span<double>(sol_big), outer, {1, 3, 2}, e);
    for_each_index(e, [&](std::size_t i, std::size_t j, std::size_t k) { rhs_view(i, j, k) = tight(i, j, k); });
    const auto rhs_copy = rhs_big;
    SolverPlan<double>(c).solve(rhs_view, sol_view);
    double err = 0.0;
    for_each_index(e, [&](std::size_t i, std::size_t j, std::size_t k) {
        err = std::max(err, std::abs(sol_view(i, j, k) - expected(i, j, k)));
    });
    CHECK(err <= 1e-14);
    CHECK(rhs_big == rhs_copy);
    std::size_t untouched = 0;
    for (double v : sol_big) untouched += v == sentinel;
    CHECK(untouched == outer.size() - e.size());

    // aliasing rhs and solution
    SolverPlan<double>(c).solve(rhs_view, rhs_view);
    err = 0.0;
    for_each_index(e, [&](std::size_t i, std::size_t j, std::size_t k) {
        err = std::max(err, std::abs(rhs_view(i, j, k) - expected(i, j, k)));
    });
    CHECK(err <= 1e-14);
}

TEST_CASE("extent mismatch and non-finite input") {
    const SolverPlan<double> plan({{{8, 1, D, R}, {6, 1, D, R}}, FD2});
    FieldBuffer<double> wrong(Extents{6, 8}), rhs(plan.extents()), out(plan.extents());
    CHECK_THROWS_AS(plan.solve(wrong.view(), out.view()), ExtentError);
    CHECK_THROWS_AS(plan.solve(rhs.view(), wrong.view()), ExtentError);
    rhs(3, 2) = NAN;
    CHECK_THROWS_AS(plan.solve(rhs.view(), out.view()), InputError);
    rhs(3, 2) = INFINITY;
    CHECK_THROWS_AS(plan.solve(rhs.view(), out.view()), InputError);
}

TEST_CASE("concurrent solves on one plan") {
    const SolverConfig c{{{40, 1, P, R}, {36, 1, D, S}}, FD2};
    const SolverPlan<double> plan(c);
    std::vector<FieldBuffer<double>> rhs, out, expected;
    for (unsigned t = 0; t < 6; ++t) {
        rhs.push_back(random_field(c.extents(), 100 + t));
        out.emplace_back(c.extents());
        expected.push_back(solve(c, rhs.back()));
    }
    {
        std::vector<std::jthread> workers;
        for (std::size_t t = 0; t < 6; ++t)
            workers.emplace_back([&, t] {
                for (int rep = 0; rep < 5; ++rep) plan.solve(rhs[t].view(), out[t].view());
            });
    }
    for (std::size_t t = 0; t < 6; ++t) CHECK(out[t].data()[0] == expected[t].data()[0]);
    for (std::size_t t = 0; t < 6; ++t) CHECK(max_diff(out[t].data(), expected[t].data()) == 0.0);
}

TEST_CASE("threaded line passes match the serial result") {
    const SolverConfig c{{{48, 1, P, R}, {40, 1, N, S}, {12, 1, N, S}}, SPECTRAL};
    const auto rhs = random_field(c.extents(), 5);
    SolverOptions threaded;
    threaded.threads = 4;
    const auto a = solve(c, rhs), b = solve(c, rhs, nullptr, threaded);
    CHECK(max_diff(a.data(), b.data()) <= 1e-14 * max_abs(a.data()));
}

TEST_CASE("timing phases are reported") {
    SolveReport r;
    const SolverConfig c{{{64, 1, P, R}, {64, 1, P, R}}, SPECTRAL};
    solve(c, random_field(c.extents(), 6), &r);
    CHECK(r.timing.forward > 0.0);
    CHECK(r.timing.backward > 0.0);
    CHECK(r.timing.total() >= r.timing.diagonal);
}

TEST_CASE("phase times add up to the wall time of a solve") {
    const SolverConfig c{{{256, 1, P, R}, {256, 1, P, R}}, SPECTRAL};
    const SolverPlan<double> plan(c);
    const auto rhs = random_field(c.extents(), 6);
    FieldBuffer<double> out(c.extents());
    plan.solve(rhs.view(), out.view());
    // best of several reps so a preempted run does not decide the outcome
    double best = 1.0;
    for (int rep = 0; rep < 5; ++rep) {
        const auto start = std::chrono::steady_clock::now();
        const auto r = plan.solve(rhs.view(), out.view());
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        best = std::min(best, std::abs(r.timing.total() / wall - 1.0));
    }
    CHECK(best <= 0.05);
}

TEST_CASE("single precision solve") {
    const SolverConfig c{{{32, 1, D, R}, {24, 1, D, R}}, FD2};
    const auto rhs = random_field(c.extents(), 8);
    const auto ref = solve(c, rhs);
    FieldBuffer<float> rf(c.extents()), out(c.extents());
    for (std::size_t i = 0; i < rf.size(); ++i) rf.data()[i] = static_cast<float>(rhs.data()[i]);
    SolverPlan<float>(c).solve(rf.view(), out.view());
    double err = 0.0;
    for (std::size_t i = 0; i < rf.size(); ++i) err = std::max(err, std::abs(out.data()[i] - ref.data()[i]));
    CHECK(err <= 1e-5 * max_abs(ref.data()));
}

TEST_CASE("apply_discrete_laplacian examples") {
    const SolverConfig dir{{{4, 5.0, D, R}}, FD2};  // dx = 1
    const auto lap = apply_discrete_laplacian(dir, FieldBuffer<double>(dir.extents(), 2.0).view());
    CHECK(lap(0) == doctest::Approx(-2.0));
    CHECK(lap(1) == 0.0);
    CHECK(lap(2) == 0.0);
    CHECK(lap(3) == doctest::Approx(-2.0));

    for (auto kind : {R, S}) {
        const SolverConfig neu{{{5, 1, N, kind}, {4, 2, N, kind}}, FD2};
        const auto l = apply_discrete_laplacian(neu, FieldBuffer<double>(neu.extents(), 3.0).view());
        CHECK(max_abs(l.data()) <= 1e-12);
    }

    const GridSpec g{9, 1.0, D, R};
    const auto v = verify::basis_vector(g, 4);
    FieldBuffer<double> phi(Extents{9});
    for (std::size_t j = 0; j < 9; ++j) phi(j) = v[j].real();
    const auto l = apply_discrete_laplacian(SolverConfig{{g}, FD2}, phi.view());
    const double lambda = fd2_eigenvalues(g).values[4];
    for (std::size_t j = 0; j < 9; ++j) CHECK(std::abs(l(j) - lambda * phi(j)) <= 1e-11 * std::abs(lambda));

    CHECK_THROWS_AS(apply_discrete_laplacian(SolverConfig{{g}, SPECTRAL}, phi.view()), ConfigError);
    CHECK_THROWS_AS(apply_discrete_laplacian(SolverConfig{{{8, 1, D, R}}, FD2}, phi.view()), ExtentError);
}

TEST_CASE("fault hook perturbs exactly one eigenvalue") {
    SolverOptions o;
    o.fault = SolverOptions::EigenvalueFault{0, 3, 2.0};
    const GridSpec g{8, 1, D, R};
    const SolverPlan<double> plan({{g}, FD2}, o);
    CHECK(plan.eigenvalues(0).values[3] == doctest::Approx(2.0 * fd2_eigenvalues(g).values[3]));
    CHECK(plan.eigenvalues(0).values[2] == fd2_eigenvalues(g).values[2]);
    o.fault->index = 8;
    CHECK_THROWS_AS(SolverPlan<double>({{g}, FD2}, o), ConfigError);
}
