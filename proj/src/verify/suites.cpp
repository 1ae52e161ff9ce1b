#include <algorithm>
#include <cmath>
#include <random>

#include "fastpoisson/verify.hpp"

namespace fastpoisson::verify {

namespace {

struct Row {
    BoundaryCondition bc;
    GridKind grid;
};

constexpr Row kRows[] = {
    {BoundaryCondition::Periodic, GridKind::Regular},
    {BoundaryCondition::Dirichlet, GridKind::Regular},
    {BoundaryCondition::Dirichlet, GridKind::Staggered},
    {BoundaryCondition::Neumann, GridKind::Regular},
    {BoundaryCondition::Neumann, GridKind::Staggered},
};

std::string row_name(const Row& r) {
    return std::string(to_string(r.bc)) + "-" + std::string(to_string(r.grid));
}

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

class Runner {
public:
    explicit Runner(const SuiteFilter& filter) : filter_(filter), rng_(filter.seed) {}

    std::vector<CaseResult> results;

    void run() {
        for (const Row& row : kRows) {
            if (filter_.bc && *filter_.bc != row.bc) continue;
            if (filter_.grid && *filter_.grid != row.grid) continue;
            roundtrip(row);
            oracle(row);
            for (auto approx : {Approximation::PseudoSpectral, Approximation::FiniteDifference2}) {
                if (filter_.approximation && *filter_.approximation != approx) continue;
                if (approx == Approximation::FiniteDifference2) {
                    eigenvectors(row);
                    dense(row);
                    convergence_fd2(row);
                } else {
                    transform_eigenvectors(row);
                    spectral_exact(row);
                    convergence_spectral(row);
                }
            }
        }
    }

private:
    void record(std::string suite, std::string name, double measured, double tolerance) {
        results.push_back({std::move(suite), std::move(name),
                           std::isfinite(measured) && measured <= tolerance, measured, tolerance});
    }

    double uniform() { return std::uniform_real_distribution<double>(-1.0, 1.0)(rng_); }

    SolverOptions options_for(const SolverConfig& config) const {
        SolverOptions o;
        if (filter_.fault) {
            const auto& f = *filter_.fault;
            if (f.axis < config.dims() && f.index < config.axes[static_cast<std::size_t>(f.axis)].n)
                o.fault = f;
        }
        return o;
    }

    void roundtrip(const Row& row) {
        const auto pair = transform_pair_for(row.bc, row.grid);
        for (std::size_t n : {2, 3, 4, 5, 8, 16, 17, 64, 127, 128, 257}) {
            const TransformPlan<double> fwd(pair.forward, n), bwd(pair.backward, n);
            std::vector<std::complex<double>> scratch(std::max(fwd.scratch_size(), bwd.scratch_size()));
            const double scale = pair.backward_scale(n);
            double err = 0.0, peak = 0.0;
            if (is_complex(pair.forward)) {
                std::vector<std::complex<double>> f(n), g;
                for (auto& v : f) v = {uniform(), uniform()};
                g = f;
                fwd.execute(std::span(g), scratch);
                bwd.execute(std::span(g), scratch);
                for (std::size_t j = 0; j < n; ++j) {
                    err = std::max(err, std::abs(g[j] * scale - f[j]));
                    peak = std::max(peak, std::abs(f[j]));
                }
            } else {
                std::vector<double> f(n), g;
                for (auto& v : f) v = uniform();
                g = f;
                fwd.execute(std::span(g), scratch);
                bwd.execute(std::span(g), scratch);
                for (std::size_t j = 0; j < n; ++j) err = std::max(err, std::abs(g[j] * scale - f[j]));
                peak = max_abs(f);
            }
            record("roundtrip", row_name(row) + "/n=" + std::to_string(n), err,
                   1e-12 * static_cast<double>(n) * peak);
        }
    }

    void oracle(const Row& row) {
        const auto pair = transform_pair_for(row.bc, row.grid);
        for (auto kind : {pair.forward, pair.backward}) {
            double worst = 0.0;
            for (std::size_t n = min_length(kind); n <= 64; ++n) {
                const TransformPlan<double> plan(kind, n);
                std::vector<std::complex<double>> scratch(plan.scratch_size());
                double err = 0.0, peak = 0.0;
                if (is_complex(kind)) {
                    std::vector<std::complex<double>> f(n);
                    for (auto& v : f) v = {uniform(), uniform()};
                    const auto ref = naive_transform(kind, std::span<const std::complex<double>>(f));
                    plan.execute(std::span(f), scratch);
                    for (std::size_t k = 0; k < n; ++k) {
                        err = std::max(err, std::abs(f[k] - ref[k]));
                        peak = std::max(peak, std::abs(ref[k]));
                    }
                    peak = std::max(peak, 1.0);
                } else {
                    std::vector<double> f(n);
                    for (auto& v : f) v = uniform();
                    peak = max_abs(f);
                    const auto ref = naive_transform(kind, std::span<const double>(f));
                    plan.execute(std::span(f), scratch);
                    for (std::size_t k = 0; k < n; ++k) err = std::max(err, std::abs(f[k] - ref[k]));
                }
                worst = std::max(worst, err / (static_cast<double>(n) * peak));
            }
            record("oracle", row_name(row) + "/" + std::string(to_string(kind)) + "/n<=64", worst, 1e-11);
        }
    }

    // FD2: dense stencil matrix times basis vector k equals lambda_k times it.
    void eigenvectors(const Row& row) {
        double worst = 0.0;
        const std::size_t n_min = row.bc == BoundaryCondition::Neumann && row.grid == GridKind::Regular ? 2 : 1;
        for (std::size_t n = n_min; n <= 16; ++n) {
            const GridSpec g{n, 1.3, row.bc, row.grid};
            const Eigen::MatrixXd m = fd2_matrix_1d(g);
            const auto table = fd2_eigenvalues(g);
            for (std::size_t k = 0; k < n; ++k) {
                const auto v = basis_vector(g, k);
                Eigen::VectorXcd x(static_cast<Eigen::Index>(n));
                for (std::size_t j = 0; j < n; ++j) x(static_cast<Eigen::Index>(j)) = v[j];
                const Eigen::VectorXcd r = m.cast<std::complex<double>>() * x - table.values[k] * x;
                const double scale = std::max(std::abs(table.values[k]), 1.0 / (grid_dx(g) * grid_dx(g)));
                worst = std::max(worst, r.cwiseAbs().maxCoeff() / (scale * x.cwiseAbs().maxCoeff()));
            }
        }
        record("eigenvector", row_name(row) + "/fd2/n<=16", worst, 1e-10);
    }

    // Spectral: forward transform of a sampled basis vector is a single spike.
    void transform_eigenvectors(const Row& row) {
        const auto pair = transform_pair_for(row.bc, row.grid);
        double worst = 0.0;
        for (std::size_t n : {4, 7, 16}) {
            const GridSpec g{n, 1.0, row.bc, row.grid};
            const TransformPlan<double> fwd(pair.forward, n);
            std::vector<std::complex<double>> scratch(fwd.scratch_size());
            for (std::size_t k = 0; k < n; ++k) {
                auto v = basis_vector(g, k);
                std::vector<double> leak(n);
                if (is_complex(pair.forward)) {
                    fwd.execute(std::span(v), scratch);
                    for (std::size_t q = 0; q < n; ++q) leak[q] = std::abs(v[q]);
                } else {
                    std::vector<double> r(n);
                    for (std::size_t j = 0; j < n; ++j) r[j] = v[j].real();
                    fwd.execute(std::span(r), scratch);
                    for (std::size_t q = 0; q < n; ++q) leak[q] = std::abs(r[q]);
                }
                const double peak = leak[k];
                leak[k] = 0.0;
                worst = std::max(worst, max_abs(leak) / peak);
            }
        }
        record("eigenvector", row_name(row) + "/spectral/transform", worst, 1e-10);
    }

    void dense_case(const SolverConfig& config, const std::string& name) {
        const SolverPlan<double> plan(config, options_for(config));
        FieldBuffer<double> rhs(config.extents());
        for (auto& v : rhs.data()) v = uniform();
        FieldBuffer<double> fast(config.extents());
        plan.solve(rhs.view(), fast.view());
        const auto ref = dense_oracle_solve(config, rhs.view());
        double err = 0.0;
        for (std::size_t i = 0; i < fast.size(); ++i) err = std::max(err, std::abs(fast.data()[i] - ref.data()[i]));
        record("dense-oracle", name, err / max_abs(ref.data()), 1e-9);
    }

    void dense(const Row& row) {
        const auto fd2 = Approximation::FiniteDifference2;
        const std::size_t n_min = row.bc == BoundaryCondition::Neumann && row.grid == GridKind::Regular ? 2 : 1;
        for (std::size_t n = std::max<std::size_t>(n_min, 2); n <= 8; ++n)
            dense_case({{{n, 1.0 + 0.1 * static_cast<double>(n), row.bc, row.grid}}, fd2},
                       row_name(row) + "/1d/n=" + std::to_string(n));
        for (std::size_t n : {3, 4, 7, 8})
            dense_case({{{n, 1.0, row.bc, row.grid}, {n + 1, 1.7, row.bc, row.grid}}, fd2},
                       row_name(row) + "/2d/n=" + std::to_string(n) + "x" + std::to_string(n + 1));
        if (row.bc != BoundaryCondition::Periodic)
            dense_case({{{6, 2.0, BoundaryCondition::Periodic, GridKind::Regular}, {5, 1.0, row.bc, row.grid}}, fd2},
                       "periodic-x-" + row_name(row) + "/2d/n=6x5");
    }

    // rhs = lambda_k * (sampled eigenmode k); angles are reduced exactly so
    // the input itself carries no argument-rounding error
    void spectral_exact(const Row& row) {
        double worst = 0.0;
        for (std::size_t n : {2, 5, 8, 17, 32}) {
            const GridSpec g{n, 1.0 + 0.05 * static_cast<double>(n), row.bc, row.grid};
            const SolverConfig cfg{{g}, Approximation::PseudoSpectral};
            const SolverPlan<double> plan(cfg, options_for(cfg));
            FieldBuffer<double> rhs(cfg.extents()), phi(cfg.extents());
            const auto exact = spectral_eigenvalues(g);
            for (std::size_t k = 0; k < n; ++k) {
                if (exact.is_null(k)) continue;
                const auto v = basis_vector(g, k);
                const double lambda = exact.values[k];
                for (bool imag : {false, true}) {
                    if (imag && row.bc != BoundaryCondition::Periodic) continue;
                    double peak = 0.0;
                    for (std::size_t j = 0; j < n; ++j) {
                        rhs(j) = lambda * (imag ? v[j].imag() : v[j].real());
                        peak = std::max(peak, std::abs(imag ? v[j].imag() : v[j].real()));
                    }
                    if (peak < 1e-8) continue;  // sine part of the k = 0 or Nyquist mode
                    plan.solve(rhs.view(), phi.view());
                    double err = 0.0;
                    for (std::size_t j = 0; j < n; ++j)
                        err = std::max(err, std::abs(phi(j) - (imag ? v[j].imag() : v[j].real())));
                    worst = std::max(worst, err / peak);
                }
            }
        }
        record("spectral-exact", row_name(row) + "/every-k/n<=32", worst, 1e-12);
    }

    void convergence_fd2(const Row& row) {
        const SolverConfig base{{{16, 1.0, row.bc, row.grid}}, Approximation::FiniteDifference2};
        const auto report = convergence_order(base, {16, 32, 64, 128}, smooth_case);
        const double p = report.finest_order();
        results.push_back({"convergence", row_name(row) + "/fd2/smooth",
                           !report.spectral_exact && p >= 1.9 && p <= 2.1, p, 2.1});
    }

    void convergence_spectral(const Row& row) {
        const SolverConfig base{{{16, 1.0, row.bc, row.grid}}, Approximation::PseudoSpectral};
        const auto report = convergence_order(base, {16, 32, 64}, [](const SolverConfig& c) {
            return eigenmode_case(c, {3});
        });
        double worst = 0.0;
        for (const auto& e : report.errors) worst = std::max(worst, e.max);
        results.push_back({"convergence", row_name(row) + "/spectral/band-limited",
                           report.spectral_exact, worst, 1e-10});
    }

    SuiteFilter filter_;
    std::mt19937_64 rng_;
};

}  // namespace

std::vector<CaseResult> run_suites(const SuiteFilter& filter) {
    Runner runner(filter);
    runner.run();
    return std::move(runner.results);
}

}  // namespace fastpoisson::verify
