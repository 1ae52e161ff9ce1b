#include <algorithm>
#include <cmath>
#include <numbers>

#include "fastpoisson/eigenvalues.hpp"
#include "fastpoisson/verify.hpp"

namespace fastpoisson::verify {

namespace {

constexpr double kPi = std::numbers::pi;

// value and second derivative of one factor of a separable case
struct Factor {
    std::function<double(double)> f;
    std::function<double(double)> f2;
};

Factor smooth_factor(BoundaryCondition bc, double L) {
    switch (bc) {
        case BoundaryCondition::Periodic: {
            const double b = 2.0 * kPi / L;
            return {[b](double x) { return std::exp(std::sin(b * x)); },
                    [b](double x) {
                        const double s = std::sin(b * x), c = std::cos(b * x);
                        return b * b * (c * c - s) * std::exp(s);
                    }};
        }
        case BoundaryCondition::Dirichlet: {
            const double a = kPi / L;
            return {[a](double x) { return std::exp(std::sin(a * x)) - 1.0; },
                    [a](double x) {
                        const double s = std::sin(a * x), c = std::cos(a * x);
                        return a * a * (c * c - s) * std::exp(s);
                    }};
        }
        case BoundaryCondition::Neumann: {
            const double a = kPi / L;
            return {[a](double x) { return std::exp(std::cos(a * x)); },
                    [a](double x) {
                        const double s = std::sin(a * x), c = std::cos(a * x);
                        return a * a * (s * s - c) * std::exp(c);
                    }};
        }
    }
    throw ConfigError("unknown boundary condition");
}

ManufacturedCase separable(std::string description, const SolverConfig& config,
                           std::vector<Factor> factors) {
    ManufacturedCase c;
    c.description = std::move(description);
    for (const auto& g : config.axes) c.bcs.push_back(g.bc);
    c.solution = [factors](const Point& x) {
        double v = 1.0;
        for (std::size_t a = 0; a < factors.size(); ++a) v *= factors[a].f(x[a]);
        return v;
    };
    c.rhs = [factors](const Point& x) {
        double lap = 0.0;
        for (std::size_t a = 0; a < factors.size(); ++a) {
            double term = factors[a].f2(x[a]);
            for (std::size_t b = 0; b < factors.size(); ++b)
                if (b != a) term *= factors[b].f(x[b]);
            lap += term;
        }
        return lap;
    };
    return c;
}

std::string pattern(const SolverConfig& config) {
    std::string s;
    for (const auto& g : config.axes) {
        if (!s.empty()) s += " x ";
        s += std::string(to_string(g.bc)) + "/" + std::string(to_string(g.kind));
    }
    return s;
}

}  // namespace

ManufacturedCase smooth_case(const SolverConfig& config) {
    classify(config);
    std::vector<Factor> factors;
    for (const auto& g : config.axes) factors.push_back(smooth_factor(g.bc, g.length));
    return separable("smooth " + pattern(config), config, std::move(factors));
}

ManufacturedCase eigenmode_case(const SolverConfig& config, const std::vector<std::size_t>& ks) {
    classify(config);
    if (ks.size() != config.axes.size()) throw ConfigError("eigenmode_case: one index per axis");
    std::vector<Factor> factors;
    std::string desc = "eigenmode k=(";
    for (std::size_t a = 0; a < ks.size(); ++a) {
        const auto& g = config.axes[a];
        const auto k = static_cast<double>(ks[a]);
        desc += (a ? "," : "") + std::to_string(ks[a]);
        const double w = (g.bc == BoundaryCondition::Periodic ? 2.0 : 1.0) * kPi * k / g.length;
        if (g.bc == BoundaryCondition::Dirichlet)
            factors.push_back({[w](double x) { return std::sin(w * x); },
                               [w](double x) { return -w * w * std::sin(w * x); }});
        else
            factors.push_back({[w](double x) { return std::cos(w * x); },
                               [w](double x) { return -w * w * std::cos(w * x); }});
    }
    return separable(desc + ") " + pattern(config), config, std::move(factors));
}

FieldBuffer<double> sample(const SolverConfig& config, const std::function<double(const Point&)>& f) {
    classify(config);
    std::array<std::vector<double>, kMaxDims> x;
    for (std::size_t a = 0; a < kMaxDims; ++a)
        x[a] = static_cast<int>(a) < config.dims() ? grid_points(config.axes[a]) : std::vector<double>{0.0};
    FieldBuffer<double> out(config.extents());
    for_each_index(out.extents(), [&](std::size_t i, std::size_t j, std::size_t k) {
        out(i, j, k) = f({x[0][i], x[1][j], x[2][k]});
    });
    return out;
}

ErrorNorms mms_error(const SolverPlan<double>& plan, const ManufacturedCase& c) {
    const auto& config = plan.config();
    if (c.bcs.size() != config.axes.size())
        throw ConfigError("mms_error: case '" + c.description + "' has wrong dimension");
    for (std::size_t a = 0; a < c.bcs.size(); ++a)
        if (c.bcs[a] != config.axes[a].bc)
            throw ConfigError("mms_error: case '" + c.description + "' boundary conditions do not match the plan");

    const auto rhs = sample(config, c.rhs);
    auto expected = sample(config, c.solution);
    FieldBuffer<double> solution(config.extents());
    plan.solve(rhs.view(), solution.view());

    auto err = solution.data();
    auto ref = expected.data();
    std::vector<double> diff(err.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = err[i] - ref[i];
    if (plan.singular()) {
        double mean = 0.0;
        for (double d : diff) mean += d;
        mean /= static_cast<double>(diff.size());
        for (double& d : diff) d -= mean;
    }
    ErrorNorms norms;
    for (double d : diff) {
        norms.max = std::max(norms.max, std::abs(d));
        norms.l2 += d * d;
    }
    norms.l2 = std::sqrt(norms.l2 / static_cast<double>(diff.size()));
    return norms;
}

ConvergenceReport convergence_order(const SolverConfig& base, std::vector<std::size_t> sizes,
                                    const std::function<ManufacturedCase(const SolverConfig&)>& make_case) {
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
    if (sizes.size() < 3) throw ConfigError("convergence study needs at least 3 distinct sizes");

    ConvergenceReport report;
    double scale = 0.0;
    for (auto n : sizes) {
        SolverConfig cfg = base;
        for (auto& g : cfg.axes) g.n = n;
        const SolverPlan<double> plan(cfg);
        const auto c = make_case(cfg);
        report.sizes.push_back(n);
        report.dx.push_back(grid_dx(cfg.axes.front()));
        report.errors.push_back(mms_error(plan, c));
        const auto exact = sample(cfg, c.solution);
        for (double v : exact.data()) scale = std::max(scale, std::abs(v));
    }
    const double roundoff = 1e-10 * std::max(scale, 1.0);
    report.spectral_exact = std::all_of(report.errors.begin(), report.errors.end(),
                                        [&](const ErrorNorms& e) { return e.max <= roundoff; });
    if (!report.spectral_exact) {
        for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
            const double e0 = report.errors[i].max, e1 = report.errors[i + 1].max;
            report.orders.push_back(std::log(e0 / e1) / std::log(report.dx[i] / report.dx[i + 1]));
        }
    }
    return report;
}

}  // namespace fastpoisson::verify
