#include "fastpoisson/solver.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "fastpoisson/detail/parallel.hpp"
#include "fastpoisson/reorder.hpp"

namespace fastpoisson {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string describe(const SolverConfig& config) {
    std::ostringstream os;
    for (int a = 0; a < config.dims(); ++a) {
        const auto& g = config.axes[static_cast<std::size_t>(a)];
        os << (a ? ", " : "") << "axis " << a << " " << to_string(g.bc) << "/" << to_string(g.kind);
    }
    return os.str();
}

bool same_conditions(const GridSpec& a, const GridSpec& b) {
    return a.bc == b.bc && a.kind == b.kind;
}

}  // namespace

Extents SolverConfig::extents() const {
    Index3 counts{1, 1, 1};
    for (std::size_t a = 0; a < axes.size() && a < kMaxDims; ++a) counts[a] = axes[a].n;
    return Extents::of(dims(), counts);
}

std::string_view to_string(SolveMode mode) {
    return mode == SolveMode::Uniform ? "uniform" : "mixed";
}

SolveMode classify(const SolverConfig& config) {
    if (config.axes.empty() || config.axes.size() > kMaxDims)
        throw ConfigError("solver needs 1..3 axes (got " + std::to_string(config.axes.size()) + ")");
    for (std::size_t a = 0; a < config.axes.size(); ++a) {
        try {
            validate(config.axes[a]);
        } catch (const ConfigError& e) {
            throw ConfigError("axis " + std::to_string(a) + ": " + e.what());
        }
    }
    const auto& first = config.axes.front();
    bool uniform = true;
    for (const auto& g : config.axes) uniform = uniform && same_conditions(g, first);
    if (uniform) return SolveMode::Uniform;

    const GridSpec* nonperiodic = nullptr;
    for (const auto& g : config.axes) {
        if (g.bc == BoundaryCondition::Periodic) continue;
        if (nonperiodic && !same_conditions(*nonperiodic, g))
            throw ConfigError("unsupported boundary pattern (" + describe(config) +
                              "): non-periodic axes must share one boundary condition and grid kind");
        nonperiodic = &g;
    }
    return SolveMode::Mixed;
}

template <class T>
SolverPlan<T>::SolverPlan(SolverConfig config, SolverOptions options)
    : config_(std::move(config)), options_(options), mode_(classify(config_)),
      extents_(config_.extents()) {
    const int dims = config_.dims();
    singular_ = true;
    for (int a = 0; a < dims; ++a) {
        const auto& g = config_.axes[static_cast<std::size_t>(a)];
        const auto pair = transform_pair_for(g.bc, g.kind);
        pairs_.push_back(pair);
        tables_.push_back(eigenvalues_for(g, config_.approximation));
        plans_.push_back({TransformPlan<T>(pair.forward, g.n, a), TransformPlan<T>(pair.backward, g.n, a)});
        backward_scale_ *= pair.backward_scale(g.n);
        if (tables_.back().null_indices.empty()) singular_ = false;
        (g.bc == BoundaryCondition::Periodic ? periodic_axes_ : real_axes_).push_back(a);
    }
    axis_order_ = periodic_axes_;
    axis_order_.insert(axis_order_.end(), real_axes_.begin(), real_axes_.end());

    if (options_.fault) {
        const auto& f = *options_.fault;
        if (f.axis < 0 || f.axis >= dims || f.index >= tables_[static_cast<std::size_t>(f.axis)].values.size())
            throw ConfigError("eigenvalue fault index out of range");
        tables_[static_cast<std::size_t>(f.axis)].values[f.index] *= f.factor;
    }
}

template <class T>
SolveReport SolverPlan<T>::solve(Field<const T> rhs, Field<T> solution) const {
    return run(rhs, solution);
}

template <class T>
SolveReport SolverPlan<T>::solve_mixed(Field<const T> rhs, Field<T> solution) const {
    if (mode_ != SolveMode::Mixed)
        throw ConfigError("solve_mixed called with a " + std::string(to_string(mode_)) + " plan (" +
                          describe(config_) + ")");
    return run(rhs, solution);
}

template <class T>
template <class V>
void SolverPlan<T>::transform_axis(FieldBuffer<V>& work, int axis, const TransformPlan<T>& plan,
                                   std::vector<V>& buffer) const {
    const std::size_t n = extents_[static_cast<std::size_t>(axis)];
    const std::size_t lines = extents_.size() / n;
    std::span<V> data = work.data();
    std::optional<ReorderPlan> reorder;
    if (axis != 0) {
        reorder.emplace(extents_, axis);
        buffer.resize(extents_.size());
        gather_lines(*reorder, work.view(), std::span<V>(buffer));
        data = buffer;
    }
    detail::parallel_for(lines, options_.threads, [&](std::size_t begin, std::size_t end, unsigned) {
        std::vector<complex_type> scratch(plan.scratch_size());
        for (std::size_t l = begin; l < end; ++l) plan.execute(data.subspan(l * n, n), scratch);
    });
    if (reorder) scatter_lines(*reorder, std::span<const V>(buffer), work.view());
}

template <class T>
template <class V>
double SolverPlan<T>::divide(FieldBuffer<V>& work) const {
    std::array<std::vector<double>, kMaxDims> lambda;
    std::array<std::vector<char>, kMaxDims> null;
    for (std::size_t a = 0; a < kMaxDims; ++a) {
        if (static_cast<int>(a) < config_.dims()) {
            lambda[a] = tables_[a].values;
            null[a].assign(lambda[a].size(), 0);
            for (auto k : tables_[a].null_indices) null[a][k] = 1;
        } else {
            lambda[a] = {0.0};
            null[a] = {1};
        }
    }
    double removed = 0.0;
    for (std::size_t k = 0; k < extents_[2]; ++k) {
        for (std::size_t j = 0; j < extents_[1]; ++j) {
            const double ljk = lambda[1][j] + lambda[2][k];
            const bool njk = null[1][j] && null[2][k];
            V* row = &work(0, j, k);
            for (std::size_t i = 0; i < extents_[0]; ++i) {
                if (njk && null[0][i]) {
                    removed = std::real(row[i]) * backward_scale_;
                    row[i] = V{};
                } else {
                    row[i] *= static_cast<T>(backward_scale_ / (lambda[0][i] + ljk));
                }
            }
        }
    }
    return removed;
}

template <class T>
SolveReport SolverPlan<T>::run(Field<const T> rhs, Field<T> solution) const {
    if (!(rhs.extents() == extents_) || !(solution.extents() == extents_))
        throw ExtentError("solve: plan expects " + to_string(extents_) + ", got rhs " +
                          to_string(rhs.extents()) + " and solution " + to_string(solution.extents()));

    SolveReport report;
    report.mode = mode_;
    report.axis_order = axis_order_;

    // forward includes the copy in, backward the copy out, so the phases add
    // up to the wall time of the call
    auto start = Clock::now();
    FieldBuffer<T> work(extents_);
    for_each_index(extents_, [&](std::size_t i, std::size_t j, std::size_t k) {
        const T v = rhs(i, j, k);
        if (!std::isfinite(v))
            throw InputError("solve: non-finite right-hand side at (" + std::to_string(i) + ", " +
                             std::to_string(j) + ", " + std::to_string(k) + ")");
        work(i, j, k) = v;
    });

    std::vector<T> real_buffer;
    for (int a : real_axes_) transform_axis(work, a, *plans_[static_cast<std::size_t>(a)].forward, real_buffer);

    if (periodic_axes_.empty()) {
        report.timing.forward = seconds_since(start);
        start = Clock::now();
        report.removed_mean = divide(work);
        report.timing.diagonal = seconds_since(start);
        start = Clock::now();
    } else {
        FieldBuffer<complex_type> spectral(extents_);
        std::vector<complex_type> complex_buffer;
        {
            auto src = work.data();
            auto dst = spectral.data();
            for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i];
        }
        for (int a : periodic_axes_)
            transform_axis(spectral, a, *plans_[static_cast<std::size_t>(a)].forward, complex_buffer);
        report.timing.forward = seconds_since(start);
        start = Clock::now();
        report.removed_mean = divide(spectral);
        report.timing.diagonal = seconds_since(start);
        start = Clock::now();
        for (int a : periodic_axes_)
            transform_axis(spectral, a, *plans_[static_cast<std::size_t>(a)].backward, complex_buffer);
        auto src = spectral.data();
        auto dst = work.data();
        for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i].real();
    }
    for (int a : real_axes_) transform_axis(work, a, *plans_[static_cast<std::size_t>(a)].backward, real_buffer);

    if (!singular_) report.removed_mean = 0.0;
    for_each_index(extents_, [&](std::size_t i, std::size_t j, std::size_t k) {
        solution(i, j, k) = work(i, j, k);
    });
    report.timing.backward = seconds_since(start);
    return report;
}

template <class T>
FieldBuffer<T> apply_discrete_laplacian(const SolverConfig& config, Field<const T> field) {
    if (config.approximation != Approximation::FiniteDifference2)
        throw ConfigError("apply_discrete_laplacian is defined for the fd2 approximation only");
    classify(config);
    const Extents extents = config.extents();
    if (!(field.extents() == extents))
        throw ExtentError("apply_discrete_laplacian: config expects " + to_string(extents) +
                          ", field is " + to_string(field.extents()));

    FieldBuffer<T> out(extents);
    for (int a = 0; a < config.dims(); ++a) {
        const auto ax = static_cast<std::size_t>(a);
        const GridSpec& g = config.axes[ax];
        const std::size_t n = g.n;
        const double inv_dx2 = 1.0 / (grid_dx(g) * grid_dx(g));
        for_each_index(extents, [&](std::size_t i, std::size_t j, std::size_t k) {
            Index3 idx{i, j, k};
            const std::size_t p = idx[ax];
            auto at = [&](std::size_t q) {
                Index3 s = idx;
                s[ax] = q;
                return static_cast<double>(field(s[0], s[1], s[2]));
            };
            const double centre = at(p);
            // ghost value beyond the boundary next to index `edge`; `inward`
            // is the interior neighbour used by the Neumann regular mirror
            auto ghost = [&](std::size_t edge, std::size_t inward) {
                switch (g.bc) {
                    case BoundaryCondition::Periodic: return at(edge == 0 ? n - 1 : 0);
                    case BoundaryCondition::Dirichlet:
                        return g.kind == GridKind::Regular ? 0.0 : -at(edge);
                    case BoundaryCondition::Neumann:
                        return g.kind == GridKind::Regular ? at(inward) : at(edge);
                }
                return 0.0;
            };
            const double left = p > 0 ? at(p - 1) : ghost(0, n > 1 ? 1 : 0);
            const double right = p + 1 < n ? at(p + 1) : ghost(n - 1, n > 1 ? n - 2 : 0);
            out(i, j, k) += static_cast<T>((left - 2.0 * centre + right) * inv_dx2);
        });
    }
    return out;
}

template class SolverPlan<float>;
template class SolverPlan<double>;
template FieldBuffer<float> apply_discrete_laplacian(const SolverConfig&, Field<const float>);
template FieldBuffer<double> apply_discrete_laplacian(const SolverConfig&, Field<const double>);

}  // namespace fastpoisson
