#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fastpoisson/core_types.hpp"
#include "fastpoisson/eigenvalues.hpp"
#include "fastpoisson/transforms.hpp"

namespace fastpoisson {

/// Problem definition: one GridSpec per axis (1-3 axes) and the discrete
/// operator to invert.
///
/// Accepted boundary patterns:
///   uniform  every axis has the same (bc, grid kind)
///   mixed    one or two periodic axes, all remaining axes share one
///            Dirichlet or Neumann (bc, grid kind)
/// Axis lengths and point counts may differ freely.
struct SolverConfig {
    std::vector<GridSpec> axes;
    Approximation approximation = Approximation::PseudoSpectral;

    int dims() const { return static_cast<int>(axes.size()); }
    Extents extents() const;
};

enum class SolveMode { Uniform, Mixed };

std::string_view to_string(SolveMode mode);

/// Validates the configuration and reports which pattern it matches.
/// Throws ConfigError with a description of the offending axes otherwise.
SolveMode classify(const SolverConfig& config);

struct SolverOptions {
    /// Worker threads for the per-line transform passes.
    unsigned threads = 1;

    /// Harness self-test hook: multiplies one per-axis eigenvalue by `factor`
    /// so verification suites can prove they notice a wrong operator.
    struct EigenvalueFault {
        int axis = 0;
        std::size_t index = 0;
        double factor = 1.0;
    };
    std::optional<EigenvalueFault> fault;
};

/// Wall-clock seconds spent in each phase of one solve.
struct PhaseTimes {
    double forward = 0.0;
    double diagonal = 0.0;
    double backward = 0.0;

    double total() const { return forward + diagonal + backward; }
};

struct SolveReport {
    /// Value of the constant removed from the right-hand side for singular
    /// (all periodic/Neumann) problems; 0 otherwise. For Neumann regular axes
    /// the mean is trapezoid-weighted, matching the DCT-I null mode.
    double removed_mean = 0.0;
    SolveMode mode = SolveMode::Uniform;
    /// Axes in processing order: periodic axes first, then the others.
    std::vector<int> axis_order;
    PhaseTimes timing;
};

/// Precomputed transforms and eigenvalues for one configuration.
///
/// Solving runs forward transforms along every axis, divides by the summed
/// per-axis eigenvalues, then runs the scaled backward transforms. The plan
/// is immutable once built; solve() allocates its own workspace, so one plan
/// may serve concurrent solves on disjoint fields.
///
/// Null modes (the constant mode when every axis is periodic or Neumann) get
/// a zero coefficient: the right-hand side's mean is dropped and reported,
/// and the solution has zero mean.
template <class T>
class SolverPlan {
public:
    using value_type = T;
    using complex_type = std::complex<T>;

    explicit SolverPlan(SolverConfig config, SolverOptions options = {});

    const SolverConfig& config() const { return config_; }
    const SolverOptions& options() const { return options_; }
    SolveMode mode() const { return mode_; }
    Extents extents() const { return extents_; }
    bool singular() const { return singular_; }

    const TransformPair& transforms(int axis) const { return pairs_.at(static_cast<std::size_t>(axis)); }
    const EigenvalueTable& eigenvalues(int axis) const { return tables_.at(static_cast<std::size_t>(axis)); }
    const std::vector<int>& axis_order() const { return axis_order_; }

    /// Solves lap(solution) = rhs. rhs and solution may alias, and either may
    /// be a sub-block of a larger array. When they do not alias rhs is left
    /// untouched.
    SolveReport solve(Field<const T> rhs, Field<T> solution) const;

    /// solve() restricted to mixed-pattern plans; throws ConfigError otherwise.
    SolveReport solve_mixed(Field<const T> rhs, Field<T> solution) const;

private:
    struct AxisPlans {
        std::optional<TransformPlan<T>> forward;
        std::optional<TransformPlan<T>> backward;
    };

    SolveReport run(Field<const T> rhs, Field<T> solution) const;

    template <class V>
    void transform_axis(FieldBuffer<V>& work, int axis, const TransformPlan<T>& plan,
                        std::vector<V>& buffer) const;
    template <class V>
    double divide(FieldBuffer<V>& work) const;

    SolverConfig config_;
    SolverOptions options_;
    SolveMode mode_;
    Extents extents_;
    std::vector<TransformPair> pairs_;
    std::vector<EigenvalueTable> tables_;
    std::vector<AxisPlans> plans_;
    std::vector<int> axis_order_;
    std::vector<int> periodic_axes_;
    std::vector<int> real_axes_;
    double backward_scale_ = 1.0;
    bool singular_ = false;
};

/// Three-point second difference summed over axes, with the boundary closures
/// whose eigenvectors are the transform bases:
///   periodic            wrap-around
///   Dirichlet regular   ghost value 0
///   Dirichlet staggered ghost = -(boundary value)
///   Neumann regular     ghost = mirror of the first interior value
///   Neumann staggered   ghost = boundary value
/// Requires approximation == FiniteDifference2.
template <class T>
FieldBuffer<T> apply_discrete_laplacian(const SolverConfig& config, Field<const T> field);

template <class T>
    requires(!std::is_const_v<T>)
FieldBuffer<T> apply_discrete_laplacian(const SolverConfig& config, Field<T> field) {
    return apply_discrete_laplacian<T>(config, Field<const T>(field));
}

extern template class SolverPlan<float>;
extern template class SolverPlan<double>;
extern template FieldBuffer<float> apply_discrete_laplacian(const SolverConfig&, Field<const float>);
extern template FieldBuffer<double> apply_discrete_laplacian(const SolverConfig&, Field<const double>);

}  // namespace fastpoisson
