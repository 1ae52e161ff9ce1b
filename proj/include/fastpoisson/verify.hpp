#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fastpoisson/core_types.hpp"
#include "fastpoisson/solver.hpp"
#include "fastpoisson/transforms.hpp"

namespace fastpoisson::verify {

// ---------------------------------------------------------------------------
// Reference transforms

/// Literal O(n^2) evaluation of a real transform's defining sum.
std::vector<double> naive_transform(TransformKind kind, std::span<const double> line);

/// Literal O(n^2) DFT (with 1/n) or IDFT (without).
std::vector<std::complex<double>> naive_transform(TransformKind kind,
                                                  std::span<const std::complex<double>> line);

/// k-th eigenvector of the axis operator sampled at the grid points, i.e. the
/// shape the backward transform produces from a unit coefficient at k.
/// Periodic axes give exp(2 pi i jk / n); the others are real.
std::vector<std::complex<double>> basis_vector(const GridSpec& spec, std::size_t k);

// ---------------------------------------------------------------------------
// Dense operators

/// n x n matrix of the three-point second difference on one axis, including
/// the boundary closure, scaled by 1/dx^2.
Eigen::MatrixXd fd2_matrix_1d(const GridSpec& spec);

/// Kronecker-sum assembly of the d-dimensional FD2 operator acting on
/// x-contiguous flattened fields.
Eigen::MatrixXd fd2_matrix(const SolverConfig& config);

/// Weights w of the left null vector of the operator: trapezoid weights on
/// Neumann regular axes, ones elsewhere. Only meaningful for singular configs.
Eigen::VectorXd null_weights(const SolverConfig& config);

inline constexpr std::size_t kDenseOracleLimit = 4096;

/// Solves the assembled FD2 system by dense LU. Singular systems are made
/// regular by adding c * 1 * w^T (a rank-one projection that keeps symmetric
/// operators symmetric) after removing the w-weighted mean of the rhs, so the
/// result has w . phi = 0 like the fast solver's output.
/// Throws ConfigError beyond kDenseOracleLimit unknowns or for non-FD2 configs.
FieldBuffer<double> dense_oracle_solve(const SolverConfig& config, Field<const double> rhs);

// ---------------------------------------------------------------------------
// Manufactured solutions

using Point = std::array<double, 3>;

/// Closed-form phi and its exact Laplacian for one boundary pattern.
struct ManufacturedCase {
    std::string description;
    std::vector<BoundaryCondition> bcs;  // per axis
    std::function<double(const Point&)> solution;
    std::function<double(const Point&)> rhs;
};

/// Smooth case that is not an eigenfunction of any axis operator: a product
/// over axes of exp(sin(2 pi x/L)) (periodic), exp(sin(pi x/L)) - 1
/// (Dirichlet) or exp(cos(pi x/L)) (Neumann).
ManufacturedCase smooth_case(const SolverConfig& config);

/// Product of continuous eigenfunctions with wavenumber index ks[a] per axis
/// (cos(2 pi k x/L), sin(pi k x/L) or cos(pi k x/L)); rhs = lambda * phi with
/// the continuous eigenvalue.
ManufacturedCase eigenmode_case(const SolverConfig& config, const std::vector<std::size_t>& ks);

/// Samples f on the tensor grid of `config`.
FieldBuffer<double> sample(const SolverConfig& config, const std::function<double(const Point&)>& f);

struct ErrorNorms {
    double max = 0.0;
    double l2 = 0.0;  // root mean square over grid points
};

/// Solves the case's sampled rhs with `plan` and measures the error against
/// the sampled solution. Both fields have their means removed first when the
/// plan is singular. Throws ConfigError when the case's bcs do not match.
ErrorNorms mms_error(const SolverPlan<double>& plan, const ManufacturedCase& c);

struct ConvergenceReport {
    std::vector<std::size_t> sizes;  // strictly increasing
    std::vector<double> dx;          // axis-0 spacing per size
    std::vector<ErrorNorms> errors;
    std::vector<double> orders;      // per consecutive pair, from max-norm errors
    bool spectral_exact = false;     // errors at roundoff; orders not fitted

    double finest_order() const { return orders.empty() ? 0.0 : orders.back(); }
};

/// Refinement study: every axis of `base` gets n = size for each size (sorted
/// internally). The order per pair is log(e_coarse/e_fine) / log(dx_coarse/dx_fine),
/// which reduces to log2(e_n / e_2n) when the spacing halves.
ConvergenceReport convergence_order(const SolverConfig& base, std::vector<std::size_t> sizes,
                                    const std::function<ManufacturedCase(const SolverConfig&)>& make_case);

// ---------------------------------------------------------------------------
// Suites driven by the CLI

struct SuiteFilter {
    std::optional<BoundaryCondition> bc;
    std::optional<GridKind> grid;
    std::optional<Approximation> approximation;
    std::optional<SolverOptions::EigenvalueFault> fault;
    std::uint64_t seed = 12345;
};

struct CaseResult {
    std::string suite;
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double tolerance = 0.0;
};

/// Runs round-trip, oracle-equivalence, eigenvector, dense-oracle, spectral
/// exactness and convergence suites over every supported (bc, grid) row and
/// approximation selected by the filter.
std::vector<CaseResult> run_suites(const SuiteFilter& filter);

}  // namespace fastpoisson::verify
