#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fastpoisson/core_types.hpp"

namespace fastpoisson {

/// Eigenvalues of the 1D second-derivative operator in the basis selected by
/// transform_pair_for, indexed like the forward transform's output.
struct EigenvalueTable {
    std::vector<double> values;          // all <= 0, units 1/length^2
    std::vector<std::size_t> null_indices;  // {0} for periodic/Neumann, empty for Dirichlet

    bool is_null(std::size_t k) const;
};

/// Eigenvalues of the continuous operator:
///   Dirichlet  -(pi (k+1) / L)^2
///   Neumann    -(pi k / L)^2
///   periodic   -(2 pi m / L)^2 with the folded wavenumber m = min(k, n-k)
EigenvalueTable spectral_eigenvalues(const GridSpec& spec);

/// Eigenvalues of the three-point second difference with the closures used by
/// apply_discrete_laplacian, e.g. -(2 sin(pi (k+1) / (2(n+1))) / dx)^2 for a
/// Dirichlet regular grid.
EigenvalueTable fd2_eigenvalues(const GridSpec& spec);

EigenvalueTable eigenvalues_for(const GridSpec& spec, Approximation approx);

/// Folded periodic wavenumber.
inline std::size_t folded_wavenumber(std::size_t k, std::size_t n) {
    return k <= n - k ? k : n - k;
}

/// Multi-dimensional eigenvalues lambda_{k1 k2 k3} = sum of per-axis values.
struct CombinedEigenvalues {
    FieldBuffer<double> values;
    std::vector<Index3> null_modes;
};

CombinedEigenvalues combine_eigenvalues(std::span<const EigenvalueTable> tables);

}  // namespace fastpoisson
