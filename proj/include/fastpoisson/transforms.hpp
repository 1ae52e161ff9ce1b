#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

#include "fastpoisson/core_types.hpp"
#include "fastpoisson/fft.hpp"

namespace fastpoisson {

/// The discrete transforms the solver diagonalizes with.
///
/// Real kinds are unnormalized:
///   DST1  y_k = 2 sum_{j<n} x_j sin(pi (j+1)(k+1) / (n+1))
///   DST2  y_k = 2 sum_{j<n} x_j sin(pi (j+1/2)(k+1) / n)
///   DST3  y_k = (-1)^k x_{n-1} + 2 sum_{j<n-1} x_j sin(pi (j+1)(k+1/2) / n)
///   DCT1  y_k = x_0 + (-1)^k x_{n-1} + 2 sum_{0<j<n-1} x_j cos(pi j k / (n-1))
///   DCT2  y_k = 2 sum_{j<n} x_j cos(pi (j+1/2) k / n)
///   DCT3  y_k = x_0 + 2 sum_{0<j<n} x_j cos(pi j (k+1/2) / n)
/// DFT carries the 1/n factor (y_k = 1/n sum x_j e^{-2 pi i jk/n}), IDFT none.
enum class TransformKind { DFT, IDFT, DST1, DST2, DST3, DCT1, DCT2, DCT3 };

std::string_view to_string(TransformKind kind);
bool is_complex(TransformKind kind);

/// Smallest length the kind's defining formula accepts (2 for DCT1).
std::size_t min_length(TransformKind kind);

/// Forward/backward transforms for one (bc, grid) combination. The backward
/// leg must be multiplied by backward_scale(n) to invert the forward leg.
struct TransformPair {
    TransformKind forward;
    TransformKind backward;

    double backward_scale(std::size_t n) const;

    friend bool operator==(const TransformPair&, const TransformPair&) = default;
};

/// periodic/regular    DFT,  IDFT
/// Dirichlet/regular   DST1, DST1 / (2(n+1))
/// Dirichlet/staggered DST2, DST3 / (2n)
/// Neumann/regular     DCT1, DCT1 / (2(n-1))
/// Neumann/staggered   DCT2, DCT3 / (2n)
/// Throws ConfigError for periodic/staggered.
TransformPair transform_pair_for(BoundaryCondition bc, GridKind grid);

/// A transform of fixed kind and length bound to one array axis.
///
/// Real kinds are computed through a complex FFT: DCT2/DCT3 (and DST2/DST3 by
/// index/sign reversal) use Makhoul's length-n reordering, DST1 and DCT1 use
/// odd/even extension to lengths 2(n+1) and 2(n-1). Execution needs scratch of
/// scratch_size() complex values and does no allocation.
template <class T>
class TransformPlan {
public:
    using complex_type = std::complex<T>;

    TransformPlan(TransformKind kind, std::size_t n, int axis = 0);

    TransformKind kind() const { return kind_; }
    std::size_t size() const { return n_; }
    int axis() const { return axis_; }
    std::size_t scratch_size() const;

    /// In-place real transform; kind must be one of the DST/DCT kinds.
    void execute(std::span<T> line, std::span<complex_type> scratch) const;
    /// In-place complex transform; kind must be DFT or IDFT.
    void execute(std::span<complex_type> line, std::span<complex_type> scratch) const;

private:
    void dct2(std::span<T> line, std::span<complex_type> scratch) const;
    void dct3(std::span<T> line, std::span<complex_type> scratch) const;
    void dst1(std::span<T> line, std::span<complex_type> scratch) const;
    void dct1(std::span<T> line, std::span<complex_type> scratch) const;

    TransformKind kind_;
    std::size_t n_;
    int axis_;
    FftPlan<T> fft_;
    std::vector<complex_type> post_twiddle_;  // exp(-i pi k / (2n)) for the Makhoul kinds
};

extern template class TransformPlan<float>;
extern template class TransformPlan<double>;

}  // namespace fastpoisson
