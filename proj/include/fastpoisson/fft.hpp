#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace fastpoisson {

/// Unnormalized complex FFT of a fixed length.
///
/// Lengths whose prime factors are all <= 61 run a mixed-radix Stockham
/// autosort pass per factor (radix 4/2/3/5 kernels, generic kernel for larger
/// primes). Other lengths go through Bluestein's chirp-z with a power-of-two
/// inner transform. The plan is immutable; execute takes caller-provided
/// scratch of scratch_size() elements so one plan serves many threads.
template <class T>
class FftPlan {
public:
    using complex_type = std::complex<T>;

    explicit FftPlan(std::size_t n);
    ~FftPlan();
    FftPlan(FftPlan&&) noexcept;
    FftPlan& operator=(FftPlan&&) noexcept;

    std::size_t size() const { return n_; }
    std::size_t scratch_size() const;

    /// X_k = sum_j x_j exp(-2 pi i jk / n), in place.
    void forward(std::span<complex_type> data, std::span<complex_type> scratch) const;
    /// x_j = sum_k X_k exp(+2 pi i jk / n), in place (no 1/n).
    void backward(std::span<complex_type> data, std::span<complex_type> scratch) const;

private:
    struct Stage {
        std::size_t radix;
        std::size_t span;          // accumulated length before this stage
        std::size_t twiddle_base;  // offset into twiddles_
    };

    template <bool Inverse>
    void stockham(std::span<complex_type> data, std::span<complex_type> scratch) const;
    template <bool Inverse>
    void bluestein(std::span<complex_type> data, std::span<complex_type> scratch) const;

    std::size_t n_ = 0;
    std::vector<Stage> stages_;
    std::vector<complex_type> twiddles_;
    std::vector<std::vector<complex_type>> generic_roots_;  // per stage, radix > 5

    // Bluestein state
    std::unique_ptr<FftPlan> inner_;
    std::vector<complex_type> chirp_;
    std::vector<complex_type> kernel_hat_;
};

/// Factorization used by the Stockham path, or empty when a prime factor is
/// too large and the plan falls back to Bluestein.
std::vector<std::size_t> fft_factors(std::size_t n);

extern template class FftPlan<float>;
extern template class FftPlan<double>;

}  // namespace fastpoisson
