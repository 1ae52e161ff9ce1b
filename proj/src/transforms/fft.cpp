#include "fastpoisson/fft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fastpoisson/errors.hpp"

namespace fastpoisson {

namespace {

constexpr std::size_t kMaxDirectPrime = 61;

template <class T>
std::complex<T> unit_root(long double numerator, long double denominator) {
    // exp(-2 pi i numerator / denominator) evaluated in extended precision
    const long double angle = -2.0L * std::numbers::pi_v<long double> * numerator / denominator;
    return {static_cast<T>(std::cos(angle)), static_cast<T>(std::sin(angle))};
}

template <bool Inverse, class C>
inline C rotate_minus_i(C z) {
    // forward: z * (-i), inverse: z * (+i)
    if constexpr (Inverse)
        return {-z.imag(), z.real()};
    else
        return {z.imag(), -z.real()};
}

template <bool Inverse, class C>
inline C maybe_conj(C z) {
    if constexpr (Inverse)
        return std::conj(z);
    else
        return z;
}

}  // namespace

std::vector<std::size_t> fft_factors(std::size_t n) {
    std::vector<std::size_t> factors;
    while (n % 4 == 0) {
        factors.push_back(4);
        n /= 4;
    }
    if (n % 2 == 0) {
        factors.push_back(2);
        n /= 2;
    }
    for (std::size_t p = 3; p * p <= n; p += 2) {
        while (n % p == 0) {
            if (p > kMaxDirectPrime) return {};
            factors.push_back(p);
            n /= p;
        }
    }
    if (n > 1) {
        if (n > kMaxDirectPrime) return {};
        factors.push_back(n);
    }
    return factors;
}

template <class T>
FftPlan<T>::FftPlan(std::size_t n) : n_(n) {
    if (n == 0) throw ConfigError("FFT length must be positive");
    if (n == 1) return;

    const auto factors = fft_factors(n);
    if (factors.empty()) {
        std::size_t m = 1;
        while (m < 2 * n - 1) m <<= 1;
        inner_ = std::make_unique<FftPlan>(m);
        chirp_.resize(n);
        const long double two_n = 2.0L * static_cast<long double>(n);
        for (std::size_t j = 0; j < n; ++j) {
            // exp(-i pi j^2 / n); reduce j^2 mod 2n to keep the angle small
            const auto jj = static_cast<long double>((j * j) % (2 * n));
            chirp_[j] = unit_root<T>(jj, two_n);
        }
        std::vector<complex_type> kernel(m, complex_type{});
        kernel[0] = std::conj(chirp_[0]);
        for (std::size_t j = 1; j < n; ++j) kernel[j] = kernel[m - j] = std::conj(chirp_[j]);
        std::vector<complex_type> scratch(inner_->scratch_size());
        inner_->forward(kernel, scratch);
        const T inv_m = T(1) / static_cast<T>(m);
        for (auto& k : kernel) k *= inv_m;
        kernel_hat_ = std::move(kernel);
        return;
    }

    std::size_t span = 1;
    generic_roots_.resize(factors.size());
    for (std::size_t s = 0; s < factors.size(); ++s) {
        const std::size_t radix = factors[s];
        stages_.push_back({radix, span, twiddles_.size()});
        for (std::size_t k = 0; k < span; ++k)
            for (std::size_t r = 1; r < radix; ++r)
                twiddles_.push_back(unit_root<T>(static_cast<long double>(r * k),
                                                 static_cast<long double>(span * radix)));
        if (radix > 5) {
            auto& roots = generic_roots_[s];
            for (std::size_t r = 0; r < radix; ++r)
                roots.push_back(unit_root<T>(static_cast<long double>(r),
                                             static_cast<long double>(radix)));
        }
        span *= radix;
    }
}

template <class T>
FftPlan<T>::~FftPlan() = default;
template <class T>
FftPlan<T>::FftPlan(FftPlan&&) noexcept = default;
template <class T>
FftPlan<T>& FftPlan<T>::operator=(FftPlan&&) noexcept = default;

template <class T>
std::size_t FftPlan<T>::scratch_size() const {
    if (inner_) return inner_->size() + inner_->scratch_size();
    return n_;
}

template <class T>
void FftPlan<T>::forward(std::span<complex_type> data, std::span<complex_type> scratch) const {
    if (data.size() != n_) throw ExtentError("FFT line length mismatch");
    if (scratch.size() < scratch_size()) throw ExtentError("FFT scratch too small");
    if (n_ == 1) return;
    if (inner_)
        bluestein<false>(data, scratch);
    else
        stockham<false>(data, scratch);
}

template <class T>
void FftPlan<T>::backward(std::span<complex_type> data, std::span<complex_type> scratch) const {
    if (data.size() != n_) throw ExtentError("FFT line length mismatch");
    if (scratch.size() < scratch_size()) throw ExtentError("FFT scratch too small");
    if (n_ == 1) return;
    if (inner_)
        bluestein<true>(data, scratch);
    else
        stockham<true>(data, scratch);
}

template <class T>
template <bool Inverse>
void FftPlan<T>::stockham(std::span<complex_type> data, std::span<complex_type> scratch) const {
    using C = complex_type;
    const std::size_t n = n_;
    C* in = data.data();
    C* out = scratch.data();

    for (std::size_t s = 0; s < stages_.size(); ++s) {
        const Stage& st = stages_[s];
        const std::size_t radix = st.radix;
        const std::size_t span = st.span;
        const std::size_t m = n / radix;
        const std::size_t blocks = m / span;
        const C* tw = twiddles_.data() + st.twiddle_base;

        switch (radix) {
            case 2:
                for (std::size_t b = 0; b < blocks; ++b) {
                    for (std::size_t k = 0; k < span; ++k) {
                        const std::size_t j = b * span + k;
                        const C v0 = in[j];
                        const C v1 = in[j + m] * maybe_conj<Inverse>(tw[k]);
                        C* o = out + b * span * 2 + k;
                        o[0] = v0 + v1;
                        o[span] = v0 - v1;
                    }
                }
                break;
            case 3: {
                const T h = static_cast<T>(0.86602540378443864676372317075294L);
                for (std::size_t b = 0; b < blocks; ++b) {
                    for (std::size_t k = 0; k < span; ++k) {
                        const std::size_t j = b * span + k;
                        const C* w = tw + k * 2;
                        const C v0 = in[j];
                        const C v1 = in[j + m] * maybe_conj<Inverse>(w[0]);
                        const C v2 = in[j + 2 * m] * maybe_conj<Inverse>(w[1]);
                        const C sum = v1 + v2;
                        const C base = v0 - T(0.5) * sum;
                        const C rot = rotate_minus_i<Inverse>(h * (v1 - v2));
                        C* o = out + b * span * 3 + k;
                        o[0] = v0 + sum;
                        o[span] = base + rot;
                        o[2 * span] = base - rot;
                    }
                }
                break;
            }
            case 4:
                for (std::size_t b = 0; b < blocks; ++b) {
                    for (std::size_t k = 0; k < span; ++k) {
                        const std::size_t j = b * span + k;
                        const C* w = tw + k * 3;
                        const C v0 = in[j];
                        const C v1 = in[j + m] * maybe_conj<Inverse>(w[0]);
                        const C v2 = in[j + 2 * m] * maybe_conj<Inverse>(w[1]);
                        const C v3 = in[j + 3 * m] * maybe_conj<Inverse>(w[2]);
                        const C t0 = v0 + v2;
                        const C t1 = v0 - v2;
                        const C t2 = v1 + v3;
                        const C t3 = rotate_minus_i<Inverse>(v1 - v3);
                        C* o = out + b * span * 4 + k;
                        o[0] = t0 + t2;
                        o[span] = t1 + t3;
                        o[2 * span] = t0 - t2;
                        o[3 * span] = t1 - t3;
                    }
                }
                break;
            case 5: {
                const T c1 = static_cast<T>(0.30901699437494742410229341718282L);
                const T c2 = static_cast<T>(-0.80901699437494742410229341718282L);
                const T s1 = static_cast<T>(0.95105651629515357211643933337938L);
                const T s2 = static_cast<T>(0.58778525229247312916870595463907L);
                for (std::size_t b = 0; b < blocks; ++b) {
                    for (std::size_t k = 0; k < span; ++k) {
                        const std::size_t j = b * span + k;
                        const C* w = tw + k * 4;
                        const C v0 = in[j];
                        const C v1 = in[j + m] * maybe_conj<Inverse>(w[0]);
                        const C v2 = in[j + 2 * m] * maybe_conj<Inverse>(w[1]);
                        const C v3 = in[j + 3 * m] * maybe_conj<Inverse>(w[2]);
                        const C v4 = in[j + 4 * m] * maybe_conj<Inverse>(w[3]);
                        const C a14 = v1 + v4, d14 = v1 - v4;
                        const C a23 = v2 + v3, d23 = v2 - v3;
                        const C re1 = v0 + c1 * a14 + c2 * a23;
                        const C re2 = v0 + c2 * a14 + c1 * a23;
                        const C im1 = rotate_minus_i<Inverse>(s1 * d14 + s2 * d23);
                        const C im2 = rotate_minus_i<Inverse>(s2 * d14 - s1 * d23);
                        C* o = out + b * span * 5 + k;
                        o[0] = v0 + a14 + a23;
                        o[span] = re1 + im1;
                        o[4 * span] = re1 - im1;
                        o[2 * span] = re2 + im2;
                        o[3 * span] = re2 - im2;
                    }
                }
                break;
            }
            default: {
                const C* roots = generic_roots_[s].data();
                C v[kMaxDirectPrime];
                for (std::size_t b = 0; b < blocks; ++b) {
                    for (std::size_t k = 0; k < span; ++k) {
                        const std::size_t j = b * span + k;
                        const C* w = tw + k * (radix - 1);
                        v[0] = in[j];
                        for (std::size_t r = 1; r < radix; ++r)
                            v[r] = in[j + r * m] * maybe_conj<Inverse>(w[r - 1]);
                        C* o = out + b * span * radix + k;
                        for (std::size_t q = 0; q < radix; ++q) {
                            C acc = v[0];
                            std::size_t idx = 0;
                            for (std::size_t r = 1; r < radix; ++r) {
                                idx += q;
                                if (idx >= radix) idx -= radix;
                                acc += v[r] * maybe_conj<Inverse>(roots[idx]);
                            }
                            o[q * span] = acc;
                        }
                    }
                }
                break;
            }
        }
        std::swap(in, out);
    }
    if (in != data.data()) std::copy(in, in + n, data.data());
}

template <class T>
template <bool Inverse>
void FftPlan<T>::bluestein(std::span<complex_type> data, std::span<complex_type> scratch) const {
    const std::size_t n = n_;
    const std::size_t m = inner_->size();
    auto work = scratch.first(m);
    auto inner_scratch = scratch.subspan(m);

    // The inverse transform is conj(forward(conj(x))).
    for (std::size_t j = 0; j < n; ++j) work[j] = maybe_conj<Inverse>(data[j]) * chirp_[j];
    std::fill(work.begin() + static_cast<std::ptrdiff_t>(n), work.end(), complex_type{});
    inner_->forward(work, inner_scratch);
    for (std::size_t j = 0; j < m; ++j) work[j] *= kernel_hat_[j];
    inner_->backward(work, inner_scratch);
    for (std::size_t k = 0; k < n; ++k) data[k] = maybe_conj<Inverse>(work[k] * chirp_[k]);
}

template class FftPlan<float>;
template class FftPlan<double>;

}  // namespace fastpoisson
