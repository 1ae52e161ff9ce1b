#include "fastpoisson/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fastpoisson {

namespace {

std::size_t fft_length(TransformKind kind, std::size_t n) {
    if (n == 0 || n < min_length(kind))
        throw ConfigError(std::string(to_string(kind)) + " needs length >= " +
                          std::to_string(min_length(kind)) + " (got " + std::to_string(n) + ")");
    switch (kind) {
        case TransformKind::DST1: return 2 * (n + 1);
        case TransformKind::DCT1: return 2 * (n - 1);
        default: return n;
    }
}

bool uses_makhoul(TransformKind kind) {
    return kind == TransformKind::DST2 || kind == TransformKind::DST3 ||
           kind == TransformKind::DCT2 || kind == TransformKind::DCT3;
}

}  // namespace

std::string_view to_string(TransformKind kind) {
    switch (kind) {
        case TransformKind::DFT: return "DFT";
        case TransformKind::IDFT: return "IDFT";
        case TransformKind::DST1: return "DST1";
        case TransformKind::DST2: return "DST2";
        case TransformKind::DST3: return "DST3";
        case TransformKind::DCT1: return "DCT1";
        case TransformKind::DCT2: return "DCT2";
        case TransformKind::DCT3: return "DCT3";
    }
    return "?";
}

bool is_complex(TransformKind kind) {
    return kind == TransformKind::DFT || kind == TransformKind::IDFT;
}

std::size_t min_length(TransformKind kind) { return kind == TransformKind::DCT1 ? 2 : 1; }

double TransformPair::backward_scale(std::size_t n) const {
    const auto nd = static_cast<double>(n);
    switch (backward) {
        case TransformKind::DST1: return 1.0 / (2.0 * (nd + 1.0));
        case TransformKind::DCT1: return 1.0 / (2.0 * (nd - 1.0));
        case TransformKind::DST3:
        case TransformKind::DCT3: return 1.0 / (2.0 * nd);
        default: return 1.0;
    }
}

TransformPair transform_pair_for(BoundaryCondition bc, GridKind grid) {
    using K = TransformKind;
    switch (bc) {
        case BoundaryCondition::Periodic:
            if (grid == GridKind::Staggered)
                throw ConfigError("no transform pair for periodic boundary conditions on a staggered grid");
            return {K::DFT, K::IDFT};
        case BoundaryCondition::Dirichlet:
            return grid == GridKind::Regular ? TransformPair{K::DST1, K::DST1}
                                             : TransformPair{K::DST2, K::DST3};
        case BoundaryCondition::Neumann:
            return grid == GridKind::Regular ? TransformPair{K::DCT1, K::DCT1}
                                             : TransformPair{K::DCT2, K::DCT3};
    }
    throw ConfigError("unknown boundary condition");
}

template <class T>
TransformPlan<T>::TransformPlan(TransformKind kind, std::size_t n, int axis)
    : kind_(kind),
      n_(n),
      axis_(axis),
      fft_(fft_length(kind, n)) {
    if (axis < 0 || axis >= static_cast<int>(kMaxDims))
        throw ConfigError("transform axis must be 0..2");
    if (uses_makhoul(kind)) {
        post_twiddle_.resize(n);
        const long double two_n = 2.0L * static_cast<long double>(n);
        for (std::size_t k = 0; k < n; ++k) {
            const long double angle =
                -std::numbers::pi_v<long double> * static_cast<long double>(k) / two_n;
            post_twiddle_[k] = {static_cast<T>(std::cos(angle)), static_cast<T>(std::sin(angle))};
        }
    }
}

template <class T>
std::size_t TransformPlan<T>::scratch_size() const {
    if (is_complex(kind_)) return fft_.scratch_size();
    return fft_.size() + fft_.scratch_size();
}

template <class T>
void TransformPlan<T>::execute(std::span<complex_type> line,
                               std::span<complex_type> scratch) const {
    if (!is_complex(kind_))
        throw ConfigError(std::string(to_string(kind_)) + " is a real transform");
    if (line.size() != n_) throw ExtentError("transform line length mismatch");
    if (kind_ == TransformKind::DFT) {
        fft_.forward(line, scratch);
        const T scale = T(1) / static_cast<T>(n_);
        for (auto& v : line) v *= scale;
    } else {
        fft_.backward(line, scratch);
    }
}

template <class T>
void TransformPlan<T>::execute(std::span<T> line, std::span<complex_type> scratch) const {
    if (is_complex(kind_))
        throw ConfigError(std::string(to_string(kind_)) + " is a complex transform");
    if (line.size() != n_) throw ExtentError("transform line length mismatch");
    if (scratch.size() < scratch_size()) throw ExtentError("transform scratch too small");
    const std::size_t n = n_;
    switch (kind_) {
        case TransformKind::DCT2:
            dct2(line, scratch);
            break;
        case TransformKind::DCT3:
            dct3(line, scratch);
            break;
        case TransformKind::DST2:
            // DST2(x)_k = DCT2((-1)^j x_j)_{n-1-k}
            for (std::size_t j = 1; j < n; j += 2) line[j] = -line[j];
            dct2(line, scratch);
            std::reverse(line.begin(), line.end());
            break;
        case TransformKind::DST3:
            // DST3(x)_k = (-1)^k DCT3(reversed x)_k
            std::reverse(line.begin(), line.end());
            dct3(line, scratch);
            for (std::size_t k = 1; k < n; k += 2) line[k] = -line[k];
            break;
        case TransformKind::DST1:
            dst1(line, scratch);
            break;
        case TransformKind::DCT1:
            dct1(line, scratch);
            break;
        default:
            break;
    }
}

template <class T>
void TransformPlan<T>::dct2(std::span<T> line, std::span<complex_type> scratch) const {
    const std::size_t n = n_;
    auto v = scratch.first(n);
    auto fft_scratch = scratch.subspan(n);
    for (std::size_t j = 0; 2 * j < n; ++j) v[j] = line[2 * j];
    for (std::size_t j = 0; 2 * j + 1 < n; ++j) v[n - 1 - j] = line[2 * j + 1];
    fft_.forward(v, fft_scratch);
    for (std::size_t k = 0; k < n; ++k) line[k] = T(2) * (post_twiddle_[k] * v[k]).real();
}

template <class T>
void TransformPlan<T>::dct3(std::span<T> line, std::span<complex_type> scratch) const {
    const std::size_t n = n_;
    auto z = scratch.first(n);
    auto fft_scratch = scratch.subspan(n);
    z[0] = line[0];
    for (std::size_t k = 1; k < n; ++k)
        z[k] = complex_type(line[k], -line[n - k]) * std::conj(post_twiddle_[k]);
    fft_.backward(z, fft_scratch);
    for (std::size_t j = 0; 2 * j < n; ++j) line[2 * j] = z[j].real();
    for (std::size_t j = 0; 2 * j + 1 < n; ++j) line[2 * j + 1] = z[n - 1 - j].real();
}

template <class T>
void TransformPlan<T>::dst1(std::span<T> line, std::span<complex_type> scratch) const {
    const std::size_t n = n_;
    const std::size_t m = 2 * (n + 1);
    auto a = scratch.first(m);
    auto fft_scratch = scratch.subspan(m);
    a[0] = 0;
    a[n + 1] = 0;
    for (std::size_t j = 0; j < n; ++j) {
        a[j + 1] = line[j];
        a[m - 1 - j] = -line[j];
    }
    fft_.forward(a, fft_scratch);
    for (std::size_t k = 0; k < n; ++k) line[k] = -a[k + 1].imag();
}

template <class T>
void TransformPlan<T>::dct1(std::span<T> line, std::span<complex_type> scratch) const {
    const std::size_t n = n_;
    const std::size_t m = 2 * (n - 1);
    auto a = scratch.first(m);
    auto fft_scratch = scratch.subspan(m);
    for (std::size_t j = 0; j < n; ++j) a[j] = line[j];
    for (std::size_t j = 1; j + 1 < n; ++j) a[m - j] = line[j];
    fft_.forward(a, fft_scratch);
    for (std::size_t k = 0; k < n; ++k) line[k] = a[k].real();
}

template class TransformPlan<float>;
template class TransformPlan<double>;

}  // namespace fastpoisson
