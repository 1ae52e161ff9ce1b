#include <cmath>
#include <numbers>

#include "fastpoisson/verify.hpp"

namespace fastpoisson::verify {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::vector<double> naive_transform(TransformKind kind, std::span<const double> f) {
    const std::size_t n = f.size();
    if (n < min_length(kind))
        throw ConfigError(std::string(to_string(kind)) + " needs length >= " +
                          std::to_string(min_length(kind)));
    if (is_complex(kind)) throw ConfigError("naive_transform: complex kind on real data");
    const auto nd = static_cast<double>(n);
    std::vector<double> out(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const auto kd = static_cast<double>(k);
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        double s = 0.0;
        switch (kind) {
            case TransformKind::DST1:
                for (std::size_t j = 0; j < n; ++j)
                    s += 2.0 * f[j] * std::sin(kPi * (j + 1.0) * (kd + 1.0) / (nd + 1.0));
                break;
            case TransformKind::DST2:
                for (std::size_t j = 0; j < n; ++j)
                    s += 2.0 * f[j] * std::sin(kPi * (j + 0.5) * (kd + 1.0) / nd);
                break;
            case TransformKind::DST3:
                s = sign * f[n - 1];
                for (std::size_t j = 0; j + 1 < n; ++j)
                    s += 2.0 * f[j] * std::sin(kPi * (j + 1.0) * (kd + 0.5) / nd);
                break;
            case TransformKind::DCT1:
                s = f[0] + sign * f[n - 1];
                for (std::size_t j = 1; j + 1 < n; ++j)
                    s += 2.0 * f[j] * std::cos(kPi * static_cast<double>(j) * kd / (nd - 1.0));
                break;
            case TransformKind::DCT2:
                for (std::size_t j = 0; j < n; ++j)
                    s += 2.0 * f[j] * std::cos(kPi * (j + 0.5) * kd / nd);
                break;
            case TransformKind::DCT3:
                s = f[0];
                for (std::size_t j = 1; j < n; ++j)
                    s += 2.0 * f[j] * std::cos(kPi * static_cast<double>(j) * (kd + 0.5) / nd);
                break;
            default:
                break;
        }
        out[k] = s;
    }
    return out;
}

std::vector<std::complex<double>> naive_transform(TransformKind kind,
                                                  std::span<const std::complex<double>> f) {
    if (!is_complex(kind)) throw ConfigError("naive_transform: real kind on complex data");
    const std::size_t n = f.size();
    if (n == 0) throw ConfigError("naive_transform: empty line");
    const double sign = kind == TransformKind::DFT ? -1.0 : 1.0;
    const double scale = kind == TransformKind::DFT ? 1.0 / static_cast<double>(n) : 1.0;
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> s{};
        for (std::size_t j = 0; j < n; ++j) {
            // reduce jk mod n before forming the angle
            const double angle = sign * 2.0 * kPi * static_cast<double>((j * k) % n) / static_cast<double>(n);
            s += f[j] * std::complex<double>(std::cos(angle), std::sin(angle));
        }
        out[k] = s * scale;
    }
    return out;
}

std::vector<std::complex<double>> basis_vector(const GridSpec& spec, std::size_t k) {
    validate(spec);
    const std::size_t n = spec.n;
    if (k >= n) throw ConfigError("basis_vector: index out of range");
    const bool staggered = spec.kind == GridKind::Staggered;
    // angle = pi * m / d with the integer m reduced mod 2d before rounding
    auto angle = [](std::size_t m, std::size_t d) {
        return kPi * static_cast<double>(m % (2 * d)) / static_cast<double>(d);
    };
    std::vector<std::complex<double>> v(n);
    for (std::size_t j = 0; j < n; ++j) {
        switch (spec.bc) {
            case BoundaryCondition::Periodic:
                v[j] = std::polar(1.0, angle(2 * j * k, n));
                break;
            case BoundaryCondition::Dirichlet:
                v[j] = staggered ? std::sin(angle((2 * j + 1) * (k + 1), 2 * n))
                                 : std::sin(angle((j + 1) * (k + 1), n + 1));
                break;
            case BoundaryCondition::Neumann:
                v[j] = staggered ? std::cos(angle((2 * j + 1) * k, 2 * n))
                                 : std::cos(angle(j * k, n - 1));
                break;
        }
    }
    return v;
}

}  // namespace fastpoisson::verify
