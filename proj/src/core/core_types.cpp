#include "fastpoisson/core_types.hpp"

#include <cmath>
#include <limits>

namespace fastpoisson {

std::string_view to_string(BoundaryCondition bc) {
    switch (bc) {
        case BoundaryCondition::Periodic: return "periodic";
        case BoundaryCondition::Dirichlet: return "dirichlet";
        case BoundaryCondition::Neumann: return "neumann";
    }
    return "?";
}

std::string_view to_string(GridKind kind) {
    return kind == GridKind::Regular ? "regular" : "staggered";
}

std::string_view to_string(Approximation approx) {
    return approx == Approximation::PseudoSpectral ? "spectral" : "fd2";
}

std::optional<BoundaryCondition> parse_boundary_condition(std::string_view text) {
    if (text == "periodic") return BoundaryCondition::Periodic;
    if (text == "dirichlet") return BoundaryCondition::Dirichlet;
    if (text == "neumann") return BoundaryCondition::Neumann;
    return std::nullopt;
}

std::optional<GridKind> parse_grid_kind(std::string_view text) {
    if (text == "regular") return GridKind::Regular;
    if (text == "staggered") return GridKind::Staggered;
    return std::nullopt;
}

std::optional<Approximation> parse_approximation(std::string_view text) {
    if (text == "spectral") return Approximation::PseudoSpectral;
    if (text == "fd2") return Approximation::FiniteDifference2;
    return std::nullopt;
}

void validate(const GridSpec& spec) {
    if (spec.n == 0) throw ConfigError("grid point count must be positive");
    if (!(spec.length > 0.0) || !std::isfinite(spec.length))
        throw ConfigError("grid length must be positive and finite");
    if (spec.bc == BoundaryCondition::Periodic && spec.kind == GridKind::Staggered)
        throw ConfigError("periodic boundary conditions require a regular grid");
    if (spec.bc == BoundaryCondition::Neumann && spec.kind == GridKind::Regular && spec.n < 2)
        throw ConfigError("Neumann regular grid needs n >= 2 (got " +
                          std::to_string(spec.n) + ")");
}

double grid_dx(const GridSpec& spec) {
    validate(spec);
    const auto n = static_cast<double>(spec.n);
    if (spec.kind == GridKind::Staggered || spec.bc == BoundaryCondition::Periodic)
        return spec.length / n;
    if (spec.bc == BoundaryCondition::Dirichlet) return spec.length / (n + 1.0);
    return spec.length / (n - 1.0);
}

std::vector<double> grid_points(const GridSpec& spec) {
    validate(spec);
    const auto n = static_cast<double>(spec.n);
    std::vector<double> x(spec.n);
    for (std::size_t j = 0; j < spec.n; ++j) {
        const auto jd = static_cast<double>(j);
        if (spec.kind == GridKind::Staggered)
            x[j] = (jd + 0.5) * spec.length / n;
        else if (spec.bc == BoundaryCondition::Periodic)
            x[j] = jd * spec.length / n;
        else if (spec.bc == BoundaryCondition::Dirichlet)
            x[j] = (jd + 1.0) * spec.length / (n + 1.0);
        else
            x[j] = jd * spec.length / (n - 1.0);
    }
    if (spec.bc == BoundaryCondition::Neumann && spec.kind == GridKind::Regular) x.back() = spec.length;
    return x;
}

namespace {

void check_total(const Index3& n) {
    std::size_t total = 1;
    for (std::size_t c : n) {
        if (c != 0 && total > std::numeric_limits<std::size_t>::max() / c)
            throw ExtentError("extents overflow the addressable element count");
        total *= c;
    }
}

}  // namespace

Extents::Extents(std::initializer_list<std::size_t> counts) {
    if (counts.size() < 1 || counts.size() > kMaxDims)
        throw ExtentError("extents must have 1..3 entries");
    dims = static_cast<int>(counts.size());
    std::size_t a = 0;
    for (auto c : counts) n[a++] = c;
    check_total(n);
}

Extents Extents::of(int dims, const Index3& counts) {
    if (dims < 1 || dims > static_cast<int>(kMaxDims))
        throw ExtentError("extents must have 1..3 entries");
    Extents e;
    e.dims = dims;
    for (int a = 0; a < dims; ++a) e.n[a] = counts[a];
    check_total(e.n);
    return e;
}

std::string to_string(const Extents& extents) {
    std::string s = "(";
    for (int a = 0; a < extents.dims; ++a) {
        if (a) s += "x";
        s += std::to_string(extents.n[a]);
    }
    return s + ")";
}

Index3 natural_strides(const Extents& extents) {
    return {1, extents[0], extents[0] * extents[1]};
}

}  // namespace fastpoisson
