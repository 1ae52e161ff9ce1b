#include "fastpoisson/eigenvalues.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fastpoisson {

namespace {

constexpr double kPi = std::numbers::pi;

EigenvalueTable make_table(std::size_t n, BoundaryCondition bc) {
    EigenvalueTable t;
    t.values.resize(n);
    if (bc != BoundaryCondition::Dirichlet) t.null_indices.push_back(0);
    return t;
}

}  // namespace

bool EigenvalueTable::is_null(std::size_t k) const {
    return std::find(null_indices.begin(), null_indices.end(), k) != null_indices.end();
}

EigenvalueTable spectral_eigenvalues(const GridSpec& spec) {
    validate(spec);
    const std::size_t n = spec.n;
    const double L = spec.length;
    auto t = make_table(n, spec.bc);
    for (std::size_t k = 0; k < n; ++k) {
        const auto kd = static_cast<double>(k);
        double w = 0.0;
        switch (spec.bc) {
            case BoundaryCondition::Periodic:
                w = 2.0 * kPi * static_cast<double>(folded_wavenumber(k, n)) / L;
                break;
            case BoundaryCondition::Dirichlet:
                w = kPi * (kd + 1.0) / L;
                break;
            case BoundaryCondition::Neumann:
                w = kPi * kd / L;
                break;
        }
        t.values[k] = -w * w;
    }
    return t;
}

EigenvalueTable fd2_eigenvalues(const GridSpec& spec) {
    const double dx = grid_dx(spec);  // validates
    const std::size_t n = spec.n;
    const auto nd = static_cast<double>(n);
    const bool staggered = spec.kind == GridKind::Staggered;
    auto t = make_table(n, spec.bc);
    for (std::size_t k = 0; k < n; ++k) {
        const auto kd = static_cast<double>(k);
        double angle = 0.0;
        switch (spec.bc) {
            case BoundaryCondition::Periodic:
                angle = kd * kPi / nd;
                break;
            case BoundaryCondition::Dirichlet:
                angle = staggered ? kPi * (kd + 1.0) / (2.0 * nd)
                                  : kPi * (kd + 1.0) / (2.0 * (nd + 1.0));
                break;
            case BoundaryCondition::Neumann:
                angle = staggered ? kPi * kd / (2.0 * nd) : kPi * kd / (2.0 * (nd - 1.0));
                break;
        }
        const double s = 2.0 * std::sin(angle) / dx;
        t.values[k] = -s * s;
    }
    for (auto k : t.null_indices) t.values[k] = 0.0;
    return t;
}

EigenvalueTable eigenvalues_for(const GridSpec& spec, Approximation approx) {
    return approx == Approximation::PseudoSpectral ? spectral_eigenvalues(spec)
                                                   : fd2_eigenvalues(spec);
}

CombinedEigenvalues combine_eigenvalues(std::span<const EigenvalueTable> tables) {
    if (tables.empty() || tables.size() > kMaxDims)
        throw ConfigError("combine_eigenvalues needs 1..3 tables");
    Index3 counts{1, 1, 1};
    for (std::size_t a = 0; a < tables.size(); ++a) counts[a] = tables[a].values.size();
    const auto extents = Extents::of(static_cast<int>(tables.size()), counts);

    static const EigenvalueTable unit{{0.0}, {0}};
    const EigenvalueTable& t0 = tables[0];
    const EigenvalueTable& t1 = tables.size() > 1 ? tables[1] : unit;
    const EigenvalueTable& t2 = tables.size() > 2 ? tables[2] : unit;

    CombinedEigenvalues out{FieldBuffer<double>(extents), {}};
    for_each_index(extents, [&](std::size_t i, std::size_t j, std::size_t k) {
        out.values(i, j, k) = t0.values[i] + t1.values[j] + t2.values[k];
        if (t0.is_null(i) && t1.is_null(j) && t2.is_null(k)) out.null_modes.push_back({i, j, k});
    });
    return out;
}

}  // namespace fastpoisson
