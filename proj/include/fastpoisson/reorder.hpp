#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <type_traits>

#include "fastpoisson/core_types.hpp"

namespace fastpoisson {

/// Describes how the lines of a field along one axis map to a contiguous
/// buffer: line L occupies buffer[L * n_axis, (L + 1) * n_axis). Lines are
/// numbered over the remaining axes in ascending order, lowest axis fastest.
///
/// This is the in-memory stand-in for the global transpose of a distributed
/// solver; the buffer-oriented interface is where such an exchange would go.
struct ReorderPlan {
    static constexpr std::size_t kDefaultTile = 32;

    Extents extents;
    int axis = 0;
    std::size_t tile = kDefaultTile;

    ReorderPlan(const Extents& field_extents, int target_axis, std::size_t tile_size = kDefaultTile);

    std::size_t line_length() const { return extents[static_cast<std::size_t>(axis)]; }
    std::size_t line_count() const { return extents.size() / line_length(); }
    std::size_t buffer_size() const { return extents.size(); }
    /// Product of extents of the axes below `axis`.
    std::size_t inner_count() const;
};

namespace detail {

void check_reorder(const ReorderPlan& plan, const Extents& field_extents, std::size_t buffer_size);

// Visits (buffer index, field address) pairs tile by tile.
template <class V, class Fn>
void for_each_reorder_pair(const ReorderPlan& plan, const Field<V>& field, Fn&& fn) {
    const auto a = static_cast<std::size_t>(plan.axis);
    const std::size_t n = plan.line_length();
    const std::size_t inner = plan.inner_count();
    const std::size_t outer = plan.line_count() / inner;
    const std::size_t tile = std::max<std::size_t>(plan.tile, 1);
    const Extents& e = field.extents();
    const Index3& off = field.offsets();
    const Index3& st = field.strides();
    const std::size_t axis_stride = st[a];

    for (std::size_t o = 0; o < outer; ++o) {
        // outer index -> coordinates of the axes above `a`
        std::size_t outer_base = 0;
        {
            std::size_t rem = o;
            for (std::size_t b = a + 1; b < kMaxDims; ++b) {
                outer_base += (off[b] + rem % e[b]) * st[b];
                rem /= e[b];
            }
        }
        for (std::size_t p0 = 0; p0 < inner; p0 += tile) {
            const std::size_t p1 = std::min(inner, p0 + tile);
            for (std::size_t t0 = 0; t0 < n; t0 += tile) {
                const std::size_t t1 = std::min(n, t0 + tile);
                for (std::size_t p = p0; p < p1; ++p) {
                    std::size_t base = outer_base + off[a] * axis_stride;
                    std::size_t rem = p;
                    for (std::size_t b = 0; b < a; ++b) {
                        base += (off[b] + rem % e[b]) * st[b];
                        rem /= e[b];
                    }
                    const std::size_t line = p + inner * o;
                    for (std::size_t t = t0; t < t1; ++t) fn(line * n + t, base + t * axis_stride);
                }
            }
        }
    }
}

}  // namespace detail

/// Copies every line along plan.axis of `field` into `buffer`.
template <class FV, class V>
    requires std::is_same_v<std::remove_const_t<FV>, V>
void gather_lines(const ReorderPlan& plan, const Field<FV>& field, std::span<V> buffer) {
    detail::check_reorder(plan, field.extents(), buffer.size());
    const auto parent = field.parent();
    detail::for_each_reorder_pair(plan, field, [&](std::size_t b, std::size_t f) { buffer[b] = parent[f]; });
}

/// Inverse of gather_lines.
template <class BV, class V>
    requires std::is_same_v<std::remove_const_t<BV>, V>
void scatter_lines(const ReorderPlan& plan, std::span<BV> buffer, const Field<V>& field) {
    detail::check_reorder(plan, field.extents(), buffer.size());
    const auto parent = field.parent();
    detail::for_each_reorder_pair(plan, field, [&](std::size_t b, std::size_t f) { parent[f] = buffer[b]; });
}

}  // namespace fastpoisson
