#include "fastpoisson/reorder.hpp"

#include <string>

namespace fastpoisson {

ReorderPlan::ReorderPlan(const Extents& field_extents, int target_axis, std::size_t tile_size)
    : extents(field_extents), axis(target_axis), tile(tile_size) {
    if (target_axis < 0 || target_axis >= field_extents.dims)
        throw ExtentError("reorder axis " + std::to_string(target_axis) +
                          " outside a " + std::to_string(field_extents.dims) + "D field");
    if (tile_size == 0) throw ExtentError("reorder tile size must be positive");
}

std::size_t ReorderPlan::inner_count() const {
    std::size_t count = 1;
    for (int b = 0; b < axis; ++b) count *= extents[static_cast<std::size_t>(b)];
    return count;
}

namespace detail {

void check_reorder(const ReorderPlan& plan, const Extents& field_extents, std::size_t buffer_size) {
    if (!(field_extents == plan.extents))
        throw ExtentError("reorder: field " + to_string(field_extents) + " does not match plan " +
                          to_string(plan.extents));
    if (buffer_size != plan.buffer_size())
        throw ExtentError("reorder: buffer holds " + std::to_string(buffer_size) +
                          " values, plan needs " + std::to_string(plan.buffer_size()));
}

}  // namespace detail

}  // namespace fastpoisson
