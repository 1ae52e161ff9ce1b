#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "fastpoisson/errors.hpp"

namespace fastpoisson {

// Axis ordering: axis 0 (x) is the contiguous one. A dense field of extents
// (nx, ny, nz) stores element (i, j, k) at i + nx * (j + ny * k).

inline constexpr std::size_t kMaxDims = 3;
using Index3 = std::array<std::size_t, kMaxDims>;

enum class BoundaryCondition { Periodic, Dirichlet, Neumann };
enum class GridKind { Regular, Staggered };
enum class Approximation { PseudoSpectral, FiniteDifference2 };

std::string_view to_string(BoundaryCondition bc);
std::string_view to_string(GridKind kind);
std::string_view to_string(Approximation approx);

// Parsers accept the lower-case CLI spellings ("periodic", "staggered",
// "spectral", "fd2"); they return nullopt on anything else.
std::optional<BoundaryCondition> parse_boundary_condition(std::string_view text);
std::optional<GridKind> parse_grid_kind(std::string_view text);
std::optional<Approximation> parse_approximation(std::string_view text);

/// One axis of a uniform grid. Both opposing faces share `bc`.
struct GridSpec {
    std::size_t n = 1;
    double length = 1.0;
    BoundaryCondition bc = BoundaryCondition::Periodic;
    GridKind kind = GridKind::Regular;

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Throws ConfigError unless n, length and the (bc, kind) pair are usable.
void validate(const GridSpec& spec);

/// Grid spacing:
///   periodic            L / n
///   Dirichlet regular   L / (n + 1)
///   Neumann regular     L / (n - 1)   (n >= 2)
///   staggered           L / n
double grid_dx(const GridSpec& spec);

/// Coordinates of the n unknowns of the axis, strictly increasing in [0, L].
std::vector<double> grid_points(const GridSpec& spec);

/// Per-axis extents of a 1-3 dimensional array. Unused axes have extent 1.
struct Extents {
    int dims = 1;
    Index3 n{1, 1, 1};

    Extents() = default;
    Extents(std::initializer_list<std::size_t> counts);
    static Extents of(int dims, const Index3& counts);

    std::size_t operator[](std::size_t axis) const { return n[axis]; }
    std::size_t size() const { return n[0] * n[1] * n[2]; }

    friend bool operator==(const Extents&, const Extents&) = default;
};

std::string to_string(const Extents& extents);

/// Natural (x-contiguous) strides for a dense array with the given extents.
Index3 natural_strides(const Extents& extents);

/// Non-owning d-dimensional view into a parent allocation.
///
/// Element (i, j, k) lives at parent[sum_a (offset_a + i_a) * stride_a]. With
/// zero offsets and natural strides the view covers its whole parent; with a
/// nonzero offset it addresses the interior block of an array carrying ghost
/// cells. `V` may be const-qualified for read-only views.
template <class V>
class Field {
public:
    using value_type = std::remove_const_t<V>;

    Field() = default;

    /// Whole dense parent, natural strides.
    Field(std::span<V> parent, const Extents& extents)
        : Field(parent, extents, Index3{0, 0, 0}, natural_strides(extents)) {}

    Field(std::span<V> parent, const Extents& extents, const Index3& offsets,
          const Index3& strides)
        : parent_(parent), extents_(extents), offsets_(offsets), strides_(strides) {
        check_bounds();
    }

    /// Sub-block of `extents` starting at `offsets` in a dense parent of
    /// shape `parent_extents`.
    static Field subblock(std::span<V> parent, const Extents& parent_extents,
                          const Index3& offsets, const Extents& extents) {
        if (parent_extents.dims != extents.dims)
            throw ExtentError("subblock: dimension mismatch");
        for (std::size_t a = 0; a < kMaxDims; ++a) {
            if (offsets[a] + extents[a] > parent_extents[a])
                throw ExtentError("subblock " + to_string(extents) +
                                  " does not fit in parent " +
                                  to_string(parent_extents));
        }
        if (parent.size() < parent_extents.size())
            throw ExtentError("subblock: parent span smaller than its extents");
        return Field(parent, extents, offsets, natural_strides(parent_extents));
    }

    template <class U>
        requires std::is_same_v<const U, V> && (!std::is_same_v<U, V>)
    Field(const Field<U>& other)  // NOLINT: implicit to const view
        : parent_(other.parent()), extents_(other.extents()),
          offsets_(other.offsets()), strides_(other.strides()) {}

    const Extents& extents() const { return extents_; }
    const Index3& offsets() const { return offsets_; }
    const Index3& strides() const { return strides_; }
    std::span<V> parent() const { return parent_; }
    int dims() const { return extents_.dims; }

    std::size_t address(std::size_t i, std::size_t j = 0, std::size_t k = 0) const {
        return (offsets_[0] + i) * strides_[0] + (offsets_[1] + j) * strides_[1] +
               (offsets_[2] + k) * strides_[2];
    }

    V& operator()(std::size_t i, std::size_t j = 0, std::size_t k = 0) const {
        return parent_[address(i, j, k)];
    }

    /// True when the view is exactly a dense x-contiguous array.
    bool is_contiguous() const {
        return offsets_ == Index3{0, 0, 0} && strides_ == natural_strides(extents_);
    }

private:
    void check_bounds() const {
        if (extents_.dims < 1 || extents_.dims > static_cast<int>(kMaxDims))
            throw ExtentError("field dimension must be 1..3");
        for (std::size_t a = 0; a < kMaxDims; ++a) {
            if (extents_[a] == 0) throw ExtentError("field extent must be positive");
            if (static_cast<int>(a) >= extents_.dims && extents_[a] != 1)
                throw ExtentError("unused axes must have extent 1");
        }
        const std::size_t last = address(extents_[0] - 1, extents_[1] - 1, extents_[2] - 1);
        if (last >= parent_.size())
            throw ExtentError("field addresses index " + std::to_string(last) +
                              " beyond parent of size " + std::to_string(parent_.size()));
    }

    std::span<V> parent_;
    Extents extents_;
    Index3 offsets_{0, 0, 0};
    Index3 strides_{1, 1, 1};
};

/// Owning dense x-contiguous array.
template <class V>
class FieldBuffer {
public:
    FieldBuffer() = default;
    explicit FieldBuffer(const Extents& extents, V fill = V{})
        : extents_(extents), data_(extents.size(), fill) {}

    const Extents& extents() const { return extents_; }
    std::size_t size() const { return data_.size(); }

    std::span<V> data() { return data_; }
    std::span<const V> data() const { return data_; }

    Field<V> view() { return Field<V>(std::span<V>(data_), extents_); }
    Field<const V> view() const { return Field<const V>(std::span<const V>(data_), extents_); }

    V& operator()(std::size_t i, std::size_t j = 0, std::size_t k = 0) {
        return data_[i + extents_[0] * (j + extents_[1] * k)];
    }
    const V& operator()(std::size_t i, std::size_t j = 0, std::size_t k = 0) const {
        return data_[i + extents_[0] * (j + extents_[1] * k)];
    }

private:
    Extents extents_;
    std::vector<V> data_;
};

/// Calls fn(i, j, k) for every index of `extents`, x fastest.
template <class Fn>
void for_each_index(const Extents& extents, Fn&& fn) {
    for (std::size_t k = 0; k < extents[2]; ++k)
        for (std::size_t j = 0; j < extents[1]; ++j)
            for (std::size_t i = 0; i < extents[0]; ++i) fn(i, j, k);
}

}  // namespace fastpoisson
