#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fibra {

using Label = std::string;

/// Subset of a FinSet, bit i standing for the i-th label in sorted order.
using Mask = std::uint64_t;

inline constexpr std::size_t kMaxLabels = 64;

constexpr Mask bit(std::size_t i) noexcept { return Mask{1} << i; }

constexpr Mask full_mask(std::size_t n) noexcept {
  return n >= 64 ? ~Mask{0} : bit(n) - 1;
}

constexpr bool is_subset(Mask a, Mask b) noexcept { return (a & ~b) == 0; }

constexpr bool contains(Mask m, std::size_t i) noexcept {
  return (m >> i) & 1u;
}

inline int popcount(Mask m) noexcept { return std::popcount(m); }

/// Calls `fn(i)` for every set bit of `m`, lowest first.
template <typename Fn>
void for_each_bit(Mask m, Fn&& fn) {
  while (m != 0) {
    const auto i = static_cast<std::size_t>(std::countr_zero(m));
    fn(i);
    m &= m - 1;
  }
}

/// Label of a tuple such as a product base point or a total-space point.
Label tuple_label(std::span<const Label> parts);
Label pair_label(const Label& a, const Label& b);

/// A finite set of distinct labels, kept in lexicographic order so that
/// indices (and therefore masks) are canonical.
class FinSet {
 public:
  FinSet() = default;
  /// Sorts; throws LabelMismatch on duplicates and CapacityExceeded past 64.
  explicit FinSet(std::vector<Label> labels);
  FinSet(std::initializer_list<Label> labels)
      : FinSet(std::vector<Label>(labels)) {}

  std::size_t size() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }
  const Label& operator[](std::size_t i) const { return labels_[i]; }
  const std::vector<Label>& labels() const noexcept { return labels_; }
  auto begin() const noexcept { return labels_.begin(); }
  auto end() const noexcept { return labels_.end(); }

  std::optional<std::size_t> find(const Label& label) const;
  bool has(const Label& label) const { return find(label).has_value(); }
  /// Index of `label`; throws LabelMismatch when absent.
  std::size_t index_of(const Label& label) const;

  Mask all() const noexcept { return full_mask(size()); }
  Mask mask_of(std::span<const Label> labels) const;
  Mask mask_of(std::initializer_list<Label> labels) const {
    return mask_of(std::span<const Label>(labels.begin(), labels.size()));
  }
  std::vector<Label> labels_of(Mask m) const;
  /// Reindexes a subset of this set into `other`; labels absent there throw.
  Mask transfer(Mask m, const FinSet& other) const;

  friend bool operator==(const FinSet&, const FinSet&) = default;

 private:
  std::vector<Label> labels_;
};

/// Cartesian product; the labels are `tuple_label`s and the returned index
/// table maps (i, j) to the product index.
struct ProductSet {
  FinSet set;
  std::vector<std::vector<std::size_t>> index;  // index[i][j]
};
ProductSet product_set(const FinSet& a, const FinSet& b);

}  // namespace fibra
