#include "fibra/finset.hpp"

#include <algorithm>

#include "fibra/error.hpp"

namespace fibra {

Label tuple_label(std::span<const Label> parts) {
  Label out = "(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += ',';
    out += parts[i];
  }
  out += ')';
  return out;
}

Label pair_label(const Label& a, const Label& b) {
  const Label parts[] = {a, b};
  return tuple_label(parts);
}

FinSet::FinSet(std::vector<Label> labels) : labels_(std::move(labels)) {
  std::sort(labels_.begin(), labels_.end());
  const auto dup = std::adjacent_find(labels_.begin(), labels_.end());
  if (dup != labels_.end()) {
    fail(ErrorCode::LabelMismatch, "duplicate label '" + *dup + "'");
  }
  if (labels_.size() > kMaxLabels) {
    fail(ErrorCode::CapacityExceeded,
         "finite sets are limited to 64 labels, got " +
             std::to_string(labels_.size()));
  }
}

std::optional<std::size_t> FinSet::find(const Label& label) const {
  const auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
  if (it == labels_.end() || *it != label) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

std::size_t FinSet::index_of(const Label& label) const {
  if (const auto i = find(label)) return *i;
  fail(ErrorCode::LabelMismatch, "label '" + label + "' is not a member");
}

Mask FinSet::mask_of(std::span<const Label> labels) const {
  Mask m = 0;
  for (const auto& l : labels) m |= bit(index_of(l));
  return m;
}

std::vector<Label> FinSet::labels_of(Mask m) const {
  std::vector<Label> out;
  for_each_bit(m, [&](std::size_t i) { out.push_back(labels_.at(i)); });
  return out;
}

Mask FinSet::transfer(Mask m, const FinSet& other) const {
  Mask out = 0;
  for_each_bit(m, [&](std::size_t i) { out |= bit(other.index_of(labels_[i])); });
  return out;
}

ProductSet product_set(const FinSet& a, const FinSet& b) {
  std::vector<Label> labels;
  labels.reserve(a.size() * b.size());
  for (const auto& x : a)
    for (const auto& y : b) labels.push_back(pair_label(x, y));
  ProductSet out{FinSet(std::move(labels)), {}};
  out.index.assign(a.size(), std::vector<std::size_t>(b.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      out.index[i][j] = out.set.index_of(pair_label(a[i], b[j]));
  return out;
}

}  // namespace fibra
