#include "fence/code_index.hpp"

#include <algorithm>
#include <bit>

namespace fence {

CodeIndex::CodeIndex(std::size_t expected) {
  const std::size_t cap = std::bit_ceil(std::max<std::size_t>(16, expected * 2));
  keys_.assign(cap, kEmpty);
  values_.assign(cap, 0);
  mask_ = cap - 1;
}

bool CodeIndex::insert(Code code, std::uint32_t value) {
  if ((size_ + 1) * 2 > keys_.size()) grow();
  for (std::size_t slot = mix(code) & mask_;; slot = (slot + 1) & mask_) {
    if (keys_[slot] == code) return false;
    if (keys_[slot] == kEmpty) {
      keys_[slot] = code;
      values_[slot] = value;
      ++size_;
      return true;
    }
  }
}

std::optional<std::uint32_t> CodeIndex::find(Code code) const {
  for (std::size_t slot = mix(code) & mask_;; slot = (slot + 1) & mask_) {
    if (keys_[slot] == code) return values_[slot];
    if (keys_[slot] == kEmpty) return std::nullopt;
  }
}

void CodeIndex::grow() {
  std::vector<Code> old_keys = std::move(keys_);
  std::vector<std::uint32_t> old_values = std::move(values_);
  keys_.assign(old_keys.size() * 2, kEmpty);
  values_.assign(old_keys.size() * 2, 0);
  mask_ = keys_.size() - 1;
  size_ = 0;
  for (std::size_t i = 0; i < old_keys.size(); ++i)
    if (old_keys[i] != kEmpty) insert(old_keys[i], old_values[i]);
}

}  // namespace fence
