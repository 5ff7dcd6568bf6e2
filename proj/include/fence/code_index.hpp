#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fence/partial_injection.hpp"

namespace fence {

/// Open-addressing map from canonical code to a dense 32-bit index.
/// Linear probing, power-of-two capacity, grows by doubling at 50% load.
class CodeIndex {
 public:
  explicit CodeIndex(std::size_t expected = 0);

  /// Inserts if absent; returns true when inserted.
  bool insert(Code code, std::uint32_t value);
  std::optional<std::uint32_t> find(Code code) const;
  bool contains(Code code) const { return find(code).has_value(); }
  std::size_t size() const { return size_; }

 private:
  // Codes never reach 2^64 - 1 ((n+1)^n <= 16^15).
  static constexpr Code kEmpty = ~Code{0};

  static std::uint64_t mix(Code c) {
    c ^= c >> 33;
    c *= 0xff51afd7ed558ccdULL;
    c ^= c >> 33;
    c *= 0xc4ceb9fe1a85ec53ULL;
    c ^= c >> 33;
    return c;
  }
  void grow();

  std::vector<Code> keys_;
  std::vector<std::uint32_t> values_;
  std::size_t mask_ = 0;
  std::size_t size_ = 0;
};

}  // namespace fence
