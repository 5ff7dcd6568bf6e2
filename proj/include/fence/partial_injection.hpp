#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fence {

/// Largest supported fence. (n+1)^n must fit in 64 bits.
inline constexpr int kMaxPoints = 15;

class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Number of points of an odd fence 1 < 2 > 3 < ... > n.
class FenceSize {
 public:
  explicit FenceSize(int n);

  int value() const noexcept { return n_; }
  operator int() const noexcept { return n_; }  // NOLINT(google-explicit-constructor)

  friend bool operator==(FenceSize, FenceSize) = default;

 private:
  int n_;
};

/// Set of points of {1..15}, bit x-1 stands for point x.
class PointSet {
 public:
  constexpr PointSet() = default;
  constexpr explicit PointSet(std::uint16_t bits) : bits_(bits) {}
  PointSet(std::initializer_list<int> points);

  static PointSet all(int n) { return PointSet(static_cast<std::uint16_t>((1u << n) - 1)); }
  static PointSet interval(int lo, int hi);

  bool contains(int x) const noexcept { return x >= 1 && x <= kMaxPoints && ((bits_ >> (x - 1)) & 1u); }
  void insert(int x) noexcept { bits_ |= static_cast<std::uint16_t>(1u << (x - 1)); }
  void erase(int x) noexcept { bits_ &= static_cast<std::uint16_t>(~(1u << (x - 1))); }
  int size() const noexcept;
  bool empty() const noexcept { return bits_ == 0; }
  /// Consecutive integers (the empty set counts).
  bool is_convex() const noexcept;
  std::vector<int> points() const;
  std::uint16_t bits() const noexcept { return bits_; }

  PointSet operator|(PointSet o) const noexcept { return PointSet(bits_ | o.bits_); }
  PointSet operator&(PointSet o) const noexcept { return PointSet(bits_ & o.bits_); }
  PointSet minus(PointSet o) const noexcept { return PointSet(bits_ & ~o.bits_); }
  bool subset_of(PointSet o) const noexcept { return (bits_ & ~o.bits_) == 0; }

  friend bool operator==(PointSet, PointSet) = default;

 private:
  std::uint16_t bits_ = 0;
};

using Code = std::uint64_t;

/// x < y in the fence: x odd, y even, |x - y| = 1.
bool fence_less(FenceSize n, int x, int y);
/// x and y comparable: x in {y-1, y, y+1}.
bool comparable(FenceSize n, int x, int y);

/// Partial injective self-map of {1..n}; points are 1-indexed, 0 marks "undefined".
/// Composition reads left to right: x(fg) = (xf)g.
class PartialInjection {
 public:
  /// The empty transformation on n points.
  explicit PartialInjection(FenceSize n) : n_(static_cast<std::uint8_t>(n.value())) {}

  /// `images[k-1]` is the image of k, or 0 when k is outside the domain.
  static PartialInjection from_images(FenceSize n, std::span<const int> images);
  static PartialInjection from_images(FenceSize n, std::initializer_list<int> images) {
    return from_images(n, std::span<const int>(images.begin(), images.size()));
  }

  FenceSize size() const { return FenceSize(n_); }
  int n() const noexcept { return n_; }

  /// Image of x, 0 if x is not in the domain.
  int operator()(int x) const noexcept { return images_[static_cast<std::size_t>(x - 1)]; }
  bool defined(int x) const noexcept { return (*this)(x) != 0; }

  int rank() const noexcept;
  PointSet domain() const noexcept;
  PointSet image() const noexcept;

  friend bool operator==(const PartialInjection&, const PartialInjection&) = default;
  friend auto operator<=>(const PartialInjection&, const PartialInjection&) = default;

 private:
  friend PartialInjection compose(const PartialInjection&, const PartialInjection&);
  friend PartialInjection inverse(const PartialInjection&);
  friend PartialInjection decode(FenceSize, Code);
  friend class PartialInjectionBuilder;

  std::uint8_t n_;
  std::array<std::uint8_t, kMaxPoints> images_{};
};

/// Mutable staging area for building maps point by point; `build` validates.
class PartialInjectionBuilder {
 public:
  explicit PartialInjectionBuilder(FenceSize n) : f_(n) {}
  PartialInjectionBuilder& map(int x, int y);
  PartialInjection build() const;

 private:
  PartialInjection f_;
};

PartialInjection compose(const PartialInjection& f, const PartialInjection& g);
PartialInjection inverse(const PartialInjection& f);
PartialInjection identity(FenceSize n);
PartialInjection restrict_identity(FenceSize n, PointSet points);

/// a <= b  <=>  af <= bf for all a, b in dom f.
bool is_partial_automorphism(const PartialInjection& f);
/// First pair (a, b) in the domain for which the order biconditional fails.
std::optional<std::pair<int, int>> find_order_violation(const PartialInjection& f);

Code encode(const PartialInjection& f);
/// Throws FormatError for out-of-range or non-injective codes.
PartialInjection decode(FenceSize n, Code code);

/// Comma separated images, `_` for undefined: "2,_,_,4,5".
PartialInjection parse_map(FenceSize n, std::string_view text);
std::string format_map(const PartialInjection& f);

}  // namespace fence
