#include "fence/partial_injection.hpp"

#include <bit>
#include <charconv>
#include <sstream>

namespace fence {

FenceSize::FenceSize(int n) : n_(n) {
  if (n < 1 || n > kMaxPoints) {
    throw ArgumentError("fence size must be in 1.." + std::to_string(kMaxPoints) + ", got " + std::to_string(n));
  }
  if (n % 2 == 0) {
    throw ArgumentError("n must be odd, got " + std::to_string(n));
  }
}

PointSet::PointSet(std::initializer_list<int> points) {
  for (int x : points) {
    if (x < 1 || x > kMaxPoints) throw ArgumentError("point out of range: " + std::to_string(x));
    insert(x);
  }
}

PointSet PointSet::interval(int lo, int hi) {
  PointSet s;
  for (int x = std::max(lo, 1); x <= std::min(hi, kMaxPoints); ++x) s.insert(x);
  return s;
}

int PointSet::size() const noexcept { return std::popcount(bits_); }

bool PointSet::is_convex() const noexcept {
  if (bits_ == 0) return true;
  const unsigned shifted = static_cast<unsigned>(bits_) >> std::countr_zero(static_cast<unsigned>(bits_));
  return (shifted & (shifted + 1)) == 0;
}

std::vector<int> PointSet::points() const {
  std::vector<int> out;
  for (int x = 1; x <= kMaxPoints; ++x)
    if (contains(x)) out.push_back(x);
  return out;
}

namespace {

void check_point(FenceSize n, int x) {
  if (x < 1 || x > n.value()) {
    throw ArgumentError("point " + std::to_string(x) + " outside 1.." + std::to_string(n.value()));
  }
}

// Unchecked order relation on points of the same fence.
inline bool leq(int x, int y) noexcept { return x == y || ((x & 1) && !(y & 1) && (x - y == 1 || y - x == 1)); }

}  // namespace

bool fence_less(FenceSize n, int x, int y) {
  check_point(n, x);
  check_point(n, y);
  return x != y && leq(x, y);
}

bool comparable(FenceSize n, int x, int y) {
  check_point(n, x);
  check_point(n, y);
  return x - y <= 1 && y - x <= 1;
}

PartialInjection PartialInjection::from_images(FenceSize n, std::span<const int> images) {
  if (static_cast<int>(images.size()) != n.value()) {
    throw ArgumentError("expected " + std::to_string(n.value()) + " images, got " + std::to_string(images.size()));
  }
  PartialInjectionBuilder b(n);
  for (int k = 1; k <= n.value(); ++k) {
    const int y = images[static_cast<std::size_t>(k - 1)];
    if (y != 0) b.map(k, y);
  }
  return b.build();
}

PartialInjectionBuilder& PartialInjectionBuilder::map(int x, int y) {
  check_point(f_.size(), x);
  check_point(f_.size(), y);
  if (f_.defined(x)) throw ArgumentError("point " + std::to_string(x) + " mapped twice");
  if (f_.image().contains(y)) throw ArgumentError("image " + std::to_string(y) + " used twice");
  f_.images_[static_cast<std::size_t>(x - 1)] = static_cast<std::uint8_t>(y);
  return *this;
}

PartialInjection PartialInjectionBuilder::build() const { return f_; }

int PartialInjection::rank() const noexcept {
  int r = 0;
  for (int k = 0; k < n_; ++k) r += images_[static_cast<std::size_t>(k)] != 0;
  return r;
}

PointSet PartialInjection::domain() const noexcept {
  PointSet s;
  for (int k = 1; k <= n_; ++k)
    if (defined(k)) s.insert(k);
  return s;
}

PointSet PartialInjection::image() const noexcept {
  PointSet s;
  for (int k = 1; k <= n_; ++k)
    if (defined(k)) s.insert((*this)(k));
  return s;
}

PartialInjection compose(const PartialInjection& f, const PartialInjection& g) {
  if (f.n_ != g.n_) {
    throw ArgumentError("cannot compose maps on " + std::to_string(f.n_) + " and " + std::to_string(g.n_) + " points");
  }
  PartialInjection r(f.size());
  for (std::size_t k = 0; k < f.n_; ++k) {
    const std::uint8_t y = f.images_[k];
    r.images_[k] = y ? g.images_[y - 1u] : std::uint8_t{0};
  }
  return r;
}

PartialInjection inverse(const PartialInjection& f) {
  PartialInjection r(f.size());
  for (std::size_t k = 0; k < f.n_; ++k) {
    const std::uint8_t y = f.images_[k];
    if (y) r.images_[y - 1u] = static_cast<std::uint8_t>(k + 1);
  }
  return r;
}

PartialInjection identity(FenceSize n) { return restrict_identity(n, PointSet::all(n)); }

PartialInjection restrict_identity(FenceSize n, PointSet points) {
  if (!points.subset_of(PointSet::all(n))) throw ArgumentError("point set exceeds 1..n");
  PartialInjectionBuilder b(n);
  for (int x : points.points()) b.map(x, x);
  return b.build();
}

std::optional<std::pair<int, int>> find_order_violation(const PartialInjection& f) {
  const int n = f.n();
  for (int a = 1; a <= n; ++a) {
    if (!f.defined(a)) continue;
    for (int b = 1; b <= n; ++b) {
      if (!f.defined(b)) continue;
      if (leq(a, b) != leq(f(a), f(b))) return std::pair{a, b};
    }
  }
  return std::nullopt;
}

bool is_partial_automorphism(const PartialInjection& f) { return !find_order_violation(f).has_value(); }

Code encode(const PartialInjection& f) {
  const Code base = static_cast<Code>(f.n()) + 1;
  Code code = 0;
  for (int k = f.n(); k >= 1; --k) code = code * base + static_cast<Code>(f(k));
  return code;
}

PartialInjection decode(FenceSize n, Code code) {
  const Code base = static_cast<Code>(n.value()) + 1;
  PartialInjection f(n);
  std::uint16_t used = 0;
  Code rest = code;
  for (std::size_t k = 0; k < static_cast<std::size_t>(n.value()); ++k) {
    const auto d = static_cast<std::uint8_t>(rest % base);
    rest /= base;
    if (d) {
      const auto bit = static_cast<std::uint16_t>(1u << (d - 1));
      if (used & bit) throw FormatError("code " + std::to_string(code) + " repeats image " + std::to_string(d));
      used |= bit;
    }
    f.images_[k] = d;
  }
  if (rest != 0) throw FormatError("code " + std::to_string(code) + " out of range for n=" + std::to_string(n.value()));
  return f;
}

PartialInjection parse_map(FenceSize n, std::string_view text) {
  std::vector<int> images;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = text.find(',', pos);
    std::string_view tok = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    if (tok == "_") {
      images.push_back(0);
    } else {
      int v = 0;
      const auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (tok.empty() || ec != std::errc{} || end != tok.data() + tok.size()) {
        throw FormatError("malformed map entry '" + std::string(tok) + "'");
      }
      if (v < 1 || v > n.value()) throw FormatError("map entry " + std::to_string(v) + " outside 1.." + std::to_string(n.value()));
      images.push_back(v);
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (static_cast<int>(images.size()) != n.value()) {
    throw FormatError("map has " + std::to_string(images.size()) + " entries, expected " + std::to_string(n.value()));
  }
  try {
    return PartialInjection::from_images(n, images);
  } catch (const ArgumentError& e) {
    throw FormatError(e.what());
  }
}

std::string format_map(const PartialInjection& f) {
  std::string out;
  for (int k = 1; k <= f.n(); ++k) {
    if (k > 1) out += ',';
    out += f.defined(k) ? std::to_string(f(k)) : std::string("_");
  }
  return out;
}

}  // namespace fence
