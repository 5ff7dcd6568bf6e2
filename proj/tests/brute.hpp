#pragma once

// Slow, independent reference implementations. Nothing here calls into the
// library, so tests can compare the two.

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <vector>

namespace brute {

/// images[k-1] = image of k, 0 = undefined.
using Map = std::vector<int>;

/// x strictly below y in 1 < 2 > 3 < 4 > ...
inline bool below(int x, int y) { return x % 2 == 1 && y % 2 == 0 && (x - y == 1 || y - x == 1); }
inline bool leq(int x, int y) { return x == y || below(x, y); }

inline bool is_aut(const Map& f) {
  const int n = static_cast<int>(f.size());
  for (int a = 1; a <= n; ++a) {
    for (int b = 1; b <= n; ++b) {
      if (f[a - 1] == 0 || f[b - 1] == 0) continue;
      if (leq(a, b) != leq(f[a - 1], f[b - 1])) return false;
    }
  }
  return true;
}

/// Every partial injection of {1..n}, in no particular order.
inline void each_injection(int n, const std::function<void(const Map&)>& fn) {
  Map f(static_cast<std::size_t>(n), 0);
  std::vector<bool> used(static_cast<std::size_t>(n) + 1, false);
  std::function<void(int)> rec = [&](int k) {
    if (k > n) {
      fn(f);
      return;
    }
    f[k - 1] = 0;
    rec(k + 1);
    for (int y = 1; y <= n; ++y) {
      if (used[y]) continue;
      used[y] = true;
      f[k - 1] = y;
      rec(k + 1);
      used[y] = false;
    }
    f[k - 1] = 0;
  };
  rec(1);
}

inline std::uint64_t code(const Map& f) {
  std::uint64_t c = 0;
  std::uint64_t w = 1;
  for (int y : f) {
    c += static_cast<std::uint64_t>(y) * w;
    w *= f.size() + 1;
  }
  return c;
}

inline Map uncode(int n, std::uint64_t c) {
  Map f(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    f[k] = static_cast<int>(c % static_cast<std::uint64_t>(n + 1));
    c /= static_cast<std::uint64_t>(n + 1);
  }
  return f;
}

inline std::set<std::uint64_t> all_automorphisms(int n) {
  std::set<std::uint64_t> out;
  each_injection(n, [&](const Map& f) {
    if (is_aut(f)) out.insert(code(f));
  });
  return out;
}

/// x(fg) = (xf)g
inline Map compose(const Map& f, const Map& g) {
  Map h(f.size(), 0);
  for (std::size_t k = 0; k < f.size(); ++k)
    if (f[k] != 0) h[k] = g[static_cast<std::size_t>(f[k] - 1)];
  return h;
}

inline int rank(const Map& f) {
  int r = 0;
  for (int y : f) r += y != 0;
  return r;
}

/// Naive fixpoint: keep multiplying everything by everything.
inline std::set<std::uint64_t> closure(int n, const std::vector<Map>& gens) {
  std::set<std::uint64_t> seen;
  std::vector<Map> todo;
  for (const Map& g : gens)
    if (seen.insert(code(g)).second) todo.push_back(g);
  while (!todo.empty()) {
    const Map f = todo.back();
    todo.pop_back();
    for (const Map& g : gens) {
      const Map h = compose(f, g);
      if (seen.insert(code(h)).second) todo.push_back(h);
    }
  }
  (void)n;
  return seen;
}

inline std::mt19937 rng(std::uint32_t salt = 0) { return std::mt19937(20240917u + salt); }

template <typename T>
const T& pick(const std::vector<T>& v, std::mt19937& g) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(g)];
}

}  // namespace brute
