#include "fence/generators.hpp"

#include "fence/oracle.hpp"

namespace fence {

namespace {

std::string str(int v) { return std::to_string(v); }

void require(bool ok, const std::string& what) {
  if (!ok) throw ArgumentError(what);
}

}  // namespace

void GeneratorSet::add(std::string label, const PartialInjection& element) {
  require(!label.empty(), "generator label must not be empty");
  require(element.n() == n_.value(), "generator '" + label + "' has the wrong fence size");
  require(find(label) == nullptr, "duplicate generator label '" + label + "'");
  require(is_partial_automorphism(element), "generator '" + label + "' is not a partial automorphism");
  by_label_.emplace(label, entries_.size());
  entries_.push_back({std::move(label), element});
}

const Generator* GeneratorSet::find(std::string_view label) const {
  const auto it = by_label_.find(std::string(label));
  return it == by_label_.end() ? nullptr : &entries_[it->second];
}

const PartialInjection& GeneratorSet::at(std::string_view label) const {
  const Generator* g = find(label);
  if (g == nullptr) throw ArgumentError("unknown generator label '" + std::string(label) + "'");
  return g->element;
}

GeneratorSet GeneratorSet::without(std::string_view label) const {
  GeneratorSet out(n_);
  for (const Generator& g : entries_)
    if (g.label != label) out.add(g.label, g.element);
  return out;
}

PartialInjection gamma(FenceSize n) {
  PartialInjectionBuilder b(n);
  for (int x = 1; x <= n; ++x) b.map(x, n - x + 1);
  return b.build();
}

PartialInjection alpha_even(FenceSize n, int i) {
  require(i % 2 == 0 && i >= 2 && i <= n - 1, "alpha_even needs even i in 2..n-1, got i=" + str(i));
  PartialInjectionBuilder b(n);
  for (int k = 1; k < i; ++k) b.map(k, k);
  for (int k = i + 1; k <= n; ++k) b.map(k, n + i + 1 - k);
  return b.build();
}

PartialInjection alpha_odd(FenceSize n, int i) {
  require(i % 2 == 1 && i >= 1 && i <= n, "alpha_odd needs odd i in 1..n, got i=" + str(i));
  PointSet s = PointSet::all(n);
  s.erase(i);
  return restrict_identity(n, s);
}

PartialInjection alpha(FenceSize n, int i) { return i % 2 == 0 ? alpha_even(n, i) : alpha_odd(n, i); }

PartialInjection alpha_pair(FenceSize n, int i, int j) {
  require(n >= 5, "alpha_pair needs n >= 5");
  const std::string shape = "(" + str(i) + "," + str(j) + ")";
  require(i >= 1 && i < j && j <= n, "alpha_pair needs 1 <= i < j <= n, got " + shape);
  require((i - j) % 2 == 0, "alpha_pair needs i and j of the same parity, got " + shape);
  if (i == 1 || j == n) {
    // alpha_{1,j}, alpha_{j,n} for odd j in 3..n-2, and alpha_{1,n}.
    require(i % 2 == 1, "boundary alpha_pair needs odd indices, got " + shape);
  }
  PartialInjectionBuilder b(n);
  for (int k = 1; k < i; ++k) b.map(k, k);
  for (int k = i + 1; k < j; ++k) b.map(k, i + j - k);
  for (int k = j + 1; k <= n; ++k) b.map(k, k);
  return b.build();
}

PartialInjection beta_odd(FenceSize n, int i) {
  require(i % 2 == 0 && i >= 2 && i <= n - 1, "beta_odd needs even i in 2..n-1, got i=" + str(i));
  PartialInjectionBuilder b(n);
  if (i == 2) {
    // 1 -> 2, 2 and 3 dropped, 4..n fixed
    b.map(1, 2);
    for (int k = 4; k <= n; ++k) b.map(k, k);
  } else if (i == n - 1) {
    // 1 -> n-1, 2 dropped, 3..n-1 -> 1..n-3, n dropped
    b.map(1, n - 1);
    for (int k = 3; k <= n - 1; ++k) b.map(k, k - 2);
  } else {
    b.map(1, i);
    for (int k = 3; k <= i; ++k) b.map(k, k - 2);
    for (int k = i + 2; k <= n; ++k) b.map(k, k);
  }
  return b.build();
}

PartialInjection beta_even(FenceSize n, int i) {
  require(i % 2 == 0 && i >= 2 && i <= n - 1, "beta_even needs even i in 2..n-1, got i=" + str(i));
  PartialInjectionBuilder b(n);
  if (i == 2) {
    // 1 dropped, 2 -> 1, 3 dropped, 4..n fixed
    b.map(2, 1);
    for (int k = 4; k <= n; ++k) b.map(k, k);
  } else if (i == n - 1) {
    // 1..n-3 -> 3..n-1, n-2 dropped, n-1 -> 1, n dropped
    for (int k = 1; k <= n - 3; ++k) b.map(k, k + 2);
    b.map(n - 1, 1);
  } else {
    for (int k = 1; k <= i - 2; ++k) b.map(k, k + 2);
    b.map(i, 1);
    for (int k = i + 2; k <= n; ++k) b.map(k, k);
  }
  return b.build();
}

GeneratorSet build_G(FenceSize n) {
  require(n >= 3, "build_G needs n >= 3");
  GeneratorSet g(n);
  g.add("gamma", gamma(n));
  if (n == 3) {
    g.add("alpha_1", alpha(n, 1));
    g.add("alpha_2", alpha(n, 2));
    g.add("beta_2_odd", beta_odd(n, 2));
    g.add("beta_2_even", beta_even(n, 2));
    return g;
  }
  const int half = (n + 1) / 2;
  for (int i = 1; i <= half; i += 2) g.add("alpha_" + str(i), alpha(n, i));
  for (int i = 2; i <= n - 3; i += 2) g.add("alpha_" + str(i), alpha(n, i));
  for (int i = 2; i <= half; i += 2) {
    g.add("beta_" + str(i) + "_odd", beta_odd(n, i));
    g.add("beta_" + str(i) + "_even", beta_even(n, i));
  }
  for (int i = 1; i <= n; i += 2) {
    for (int j = i + 4; j <= n; j += 2) {
      if (j - i < n - 1 && i <= n - j + 1) g.add("alpha_" + str(i) + "_" + str(j), alpha_pair(n, i, j));
    }
  }
  return g;
}

GeneratorSet build_J(const ElementUniverse& universe) {
  const FenceSize n = universe.n();
  GeneratorSet j(n);
  for (Code c : universe.codes()) {
    const PartialInjection f = decode(n, c);
    if (f.rank() >= n - 2) j.add(std::to_string(c), f);
  }
  return j;
}

ParityWitness parity_class(const PartialInjection& f) {
  ParityWitness w{f, {}};
  for (int x = 1; x <= f.n(); ++x)
    if (f.defined(x) && (x - f(x)) % 2 != 0) w.points.push_back(x);
  return w;
}

}  // namespace fence
