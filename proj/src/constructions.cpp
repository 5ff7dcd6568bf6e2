#include "fence/constructions.hpp"

#include <algorithm>
#include <cassert>

namespace fence {

PartialInjection ParityDecomposition::product() const {
  PartialInjection acc = identity(input.size());
  for (const auto& f : left) acc = compose(acc, f.element);
  acc = compose(acc, core);
  for (const auto& f : right) acc = compose(acc, f.element);
  return acc;
}

namespace {

std::size_t parity_points(const PartialInjection& f) { return parity_class(f).points.size(); }

LabeledFactor beta_factor(FenceSize n, int i, bool odd) {
  const std::string label = "beta_" + std::to_string(i) + (odd ? "_odd" : "_even");
  return {label, odd ? beta_odd(n, i) : beta_even(n, i)};
}

}  // namespace

ParityDecomposition parity_reduce(const PartialInjection& delta) {
  if (!is_partial_automorphism(delta)) throw ArgumentError("parity_reduce needs a partial automorphism");
  const FenceSize n = delta.size();
  const LabeledFactor id{"id", identity(n)};

  std::vector<LabeledFactor> left;
  std::vector<LabeledFactor> right_reversed;  // r_1 is applied last
  PartialInjection current = delta;
  for (ParityWitness w = parity_class(current); w.in_par(); w = parity_class(current)) {
    const std::size_t before = w.points.size();
    const int x = w.points.front();
    const int y = current(x);
    PartialInjection next = current;
    if (x % 2 == 1) {
      next = compose(current, beta_factor(n, y, false).element);
      left.push_back(id);
      right_reversed.push_back(beta_factor(n, y, true));
    } else {
      next = compose(beta_factor(n, x, true).element, current);
      left.push_back(beta_factor(n, x, false));
      right_reversed.push_back(id);
    }
    if (parity_points(next) >= before) {
      throw std::logic_error("parity reduction failed to remove a parity-changing point of " + format_map(delta));
    }
    current = next;
  }
  std::reverse(right_reversed.begin(), right_reversed.end());
  return {delta, std::move(left), current, std::move(right_reversed)};
}

ConvexExtension convex_extend(const PartialInjection& delta) {
  if (!is_partial_automorphism(delta)) throw ArgumentError("convex_extend needs a partial automorphism");
  const FenceSize n = delta.size();
  const PointSet dom = delta.domain();
  const PointSet im = delta.image();
  if (!dom.is_convex()) throw ArgumentError("convex_extend needs a convex domain, got " + format_map(delta));
  if (delta.rank() > n - 3) throw ArgumentError("convex_extend needs rank <= n-3, got rank " + std::to_string(delta.rank()));

  // Points 0 and n+1 are never in a domain or image.
  const auto isolated = [](PointSet s, int p) { return !s.contains(p - 1) && !s.contains(p) && !s.contains(p + 1); };
  int w = 0;
  for (int p = 1; p <= n && w == 0; ++p)
    if (isolated(dom, p)) w = p;
  int x = 0;
  for (int p = 1; p <= n && x == 0; ++p)
    if (isolated(im, p)) x = p;
  if (w == 0 || x == 0) throw std::logic_error("no isolated point for " + format_map(delta));

  PartialInjectionBuilder b(n);
  for (int k : dom.points()) b.map(k, delta(k));
  b.map(w, x);
  PointSet keep = PointSet::all(n);
  keep.erase(w);
  ConvexExtension e{delta, w, x, restrict_identity(n, keep), b.build()};
  assert(is_partial_automorphism(e.extended));
  return e;
}

namespace {

nlohmann::ordered_json factors(const std::vector<LabeledFactor>& fs) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& f : fs) arr.push_back({{"label", f.label}, {"map", format_map(f.element)}});
  return arr;
}

}  // namespace

nlohmann::ordered_json to_json(const ParityDecomposition& d) {
  nlohmann::ordered_json j;
  j["input"] = format_map(d.input);
  j["left"] = factors(d.left);
  j["core"] = format_map(d.core);
  j["right"] = factors(d.right);
  j["recomposes"] = d.product() == d.input;
  return j;
}

nlohmann::ordered_json to_json(const ConvexExtension& e) {
  nlohmann::ordered_json j;
  j["input"] = format_map(e.input);
  j["w"] = e.w;
  j["x"] = e.x;
  j["dropper"] = format_map(e.dropper);
  j["extended"] = format_map(e.extended);
  j["recomposes"] = compose(e.dropper, e.extended) == e.input;
  return j;
}

}  // namespace fence
