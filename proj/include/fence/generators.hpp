#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "fence/partial_injection.hpp"

namespace fence {

class ElementUniverse;

struct Generator {
  std::string label;
  PartialInjection element;
};

/// Labeled partial automorphisms of one fence. Labels are unique.
class GeneratorSet {
 public:
  explicit GeneratorSet(FenceSize n) : n_(n) {}

  /// Throws ArgumentError on duplicate labels, size mismatch or a map that is
  /// not a partial automorphism.
  void add(std::string label, const PartialInjection& element);

  FenceSize n() const { return n_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<Generator>& entries() const { return entries_; }
  const Generator* find(std::string_view label) const;
  /// Throws ArgumentError for unknown labels.
  const PartialInjection& at(std::string_view label) const;
  /// Copy without the named entry.
  GeneratorSet without(std::string_view label) const;

 private:
  FenceSize n_;
  std::vector<Generator> entries_;
  std::unordered_map<std::string, std::size_t> by_label_;
};

/// Reflection x -> n - x + 1.
PartialInjection gamma(FenceSize n);
/// Even i in 2..n-1: fixes 1..i-1, drops i, reverses i+1..n.
PartialInjection alpha_even(FenceSize n, int i);
/// Odd i in 1..n: the partial identity on {1..n} \ {i}.
PartialInjection alpha_odd(FenceSize n, int i);
/// Dispatches on the parity of i.
PartialInjection alpha(FenceSize n, int i);
/// n >= 5, i < j of equal parity. Fixes points outside [i, j], drops i and j,
/// reverses i+1..j-1. Boundary shapes (i = 1 or j = n) require odd i, j.
PartialInjection alpha_pair(FenceSize n, int i, int j);
/// Even i in 2..n-1.
PartialInjection beta_odd(FenceSize n, int i);
PartialInjection beta_even(FenceSize n, int i);

/// The minimal generating set; n odd and at least 3.
GeneratorSet build_G(FenceSize n);
/// Every element of rank >= n-2, labeled by its decimal code.
GeneratorSet build_J(const ElementUniverse& universe);

struct ParityWitness {
  PartialInjection element;
  /// Domain points x with x and xf of different parity, ascending.
  std::vector<int> points;

  bool in_par() const { return !points.empty(); }
};

ParityWitness parity_class(const PartialInjection& f);
inline bool in_par(const PartialInjection& f) { return parity_class(f).in_par(); }

}  // namespace fence
