#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "fence/generators.hpp"

namespace fence {

/// A factor from {id} ∪ {beta_i^odd, beta_i^even : i even}.
struct LabeledFactor {
  std::string label;  // "id", "beta_4_odd", ...
  PartialInjection element;
};

/// input = left[0] ... left[p-1] · core · right[0] ... right[p-1], core has no
/// parity-changing point. Both lists have the same length; unused slots hold id.
struct ParityDecomposition {
  PartialInjection input;
  std::vector<LabeledFactor> left;
  PartialInjection core;
  std::vector<LabeledFactor> right;

  PartialInjection product() const;
};

/// Strips parity-changing points one at a time, smallest first:
///   x odd,  xd even:  d = (d · beta_{xd}^even) · beta_{xd}^odd
///   x even, xd odd:   d = beta_x^even · (beta_x^odd · d)
/// Requires a partial automorphism; throws ArgumentError otherwise.
ParityDecomposition parity_reduce(const PartialInjection& delta);

/// input = dropper · extended, dropper = id on {1..n} \ {w}, extended = input ∪ {w -> x}.
struct ConvexExtension {
  PartialInjection input;
  int w = 0;
  int x = 0;
  PartialInjection dropper;
  PartialInjection extended;
};

/// Needs a partial automorphism with convex domain and rank <= n - 3.
/// Picks the smallest w with w-1, w, w+1 outside the domain, then the smallest
/// x with x-1, x, x+1 outside the image.
ConvexExtension convex_extend(const PartialInjection& delta);

nlohmann::ordered_json to_json(const ParityDecomposition& d);
nlohmann::ordered_json to_json(const ConvexExtension& e);

}  // namespace fence
