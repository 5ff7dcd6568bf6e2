#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fence/partial_injection.hpp"

namespace fence {

/// Largest n for which exhaustive enumeration is offered.
inline constexpr int kMaxExhaustive = 9;

enum class Provenance { Exhaustive, ClosureDerived };

std::string to_string(Provenance p);
Provenance provenance_from_string(std::string_view s);

/// Every element of FI_n as sorted canonical codes.
class ElementUniverse {
 public:
  /// Sorts and deduplicates `codes`; every code must decode for `n`.
  ElementUniverse(FenceSize n, std::vector<Code> codes, Provenance provenance);

  FenceSize n() const { return n_; }
  const std::vector<Code>& codes() const { return codes_; }
  std::size_t size() const { return codes_.size(); }
  bool contains(Code c) const;
  Provenance provenance() const { return provenance_; }
  /// Entry r counts elements of rank r, r = 0..n.
  const std::vector<std::size_t>& rank_histogram() const { return histogram_; }
  /// Codes of the elements of the given rank, ascending.
  std::vector<Code> layer(int rank) const;

 private:
  FenceSize n_;
  std::vector<Code> codes_;
  std::vector<std::size_t> histogram_;
  Provenance provenance_;
};

/// Depth-first search over images of 1, 2, ..., n. A point is either left
/// undefined or sent to an unused image consistent with the fence order on all
/// points assigned so far; inconsistent prefixes are cut. Yields exactly the
/// partial automorphisms, each once, in lexicographic order of image vectors
/// (undefined first).
class CandidateSearch {
 public:
  explicit CandidateSearch(FenceSize n);
  /// Only the subtree where point 1 has the given image (0 = undefined).
  CandidateSearch(FenceSize n, int first_image);

  std::optional<PartialInjection> next();

 private:
  bool advance();
  bool consistent(int point, int image) const;

  FenceSize n_;
  std::optional<int> first_;
  std::array<int, kMaxPoints + 1> choice_{};
  int depth_ = 1;
  std::uint16_t used_ = 0;
};

/// FI_n by pruned search, split across `workers` threads (0 = all cores).
/// Throws CapacityError for n > kMaxExhaustive.
ElementUniverse enumerate_FI(FenceSize n, unsigned workers = 0);

/// FI_n by filtering every partial injection through is_partial_automorphism.
ElementUniverse enumerate_FI_filtered(FenceSize n);

/// Calls fn on every partial injection of {1..n}.
void for_each_partial_injection(FenceSize n, const std::function<void(const PartialInjection&)>& fn);

std::vector<std::size_t> count_by_rank(const ElementUniverse& universe);

unsigned resolve_workers(unsigned requested);

// Binary code list: "FNCODES" NUL, u32 version, u32 n, u64 count, then count
// u64 codes ascending. All integers little-endian.
inline constexpr std::uint32_t kCodeListVersion = 1;

void write_code_list(const std::filesystem::path& path, FenceSize n, const std::vector<Code>& sorted_codes);
std::pair<FenceSize, std::vector<Code>> read_code_list(const std::filesystem::path& path);

/// Writes `path` and a JSON sidecar `path` + ".json" with n, count, mode and
/// rank_histogram.
void save_universe(const ElementUniverse& universe, const std::filesystem::path& path);
ElementUniverse load_universe(const std::filesystem::path& path);

}  // namespace fence
