#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "fence/code_index.hpp"
#include "fence/generators.hpp"
#include "fence/oracle.hpp"

namespace fence {

/// Thrown when an element is asked for that the closure does not contain.
class NotGeneratedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Middle dot, UTF-8.
inline constexpr std::string_view kWordSeparator = "\xC2\xB7";

/// Generator labels multiplied left to right.
struct Word {
  std::vector<std::string> labels;

  std::size_t size() const { return labels.size(); }
  std::string str() const;
  static Word parse(std::string_view text);

  friend bool operator==(const Word&, const Word&) = default;
};

/// Throws ArgumentError for an empty word or an unknown label.
PartialInjection evaluate(const Word& word, const GeneratorSet& gens);

struct ClosureStats {
  /// Number of new elements whose witness has length 1, 2, ...
  std::vector<std::size_t> level_sizes;
  std::uint64_t products = 0;
  double wall_ms = 0.0;
};

struct ClosureOptions {
  /// 0 = all cores.
  unsigned workers = 0;
  /// Sizing hint for the visited set, e.g. |FI_n| when known.
  std::size_t expected_size = 0;
};

/// Semigroup closure of a generator set with one witness word per member.
class ClosureResult {
 public:
  FenceSize n() const { return gens_.n(); }
  /// Generators in ascending label order.
  const GeneratorSet& generators() const { return gens_; }
  std::size_t size() const { return codes_.size(); }
  bool contains(Code code) const { return index_.contains(code); }
  bool contains(const PartialInjection& f) const { return contains(encode(f)); }

  /// Throws NotGeneratedError when the code is not a member.
  Word witness(Code code) const;
  std::size_t witness_length(Code code) const;

  /// Members ascending.
  std::vector<Code> members() const;
  /// Members in the order they were reached.
  const std::vector<Code>& discovery_order() const { return codes_; }
  const ClosureStats& stats() const { return stats_; }
  std::size_t max_word_length() const { return stats_.level_sizes.size(); }

 private:
  ClosureResult(GeneratorSet gens, std::size_t expected);
  std::uint32_t append(Code code, std::int32_t parent, std::uint32_t gen, std::uint16_t length);
  void finish_stats();

  friend ClosureResult close(const GeneratorSet&, const ClosureOptions&);
  friend ClosureResult close_excluding(const ElementUniverse&, const std::vector<Code>&, const ClosureOptions&);
  friend ClosureResult load_closure(const GeneratorSet&, const std::filesystem::path&);

  GeneratorSet gens_;
  std::vector<Code> codes_;
  std::vector<std::int32_t> parent_;
  std::vector<std::uint32_t> last_gen_;
  std::vector<std::uint16_t> length_;
  CodeIndex index_;
  ClosureStats stats_;
};

/// Products of length >= 1 over `gens`. Breadth-first by word length; every
/// member gets a shortest witness, ties going to the lexicographically least
/// label sequence. Identical output for every worker count.
ClosureResult close(const GeneratorSet& gens, const ClosureOptions& options = {});

/// Closure of universe \ excluded, each remaining element acting as a
/// generator labeled by its decimal code. `excluded` must lie in the universe
/// and the universe must be closed under composition.
ClosureResult close_excluding(const ElementUniverse& universe, const std::vector<Code>& excluded,
                              const ClosureOptions& options = {});

/// Throws NotGeneratedError when target is not in the closure.
Word factorize(const PartialInjection& target, const ClosureResult& closure);

struct GenerationReport {
  bool generates = false;
  std::size_t closure_size = 0;
  std::size_t universe_size = 0;
  /// In the universe but not generated.
  std::vector<Code> missing;
  /// Generated but not in the universe.
  std::vector<Code> extra;
};

GenerationReport verify_generates(const GeneratorSet& gens, const ElementUniverse& universe,
                                  const ClosureOptions& options = {});

ElementUniverse universe_from_closure(const ClosureResult& closure);
/// Exhaustive for n <= kMaxExhaustive, otherwise the closure of build_G(n).
ElementUniverse universe_for(FenceSize n, unsigned workers = 0);

/// One line per member, ascending code: "code<TAB>label·label·...".
void write_witnesses(const ClosureResult& closure, std::ostream& out);

/// Stable directory name from n, the sorted labels and the generator maps.
std::string closure_cache_key(const GeneratorSet& gens);
/// Writes members.bin, witnesses.tsv and stats.json into `dir`.
void save_closure(const ClosureResult& closure, const std::filesystem::path& dir);
/// Rebuilds a closure saved by save_closure, re-checking every witness.
ClosureResult load_closure(const GeneratorSet& gens, const std::filesystem::path& dir);

}  // namespace fence
