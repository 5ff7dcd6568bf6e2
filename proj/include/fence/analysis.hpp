#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fence/closure.hpp"

namespace fence {

/// rank FI_n for odd n: 2 at n = 1, 5 at n = 3, otherwise
/// (n-5)/2 + floor((n+6)/4) * floor((n+7)/4).
long rank_formula(int n);

/// |G_n| counted family by family: 1 + ceil(n/4) + (n-3)/2 + 2 floor((n+1)/4)
/// + floor(n/4) floor((n+2)/4) - 1 for n >= 5; 5 at n = 3.
long generator_count_by_family(int n);

/// floor(n/4) * floor((n+2)/4) - 1, the number of alpha_{i,j} in G_n (n >= 5).
long pair_count_formula(int n);

/// Number of two-index alpha entries ("alpha_i_j") in a generator set.
std::size_t count_pair_generators(const GeneratorSet& gens);

struct IdentityCheck {
  std::string name;
  std::string params;
  bool holds = false;
  /// False for supplementary rows that are not part of the stated table.
  bool stated = true;
};

/// Pointwise check of the generator identities for every legal parameter:
///   beta_i^even beta_i^odd = id minus {i-1, i+1}
///   alpha_i alpha_i        = id minus {i}
///   alpha_{i,j}^2          = id minus {i, j}
///   alpha_{1,n}            = gamma alpha_1 alpha_n
///   alpha_{i,j}            = alpha_i alpha_{j-i} alpha_i        (even i, j)
///   beta_a^odd             = alpha_2 beta_{n-a+1}^odd gamma     (even a > (n+1)/2)
///   beta_a^even            = gamma beta_{n-a+1}^even alpha_2    (even a > (n+1)/2)
/// plus the supplementary row alpha_{i,j} = alpha_i alpha_{n+1-(j-i)} alpha_i.
std::vector<IdentityCheck> check_identity_table(FenceSize n);

/// Rank n-1 elements whose domain misses i or n-i+1, 1 <= i <= (n+1)/2.
struct RClass {
  int index = 0;
  std::vector<Code> members;
};

RClass r_class(const ElementUniverse& universe, int i);

struct Lemma6Entry {
  int i = 0;
  std::size_t class_size = 0;
  /// Members of R_i generated by FI_n \ R_i; the claim needs zero.
  std::size_t reached = 0;
};

std::vector<Lemma6Entry> verify_lemma6(const ElementUniverse& universe);

struct Prop7Alpha {
  Code alpha = 0;
  /// |<alpha, FI_n \ R_i> ∩ R_i|
  std::size_t intersection = 0;
  /// Intersection inside {alpha_i, alpha_i^2, alpha_i gamma, alpha_i^2 gamma,
  /// gamma alpha_i, gamma alpha_i^2, gamma alpha_i gamma, gamma alpha_i^2 gamma}.
  bool within_prescribed = false;
  /// Intersection equal to <alpha, gamma> ∩ R_i.
  bool equals_alpha_gamma = false;
};

struct Prop7Index {
  int i = 0;
  std::size_t class_size = 0;
  std::vector<Code> prescribed;
  std::vector<Prop7Alpha> entries;

  bool class_size_ok() const { return class_size == 16; }
  bool bound_ok() const;
  bool containment_ok() const;
};

/// One entry per even i in 4..(n-1)/2; empty below n = 9.
std::vector<Prop7Index> verify_prop7_claims(const ElementUniverse& universe);

struct Bf4Result {
  std::size_t checked = 0;
  std::vector<Code> violations;
};

/// Every element of J_n ∩ Par_n has exactly one parity-changing point x,
/// and x or its image lies in {1, n}.
Bf4Result verify_lemma_bf4(const ElementUniverse& universe);

struct MinimalRankResult {
  int rank = 0;
  /// Subsets tried in total and at size rank - 1.
  std::uint64_t subsets_checked = 0;
  std::uint64_t subsets_below_rank = 0;
  std::vector<Code> generating_set;
};

/// Smallest generating subset of FI_3 by exhaustive search over subsets that
/// contain gamma_3. Throws CapacityError for n != 3.
MinimalRankResult minimal_rank_exhaustive(const ElementUniverse& universe);

struct SweepResult {
  std::size_t checked = 0;
  std::vector<Code> failures;
};

SweepResult parity_reduce_sweep(const std::vector<Code>& codes, FenceSize n);
SweepResult convex_extend_sweep(const std::vector<Code>& codes, FenceSize n);

enum class Grade { PaperFormula, MachineVerified, PaperProved };
enum class Status { Pass, Fail, Skipped };

std::string to_string(Grade g);
std::string to_string(Status s);

struct ClaimInfo {
  std::string id;
  std::string statement;
};

/// Fixed list of checkable claims, in report order.
const std::vector<ClaimInfo>& claim_registry();

struct ClaimCheck {
  std::string id;
  std::string statement;
  Status status = Status::Skipped;
  Grade grade = Grade::MachineVerified;
  std::string evidence;
  /// Not serialized; timing stays out of reports so they compare byte for byte.
  double wall_ms = 0.0;
};

struct VerificationReport {
  int n = 0;
  std::size_t universe_size = 0;
  std::string universe_mode;
  std::vector<ClaimCheck> checks;

  /// True when a machine-verified claim failed.
  bool has_machine_failure() const;
  nlohmann::ordered_json to_json() const;
  std::string to_table() const;
};

using UniverseProvider = std::function<ElementUniverse(FenceSize)>;

/// Runs the registry claims named in `only` (all when empty) at n >= 3.
/// Throws ArgumentError for unknown claim ids.
VerificationReport run_verification(FenceSize n, const std::vector<std::string>& only, unsigned workers = 0,
                                    const UniverseProvider& universe = {});

}  // namespace fence
