#pragma once

// Depth-first enumeration of the minimal admissible points of {-1, 0, +1}^72.
//
// A point x (coefficients in the a-basis) is admissible when
//   |Q(x, a_i)| <= 2,  |Q(x, b_j)| <= 2,  |Q(x, B_j)| <= 2
// for all 72 + 360 + 360 classes; |Q(x, A_j)| = |2 x_j| <= 2 is the ternary
// domain itself. x is the dual of an even class, and the 864 classes span
// H_2 modulo torsion, so every pairing is also even; with `require_even` the
// pairings must lie in {-2, 0, 2}. It is minimal when it is the
// lexicographic minimum of its orbit (-1 < 0 < +1, coordinates in circle
// order).

#include <array>
#include <atomic>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "davis/pairings.hpp"
#include "davis/sign_vector.hpp"
#include "davis/symmetry.hpp"

namespace davis {

class SearchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kConstraintBound = 2;
inline constexpr int kConstraintCount = kDimension + kConeClassCount + kPentagonClassCount;

using VariableOrder = std::array<int, kDimension>;

struct Term {
  int index = 0;
  int coef = 0;
};

/// |sum coef * x[index]| <= bound, and the sum even when `even` is set.
struct Constraint {
  SurfaceKind family = SurfaceKind::kDecagon;
  int source = 0;  // row of Q or column of Mb / MB
  std::vector<Term> terms;
  int bound = kConstraintBound;
  bool even = true;
  /// suffix_weight[d]: sum of |coef| over terms assigned at depth >= d.
  std::array<int, kDimension + 1> suffix_weight{};
};

struct ConstraintSystem {
  std::vector<Constraint> constraints;
  VariableOrder order{};     // order[d]: coordinate assigned at depth d
  VariableOrder depth_of{};  // inverse of order
  /// incidence[i]: (constraint, coefficient) pairs touching coordinate i.
  std::vector<std::vector<std::pair<int, int>>> incidence;
  IntMatrix q;
  bool require_even = true;
};

VariableOrder identity_order();
/// Starts at coordinate 0, then repeatedly takes the coordinate completing
/// the most b-constraints (ties: most b-terms already placed, lowest index).
VariableOrder greedy_cover_order(const IntersectionData& data);

/// Throws SearchError if a row does not have the expected family pattern.
ConstraintSystem compile_constraints(const IntersectionData& data, const VariableOrder& order,
                                     bool require_even = true);

/// Prune iff some constraint has |partial| - suffix_weight[depth] > bound,
/// or has no unassigned terms left and an odd sum when parity is required.
bool residual_prune(const ConstraintSystem& system, const std::vector<int>& partial, int depth);

/// Reference (non-incremental) minimality test on the coordinates assigned
/// at depths < depth. True only if some element certifies g.y < y for every
/// completion y.
bool minimality_prune(const SignVector& prefix, int depth, const ConstraintSystem& system,
                      const SymmetryGroup& group);

/// Allowed values per coordinate (bit 0: -1, bit 1: 0, bit 2: +1) and a cap
/// on the number of nonzero coordinates.
struct SearchDomain {
  std::array<std::uint8_t, kDimension> allowed{};
  int max_support = kDimension;

  static SearchDomain full();
  /// Coordinates outside `free_set` fixed to 0.
  static SearchDomain subcube(const std::vector<int>& free_set);

  bool allows(int i, int value) const { return (allowed[i] >> (value + 1)) & 1U; }
  bool restricted() const;
  std::string str() const;
};

/// Prefix shards: the assignments of the first `depth` variables are
/// numbered in base 3 and shard `index` of `count` takes numbers congruent
/// to `index`.
struct ShardSpec {
  int depth = 0;
  int index = 0;
  int count = 1;

  std::string str() const;
};

struct Emitted {
  SignVector x;
  long long selfint = 0;

  friend bool operator==(const Emitted&, const Emitted&) = default;
};

struct SearchReport {
  std::string instance;
  int shard_depth = 0;
  int shard_count = 1;
  std::vector<int> shards;  // covered shard indices, sorted
  bool restricted = false;
  long long nodes = 0;
  long long pruned_bound = 0;
  long long pruned_minimality = 0;
  std::vector<Emitted> vectors;  // sorted by x
  std::map<long long, long long> histogram;  // Q(x, x) -> count
  long long max_abs = 0;
  double wall_seconds = 0.0;

  bool complete() const;
  bool empty() const { return instance.empty(); }
  /// Histogram of |Q(x, x)|.
  std::map<long long, long long> abs_histogram() const;
};

struct Checkpoint {
  std::string instance;
  ShardSpec shard;
  std::vector<int> path;  // values of the next assignment to make, by depth
  long long nodes = 0;
  long long pruned_bound = 0;
  long long pruned_minimality = 0;
  double wall_seconds = 0.0;
  std::vector<Emitted> vectors;
};

/// Plain text with a trailing SHA-256 line over the body.
std::string write_checkpoint(const Checkpoint& c);
/// Throws SearchError on any syntax or checksum failure.
Checkpoint read_checkpoint(const std::string& text);

struct SearchOptions {
  std::string instance;
  SearchDomain domain = SearchDomain::full();
  ShardSpec shard;
  /// Work units between checkpoint callbacks; 0 disables.
  long long checkpoint_every = 0;
  /// Stop (as if interrupted) after this many work units; 0 disables.
  long long stop_after = 0;
  const std::atomic<bool>* interrupt = nullptr;
};

struct SearchOutcome {
  SearchReport report;
  bool interrupted = false;
  Checkpoint checkpoint;  // valid when interrupted
};

using CheckpointSink = void (*)(const Checkpoint&, void* context);

/// Visits every minimal admissible point of the shard exactly once.
SearchOutcome dfs_search(const ConstraintSystem& system, const SymmetryGroup& group,
                         const SearchOptions& options, const Checkpoint* resume = nullptr,
                         CheckpointSink sink = nullptr, void* sink_context = nullptr);

/// Runs shards 0..count-1 on `threads` workers and merges.
SearchReport run_shards(const ConstraintSystem& system, const SymmetryGroup& group,
                        const SearchOptions& options, int shard_depth, int shard_count, int threads);

struct VectorCheck {
  bool bounded = false;  // all 792 inequalities
  bool even = false;     // all 792 pairings even
  long long selfint = 0;

  bool admissible(bool require_even) const { return bounded && (even || !require_even); }
};

/// All 792 pairings and Q(x, x), straight from the matrices.
VectorCheck verify_vector(const SignVector& x, const IntersectionData& data);

/// Naive enumeration over at most 13 free coordinates, using verify_vector
/// and is_canonical only.
SearchReport brute_force_subcube(const IntersectionData& data, const SymmetryGroup& group,
                                 const SearchDomain& domain, const std::string& instance,
                                 bool require_even = true);

/// Throws SearchError on mismatched instances or overlapping shards.
SearchReport merge_reports(const std::vector<SearchReport>& reports);

/// Certificate text: one `vector<TAB>Q(x,x)` line per vector and `# key value`
/// footer lines.
std::string write_certificate(const SearchReport& report);
SearchReport read_certificate(const std::string& text);

}  // namespace davis
