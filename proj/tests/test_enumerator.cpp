#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "davis/enumerator.hpp"
#include "fixtures.hpp"

namespace davis {
namespace {

using fixture::shared_group;
using fixture::shared_matrices;

const ConstraintSystem& shared_system() {
  static const ConstraintSystem s = compile_constraints(shared_matrices(), identity_order());
  return s;
}

const ConstraintSystem& shared_odd_system() {
  static const ConstraintSystem s = compile_constraints(shared_matrices(), identity_order(), false);
  return s;
}

std::vector<int> random_free_set(std::mt19937_64& rng, int size) {
  std::vector<int> idx(kDimension - 1);
  for (int i = 0; i < kDimension - 1; ++i) idx[i] = i + 1;
  std::shuffle(idx.begin(), idx.end(), rng);
  std::vector<int> free{0};
  free.insert(free.end(), idx.begin(), idx.begin() + size - 1);
  std::sort(free.begin(), free.end());
  return free;
}

SearchReport search(const ConstraintSystem& sys, const SearchDomain& domain, const std::string& tag,
                    ShardSpec shard = {}) {
  SearchOptions o;
  o.instance = tag;
  o.domain = domain;
  o.shard = shard;
  const SearchOutcome out = dfs_search(sys, shared_group(), o);
  EXPECT_FALSE(out.interrupted);
  return out.report;
}

void expect_same_result(const SearchReport& a, const SearchReport& b) {
  EXPECT_EQ(a.vectors, b.vectors);
  EXPECT_EQ(a.histogram, b.histogram);
  EXPECT_EQ(a.max_abs, b.max_abs);
}

TEST(Enumerator, ConstraintFamilies) {
  const auto& sys = shared_system();
  ASSERT_EQ(sys.constraints.size(), 792U);
  int a = 0;
  int b = 0;
  int bb = 0;
  for (const auto& c : sys.constraints) {
    int twos = 0;
    for (const auto& t : c.terms) twos += std::abs(t.coef) == 2;
    if (c.family == SurfaceKind::kDecagon) {
      ++a;
      EXPECT_EQ(c.terms.size(), 46U);
      EXPECT_EQ(twos, 0);
    } else if (c.family == SurfaceKind::kCone) {
      ++b;
      EXPECT_EQ(c.terms.size(), 6U);
      EXPECT_EQ(twos, 0);
    } else {
      ++bb;
      EXPECT_EQ(c.terms.size(), 21U);
      EXPECT_EQ(twos, 1);
    }
    EXPECT_EQ(c.suffix_weight[kDimension], 0);
    int total = 0;
    for (const auto& t : c.terms) total += std::abs(t.coef);
    EXPECT_EQ(c.suffix_weight[0], total);
  }
  EXPECT_EQ(a, 72);
  EXPECT_EQ(b, 360);
  EXPECT_EQ(bb, 360);
}

TEST(Enumerator, GreedyOrderIsPermutationStartingAtZero) {
  const VariableOrder o = greedy_cover_order(shared_matrices());
  EXPECT_EQ(o[0], 0);
  VariableOrder sorted = o;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, identity_order());
  EXPECT_NO_THROW(compile_constraints(shared_matrices(), o));
  VariableOrder bad = identity_order();
  bad[1] = 0;
  EXPECT_THROW(compile_constraints(shared_matrices(), bad), SearchError);
}

TEST(Enumerator, CompileRejectsWrongPattern) {
  IntersectionData d = shared_matrices();
  for (int i = 0; i < kDimension; ++i) {
    if (d.Mb(i, 0) == 0) {
      d.Mb(i, 0) = 1;
      break;
    }
  }
  EXPECT_THROW(compile_constraints(d, identity_order()), SearchError);
}

TEST(Enumerator, ResidualPruneExamples) {
  const auto& sys = shared_system();
  std::vector<int> partial(sys.constraints.size(), 0);
  EXPECT_FALSE(residual_prune(sys, partial, 0));
  const int cone = kDimension;  // first b-constraint
  int last = 0;
  for (const auto& t : sys.constraints[cone].terms) last = std::max(last, sys.depth_of[t.index]);
  partial[cone] = 3;
  EXPECT_TRUE(residual_prune(sys, partial, last + 1));
  partial[cone] = 2;
  EXPECT_FALSE(residual_prune(sys, partial, last + 1));
}

// Soundness against exhaustive extension: with the fixed coordinates first
// in the order, a pruned prefix of the free coordinates has no admissible
// completion.
TEST(Enumerator, ResidualPruneNeverCutsExtendablePrefixes) {
  std::mt19937_64 rng(23);
  const auto& data = shared_matrices();
  for (int inst = 0; inst < 3; ++inst) {
    const auto free = random_free_set(rng, 10);
    VariableOrder order{};
    int d = 0;
    for (int i = 0; i < kDimension; ++i) {
      if (!std::binary_search(free.begin(), free.end(), i)) order[d++] = i;
    }
    const int fixed = d;
    for (int i : free) order[d++] = i;
    for (bool even : {true, false}) {
      const ConstraintSystem sys = compile_constraints(data, order, even);
      for (int trial = 0; trial < 60; ++trial) {
        const int len = 1 + static_cast<int>(rng() % free.size());
        SignVector prefix;
        for (int k = 0; k < len; ++k) prefix.set(free[k], static_cast<int>(rng() % 3) - 1);
        std::vector<int> partial(sys.constraints.size(), 0);
        for (std::size_t c = 0; c < sys.constraints.size(); ++c) {
          for (const auto& t : sys.constraints[c].terms) partial[c] += t.coef * prefix.get(t.index);
        }
        const bool pruned = residual_prune(sys, partial, fixed + len);
        bool extendable = false;
        const int rest = static_cast<int>(free.size()) - len;
        long long total = 1;
        for (int k = 0; k < rest; ++k) total *= 3;
        for (long long code = 0; code < total && !extendable; ++code) {
          SignVector y = prefix;
          long long c = code;
          for (int k = 0; k < rest; ++k, c /= 3) y.set(free[len + k], static_cast<int>(c % 3) - 1);
          extendable = verify_vector(y, data).admissible(even);
        }
        if (pruned) {
          EXPECT_FALSE(extendable);
        }
      }
    }
  }
}

TEST(Enumerator, MinimalityPruneTransposition) {
  SignedPermutation t = SignedPermutation::identity();
  t.image[0] = 1;
  t.image[1] = 0;
  SymmetryGroup group = group_from_elements({SignedPermutation::identity(), t});
  const auto& sys = shared_system();
  SignVector prefix;
  prefix.set(1, -1);
  EXPECT_TRUE(minimality_prune(prefix, 2, sys, group));
  EXPECT_FALSE(minimality_prune(SignVector{}, 2, sys, group));
  EXPECT_FALSE(minimality_prune(SignVector{}, 72, sys, shared_group()));
}

TEST(Enumerator, MinimalityPruneOnFullVectorsMatchesCanonical) {
  std::mt19937_64 rng(29);
  const auto& group = shared_group();
  for (int t = 0; t < 40; ++t) {
    SignVector x;
    const int support = 1 + static_cast<int>(rng() % 6);
    for (int k = 0; k < support; ++k) x.set(static_cast<int>(rng() % kDimension), rng() % 2 ? 1 : -1);
    if (t % 4 == 0) x = canonical_rep(x, group);
    const bool canonical = canonical_rep(x, group) == x;
    EXPECT_EQ(minimality_prune(x, kDimension, shared_system(), group), !canonical);
    EXPECT_EQ(is_canonical(x, group), canonical);
  }
}

TEST(Enumerator, AllZeroShard) {
  SearchDomain d;
  d.allowed.fill(2);
  const SearchReport r = search(shared_system(), d, "zero");
  ASSERT_EQ(r.vectors.size(), 1U);
  EXPECT_TRUE(r.vectors[0].x.is_zero());
  EXPECT_EQ(r.vectors[0].selfint, 0);
}

TEST(Enumerator, VerifyVectorExamples) {
  const auto zero = verify_vector(SignVector{}, shared_matrices());
  EXPECT_TRUE(zero.admissible(true));
  EXPECT_EQ(zero.selfint, 0);
  SignVector e;
  e.set(5, 1);
  const auto single = verify_vector(e, shared_matrices());
  EXPECT_TRUE(single.bounded);
  EXPECT_FALSE(single.even);  // Q_5j = ±1 for the 46 circles linked with circle 5
  EXPECT_EQ(single.selfint, 0);
}

TEST(Enumerator, SearchMatchesBruteForceOnSubcubes) {
  std::mt19937_64 rng(31);
  for (int inst = 0; inst < 6; ++inst) {
    const SearchDomain domain = SearchDomain::subcube(random_free_set(rng, 9));
    for (bool even : {true, false}) {
      const auto& sys = even ? shared_system() : shared_odd_system();
      const SearchReport fast = search(sys, domain, "sub");
      const SearchReport slow = brute_force_subcube(shared_matrices(), shared_group(), domain, "sub", even);
      expect_same_result(fast, slow);
      EXPECT_GE(fast.vectors.size(), 1U);
    }
  }
}

TEST(Enumerator, GreedyOrderGivesSameResult) {
  const ConstraintSystem greedy = compile_constraints(shared_matrices(), greedy_cover_order(shared_matrices()), false);
  SearchDomain d = SearchDomain::full();
  d.max_support = 4;
  expect_same_result(search(greedy, d, "cap"), search(shared_odd_system(), d, "cap"));
}

TEST(Enumerator, EmittedVectorsAreSoundAndCanonical) {
  SearchDomain d = SearchDomain::full();
  d.max_support = 10;
  const SearchReport r = search(shared_system(), d, "cap10");
  long long total = 0;
  for (const auto& [v, n] : r.histogram) total += n;
  EXPECT_EQ(total, static_cast<long long>(r.vectors.size()));
  for (const auto& e : r.vectors) {
    const VectorCheck c = verify_vector(e.x, shared_matrices());
    EXPECT_TRUE(c.admissible(true));
    EXPECT_EQ(c.selfint, e.selfint);
    EXPECT_EQ(e.selfint % 8, 0);
    EXPECT_LE(e.x.support(), 10);
    EXPECT_EQ(canonical_rep(e.x, shared_group()), e.x);
  }
  EXPECT_TRUE(std::is_sorted(r.vectors.begin(), r.vectors.end(),
                             [](const Emitted& a, const Emitted& b) { return a.x < b.x; }));
}

TEST(Enumerator, ShardsMergeToUnshardedRun) {
  SearchDomain d = SearchDomain::full();
  d.max_support = 5;
  const auto& sys = shared_odd_system();
  const SearchReport whole = search(sys, d, "shards");
  for (const auto& [depth, count] : {std::pair{3, 4}, std::pair{5, 7}}) {
    std::vector<SearchReport> parts;
    for (int i = 0; i < count; ++i) parts.push_back(search(sys, d, "shards", {depth, i, count}));
    std::shuffle(parts.begin(), parts.end(), std::mt19937_64(depth));
    const SearchReport merged = merge_reports(parts);
    expect_same_result(merged, whole);
    EXPECT_EQ(merged.nodes, whole.nodes);
    EXPECT_EQ(merged.pruned_bound, whole.pruned_bound);
    EXPECT_EQ(merged.pruned_minimality, whole.pruned_minimality);
    EXPECT_EQ(static_cast<int>(merged.shards.size()), count);
  }
  SearchOptions o;
  o.instance = "shards";
  o.domain = d;
  const SearchReport threaded = run_shards(sys, shared_group(), o, 4, 9, 4);
  expect_same_result(threaded, whole);
  EXPECT_EQ(threaded.nodes, whole.nodes);
}

TEST(Enumerator, MergeRules) {
  SearchDomain d = SearchDomain::full();
  d.max_support = 3;
  const auto& sys = shared_odd_system();
  const SearchReport a = search(sys, d, "m", {2, 0, 2});
  const SearchReport b = search(sys, d, "m", {2, 1, 2});
  const SearchReport ab = merge_reports({a, b});
  const SearchReport ba = merge_reports({b, a});
  expect_same_result(ab, ba);
  EXPECT_EQ(ab.nodes, ba.nodes);
  EXPECT_TRUE(ab.shards == ba.shards);
  const SearchReport with_empty = merge_reports({a, SearchReport{}});
  expect_same_result(with_empty, a);
  EXPECT_EQ(with_empty.nodes, a.nodes);
  EXPECT_THROW(merge_reports({a, a}), SearchError);
  SearchReport other = b;
  other.instance = "n";
  EXPECT_THROW(merge_reports({a, other}), SearchError);
  EXPECT_FALSE(a.complete());
}

TEST(Enumerator, CheckpointResumeGivesIdenticalReport) {
  SearchDomain d = SearchDomain::full();
  d.max_support = 6;
  const auto& sys = shared_odd_system();
  SearchOptions o;
  o.instance = "ckpt";
  o.domain = d;
  o.shard = {2, 1, 3};
  const SearchOutcome whole = dfs_search(sys, shared_group(), o);

  SearchOptions part = o;
  part.stop_after = 5000;
  SearchOutcome out = dfs_search(sys, shared_group(), part);
  int rounds = 1;
  while (out.interrupted) {
    const Checkpoint c = read_checkpoint(write_checkpoint(out.checkpoint));
    out = dfs_search(sys, shared_group(), part, &c);
    ++rounds;
  }
  EXPECT_GT(rounds, 3);
  expect_same_result(out.report, whole.report);
  EXPECT_EQ(out.report.nodes, whole.report.nodes);
  EXPECT_EQ(out.report.pruned_bound, whole.report.pruned_bound);
  EXPECT_EQ(out.report.pruned_minimality, whole.report.pruned_minimality);
}

TEST(Enumerator, CorruptCheckpointRefused) {
  SearchDomain d = SearchDomain::full();
  d.max_support = 4;
  SearchOptions o;
  o.instance = "ckpt";
  o.domain = d;
  o.stop_after = 100;
  const SearchOutcome out = dfs_search(shared_odd_system(), shared_group(), o);
  ASSERT_TRUE(out.interrupted);
  std::string text = write_checkpoint(out.checkpoint);
  std::string flipped = text;
  flipped[flipped.find("PATH") + 5] ^= 1;
  EXPECT_THROW(read_checkpoint(flipped), SearchError);
  EXPECT_THROW(read_checkpoint(text.substr(0, text.size() / 2)), SearchError);
  Checkpoint c = read_checkpoint(text);
  SearchOptions other = o;
  other.instance = "different";
  EXPECT_THROW(dfs_search(shared_odd_system(), shared_group(), other, &c), SearchError);
}

TEST(Enumerator, CertificateRoundTrip) {
  SearchDomain d = SearchDomain::full();
  d.max_support = 4;
  const SearchReport r = search(shared_odd_system(), d, "cert");
  const SearchReport back = read_certificate(write_certificate(r));
  expect_same_result(back, r);
  EXPECT_EQ(back.nodes, r.nodes);
  EXPECT_EQ(back.instance, r.instance);
  EXPECT_TRUE(back.restricted);
  std::string text = write_certificate(r);
  const auto tab = text.find('\t');
  text.replace(tab + 1, text.find('\n', tab) - tab - 1, "99");
  EXPECT_THROW(read_certificate(text), SearchError);
}

TEST(Enumerator, OrientationRechoiceKeepsSubcubeCounts) {
  std::mt19937_64 rng(37);
  const auto& data = shared_matrices();
  OrientationChoice choice;
  choice.circle.resize(kDimension);
  for (int i = 0; i < kDimension; ++i) choice.circle[i] = rng() % 2;
  const IntersectionData flipped = reorient(data, choice);
  SignedPermutation eps = SignedPermutation::identity();
  for (int i = 0; i < kDimension; ++i) eps.sign[i] = choice.circle[i] ? -1 : 1;
  std::vector<SignedPermutation> conjugated;
  for (const auto& g : shared_group().elements) conjugated.push_back(compose(eps, compose(g, eps)));
  const SymmetryGroup group2 = group_from_elements(conjugated);
  // Orbit counts are invariant on group-invariant domains such as a support cap.
  SearchDomain capped = SearchDomain::full();
  capped.max_support = 5;
  SearchOptions o;
  o.instance = "o";
  o.domain = capped;
  const SearchReport r1 = dfs_search(shared_odd_system(), shared_group(), o).report;
  const SearchReport r2 = dfs_search(compile_constraints(flipped, identity_order(), false), group2, o).report;
  EXPECT_EQ(r1.vectors.size(), r2.vectors.size());
  EXPECT_EQ(r1.abs_histogram(), r2.abs_histogram());
  // Subcubes are not group-invariant, but x -> eps x preserves admissibility.
  for (int inst = 0; inst < 3; ++inst) {
    const SearchDomain domain = SearchDomain::subcube(random_free_set(rng, 8));
    long long admissible1 = 0;
    long long admissible2 = 0;
    std::vector<int> free;
    for (int i = 0; i < kDimension; ++i) {
      if (domain.allowed[i] == 7) free.push_back(i);
    }
    for (int code = 0; code < 6561; ++code) {
      SignVector x;
      int c = code;
      for (int k = 0; k < 8; ++k, c /= 3) x.set(free[k], c % 3 - 1);
      admissible1 += verify_vector(x, data).admissible(false);
      admissible2 += verify_vector(x, flipped).admissible(false);
    }
    EXPECT_EQ(admissible1, admissible2);
  }
}

}  // namespace
}  // namespace davis
