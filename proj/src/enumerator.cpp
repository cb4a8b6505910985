#include "davis/enumerator.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdlib>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "davis/hashing.hpp"

namespace davis {

namespace {

constexpr int kValues[3] = {-1, 0, 1};

std::vector<int> support_of(const SignVector& x) {
  std::vector<int> s;
  for (int i = 0; i < kDimension; ++i) {
    if (x.get(i) != 0) s.push_back(i);
  }
  return s;
}

long long self_intersection(const IntMatrix& q, const SignVector& x) {
  const auto s = support_of(x);
  long long total = 0;
  for (int i : s) {
    for (int j : s) total += static_cast<long long>(q(i, j)) * x.get(i) * x.get(j);
  }
  return total;
}

void finish_report(SearchReport& r) {
  std::sort(r.vectors.begin(), r.vectors.end(), [](const Emitted& a, const Emitted& b) { return a.x < b.x; });
  r.histogram.clear();
  r.max_abs = 0;
  for (const auto& e : r.vectors) {
    ++r.histogram[e.selfint];
    r.max_abs = std::max(r.max_abs, std::llabs(e.selfint));
  }
}

class Engine {
 public:
  Engine(const ConstraintSystem& system, const SymmetryGroup& group, const SearchOptions& options)
      : sys_(system), opt_(options), dom_(options.domain) {
    const ShardSpec& s = opt_.shard;
    if (s.count < 1 || s.index < 0 || s.index >= s.count || s.depth < 0 || s.depth > kDimension ||
        (s.depth == 0 && s.count != 1)) {
      throw SearchError("invalid shard " + s.str());
    }
    const int nc = static_cast<int>(sys_.constraints.size());
    weight_.assign(static_cast<std::size_t>(nc) * (kDimension + 1), 0);
    maxcoef_.assign(nc, 1);
    for (int c = 0; c < nc; ++c) {
      for (const Term& t : sys_.constraints[c].terms) {
        maxcoef_[c] = std::max(maxcoef_[c], std::abs(t.coef));
        if (!dom_.allows(t.index, -1) && !dom_.allows(t.index, 1)) continue;
        for (int d = 0; d <= sys_.depth_of[t.index]; ++d) weight_[c * (kDimension + 1) + d] += std::abs(t.coef);
      }
    }
    sums_.assign(nc, 0);
    capped_ = dom_.max_support < kDimension;

    const int n = group.order();
    pre_.resize(static_cast<std::size_t>(n) * kDimension);
    eps_.resize(static_cast<std::size_t>(n) * kDimension);
    buckets_.assign(kDimension, {});
    for (int g = 0; g < n; ++g) {
      const auto& el = group.elements[g];
      for (int q = 0; q < kDimension; ++q) {
        pre_[g * kDimension + el.image[q]] = static_cast<std::uint8_t>(q);
        eps_[g * kDimension + el.image[q]] = el.sign[q];
      }
      const int q0 = pre_[g * kDimension];
      buckets_[std::max(sys_.depth_of[0], sys_.depth_of[q0])].push_back({static_cast<std::uint16_t>(g), 0});
    }
    vals_.fill(0);
  }

  SearchOutcome run(const Checkpoint* resume, CheckpointSink sink, void* context) {
    sink_ = sink;
    sink_context_ = context;
    const auto start = std::chrono::steady_clock::now();
    double prior_wall = 0.0;
    if (resume) {
      if (resume->instance != opt_.instance || resume->shard.depth != opt_.shard.depth ||
          resume->shard.index != opt_.shard.index || resume->shard.count != opt_.shard.count) {
        throw SearchError("checkpoint belongs to a different instance or shard");
      }
      if (resume->path.empty() || resume->path.size() > kDimension) throw SearchError("checkpoint path length");
      for (int v : resume->path) {
        if (v < -1 || v > 1) throw SearchError("checkpoint path value");
      }
      resume_ = resume->path;
      nodes_ = resume->nodes;
      pruned_bound_ = resume->pruned_bound;
      pruned_min_ = resume->pruned_minimality;
      found_ = resume->vectors;
      prior_wall = resume->wall_seconds;
    }
    const bool done = descend(0, resume != nullptr);

    SearchOutcome out;
    SearchReport& r = out.report;
    r.instance = opt_.instance;
    r.shard_depth = opt_.shard.depth;
    r.shard_count = opt_.shard.count;
    r.shards = {opt_.shard.index};
    r.restricted = dom_.restricted();
    r.nodes = nodes_;
    r.pruned_bound = pruned_bound_;
    r.pruned_minimality = pruned_min_;
    r.vectors = found_;
    r.wall_seconds =
        prior_wall + std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    finish_report(r);
    out.interrupted = !done;
    if (!done) {
      out.checkpoint = stop_point_;
      out.checkpoint.wall_seconds = r.wall_seconds;
    }
    return out;
  }

 private:
  struct Entry {
    std::uint16_t element;
    std::uint8_t pos;
  };

  Checkpoint snapshot(int depth, int value) const {
    Checkpoint c;
    c.instance = opt_.instance;
    c.shard = opt_.shard;
    c.path.assign(path_.begin(), path_.begin() + depth);
    c.path.push_back(value);
    c.nodes = nodes_;
    c.pruned_bound = pruned_bound_;
    c.pruned_minimality = pruned_min_;
    c.vectors = found_;
    return c;
  }

  bool should_stop() const {
    if (opt_.stop_after > 0 && work_ >= opt_.stop_after) return true;
    return opt_.interrupt && opt_.interrupt->load(std::memory_order_relaxed);
  }

  void assign(int v, int x) {
    vals_[v] = static_cast<std::int8_t>(x);
    if (x == 0) return;
    for (const auto& [c, coef] : sys_.incidence[v]) sums_[c] += coef * x;
    ++used_;
  }

  void unassign(int v, int x) {
    vals_[v] = 0;
    if (x == 0) return;
    for (const auto& [c, coef] : sys_.incidence[v]) sums_[c] -= coef * x;
    --used_;
  }

  bool violates(int c, int next_depth) const {
    int room = weight_[c * (kDimension + 1) + next_depth];
    if (capped_) room = std::min(room, (dom_.max_support - used_) * maxcoef_[c]);
    const int s = std::abs(sums_[c]);
    if (s - room > kConstraintBound) return true;
    return room == 0 && sys_.require_even && (s & 1) != 0;
  }

  bool bound_prune(int v, int x, int d) const {
    if (capped_ && x != 0) {
      for (int c = 0; c < static_cast<int>(sums_.size()); ++c) {
        if (violates(c, d + 1)) return true;
      }
      return false;
    }
    for (const auto& [c, coef] : sys_.incidence[v]) {
      if (violates(c, d + 1)) return true;
    }
    return false;
  }

  // Advances every element waiting on depth d; true if one certifies
  // g.y <lex y. Entries move only to deeper buckets, recorded on the trail.
  bool tie_prune(int d) {
    const auto& waiting = buckets_[d];
    for (const Entry& e : waiting) {
      const std::uint8_t* pre = &pre_[e.element * kDimension];
      const std::int8_t* eps = &eps_[e.element * kDimension];
      for (int p = e.pos; p < kDimension; ++p) {
        const int q = pre[p];
        const int dp = sys_.depth_of[p];
        const int dq = sys_.depth_of[q];
        if (dp > d || dq > d) {
          const int b = std::max(dp, dq);
          buckets_[b].push_back({e.element, static_cast<std::uint8_t>(p)});
          trail_.push_back(static_cast<std::uint8_t>(b));
          break;
        }
        const int gy = eps[p] * vals_[q];
        const int y = vals_[p];
        if (gy < y) return true;
        if (gy > y) break;
      }
    }
    return false;
  }

  void undo_trail(std::size_t mark) {
    while (trail_.size() > mark) {
      buckets_[trail_.back()].pop_back();
      trail_.pop_back();
    }
  }

  void record_leaf() {
    SignVector x;
    for (int i = 0; i < kDimension; ++i) x.set(i, vals_[i]);
    found_.push_back({x, self_intersection(sys_.q, x)});
  }

  bool descend(int d, bool resuming) {
    const int v = sys_.order[d];
    const ShardSpec& shard = opt_.shard;
    const bool on_path = resuming && d < static_cast<int>(resume_.size());
    const bool shared = d < shard.depth - 1;
    const bool counted = !shared || shard.index == 0;
    for (int x : kValues) {
      if (on_path && x < resume_[d]) continue;
      if (!dom_.allows(v, x)) continue;
      if (x != 0 && used_ >= dom_.max_support) continue;
      if (d < shard.depth) {
        prefix_[d + 1] = prefix_[d] * 3 + (x + 1);
        if (d == shard.depth - 1 && prefix_[d + 1] % shard.count != shard.index) continue;
      }
      // Nodes above the last resumed depth were counted before the checkpoint.
      const bool replay = on_path && x == resume_[d] && d + 1 < static_cast<int>(resume_.size());
      if (!replay) {
        if (should_stop()) {
          stop_point_ = snapshot(d, x);
          return false;
        }
        if (sink_ && opt_.checkpoint_every > 0 && work_ > 0 && work_ % opt_.checkpoint_every == 0) {
          sink_(snapshot(d, x), sink_context_);
        }
        ++work_;
        if (counted) ++nodes_;
      }
      path_[d] = static_cast<std::int8_t>(x);
      assign(v, x);
      if (bound_prune(v, x, d)) {
        if (!replay && counted) ++pruned_bound_;
        unassign(v, x);
        continue;
      }
      const std::size_t mark = trail_.size();
      if (tie_prune(d)) {
        if (!replay && counted) ++pruned_min_;
        undo_trail(mark);
        unassign(v, x);
        continue;
      }
      bool ok = true;
      if (d + 1 == kDimension) {
        record_leaf();
      } else {
        ok = descend(d + 1, replay);
      }
      undo_trail(mark);
      unassign(v, x);
      if (!ok) return false;
    }
    return true;
  }

  const ConstraintSystem& sys_;
  const SearchOptions& opt_;
  const SearchDomain& dom_;
  std::vector<int> weight_;
  std::vector<int> maxcoef_;
  std::vector<int> sums_;
  bool capped_ = false;
  int used_ = 0;
  std::vector<std::uint8_t> pre_;
  std::vector<std::int8_t> eps_;
  std::vector<std::vector<Entry>> buckets_;
  std::vector<std::uint8_t> trail_;
  std::array<std::int8_t, kDimension> vals_{};
  std::array<std::int8_t, kDimension> path_{};
  std::array<long long, kDimension + 1> prefix_{};
  std::vector<int> resume_;
  long long work_ = 0;
  long long nodes_ = 0;
  long long pruned_bound_ = 0;
  long long pruned_min_ = 0;
  std::vector<Emitted> found_;
  Checkpoint stop_point_;
  CheckpointSink sink_ = nullptr;
  void* sink_context_ = nullptr;
};

long long parse_ll(const std::string& s) {
  std::size_t pos = 0;
  const long long v = std::stoll(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("trailing characters");
  return v;
}

}  // namespace

VariableOrder identity_order() {
  VariableOrder o{};
  for (int i = 0; i < kDimension; ++i) o[i] = i;
  return o;
}

VariableOrder greedy_cover_order(const IntersectionData& data) {
  std::vector<std::vector<int>> cones;
  std::vector<std::vector<int>> touching(kDimension);
  for (Eigen::Index c = 0; c < data.Mb.cols(); ++c) {
    std::vector<int> idx;
    for (int i = 0; i < kDimension; ++i) {
      if (data.Mb(i, c) != 0) idx.push_back(i);
    }
    for (int i : idx) touching[i].push_back(static_cast<int>(cones.size()));
    cones.push_back(std::move(idx));
  }
  std::vector<bool> placed(kDimension, false);
  std::vector<int> placed_in_cone(cones.size(), 0);
  VariableOrder order{};
  auto place = [&](int i, int d) {
    order[d] = i;
    placed[i] = true;
    for (int c : touching[i]) ++placed_in_cone[c];
  };
  place(0, 0);
  for (int d = 1; d < kDimension; ++d) {
    int best = -1;
    std::pair<int, int> best_score{-1, -1};
    for (int i = 0; i < kDimension; ++i) {
      if (placed[i]) continue;
      std::pair<int, int> score{0, 0};
      for (int c : touching[i]) {
        if (placed_in_cone[c] + 1 == static_cast<int>(cones[c].size())) ++score.first;
        score.second += placed_in_cone[c];
      }
      if (score > best_score) {
        best_score = score;
        best = i;
      }
    }
    place(best, d);
  }
  return order;
}

ConstraintSystem compile_constraints(const IntersectionData& data, const VariableOrder& order,
                                     bool require_even) {
  ConstraintSystem sys;
  sys.order = order;
  sys.require_even = require_even;
  std::vector<bool> seen(kDimension, false);
  for (int d = 0; d < kDimension; ++d) {
    if (order[d] < 0 || order[d] >= kDimension || seen[order[d]]) throw SearchError("order is not a permutation");
    seen[order[d]] = true;
    sys.depth_of[order[d]] = d;
  }
  sys.q = data.Q;
  auto add = [&](SurfaceKind family, int source, auto entry) {
    Constraint c;
    c.family = family;
    c.source = source;
    c.even = require_even;
    for (int i = 0; i < kDimension; ++i) {
      const int v = entry(i);
      if (v != 0) c.terms.push_back({i, v});
    }
    int ones = 0;
    int twos = 0;
    for (const Term& t : c.terms) {
      if (std::abs(t.coef) == 1) ++ones;
      else if (std::abs(t.coef) == 2) ++twos;
      else throw SearchError(std::string("coefficient out of range in ") + kind_letter(family) + std::to_string(source));
    }
    const bool ok = family == SurfaceKind::kDecagon  ? twos == 0 && (ones == 46 || ones == 47)
                    : family == SurfaceKind::kCone   ? twos == 0 && ones == 6
                                                     : twos == 1 && ones == 20;
    if (!ok) throw SearchError(std::string("unexpected pattern in ") + kind_letter(family) + std::to_string(source));
    for (const Term& t : c.terms) {
      for (int d = 0; d <= sys.depth_of[t.index]; ++d) c.suffix_weight[d] += std::abs(t.coef);
    }
    sys.constraints.push_back(std::move(c));
  };
  if (data.Q.rows() != kDimension || data.Mb.rows() != kDimension || data.MB.rows() != kDimension) {
    throw SearchError("matrices must have 72 rows");
  }
  for (int r = 0; r < kDimension; ++r) add(SurfaceKind::kDecagon, r, [&](int i) { return data.Q(r, i); });
  for (int c = 0; c < data.Mb.cols(); ++c) add(SurfaceKind::kCone, c, [&](int i) { return data.Mb(i, c); });
  for (int c = 0; c < data.MB.cols(); ++c) add(SurfaceKind::kPentagon, c, [&](int i) { return data.MB(i, c); });
  if (static_cast<int>(sys.constraints.size()) != kConstraintCount) throw SearchError("expected 792 constraints");
  sys.incidence.assign(kDimension, {});
  for (int c = 0; c < kConstraintCount; ++c) {
    for (const Term& t : sys.constraints[c].terms) sys.incidence[t.index].push_back({c, t.coef});
  }
  return sys;
}

bool residual_prune(const ConstraintSystem& system, const std::vector<int>& partial, int depth) {
  for (std::size_t c = 0; c < system.constraints.size(); ++c) {
    const Constraint& k = system.constraints[c];
    if (std::abs(partial[c]) - k.suffix_weight[depth] > k.bound) return true;
    if (k.even && k.suffix_weight[depth] == 0 && (partial[c] & 1) != 0) return true;
  }
  return false;
}

bool minimality_prune(const SignVector& prefix, int depth, const ConstraintSystem& system,
                      const SymmetryGroup& group) {
  auto assigned = [&](int i) { return system.depth_of[i] < depth; };
  for (const auto& g : group.elements) {
    std::array<int, kDimension> pre{};
    for (int i = 0; i < kDimension; ++i) pre[g.image[i]] = i;
    for (int p = 0; p < kDimension; ++p) {
      const int q = pre[p];
      if (!assigned(p) || !assigned(q)) break;
      const int gy = g.sign[q] * prefix.get(q);
      const int y = prefix.get(p);
      if (gy < y) return true;
      if (gy > y) break;
    }
  }
  return false;
}

SearchDomain SearchDomain::full() {
  SearchDomain d;
  d.allowed.fill(7);
  return d;
}

SearchDomain SearchDomain::subcube(const std::vector<int>& free_set) {
  SearchDomain d;
  d.allowed.fill(2);
  for (int i : free_set) d.allowed.at(i) = 7;
  return d;
}

bool SearchDomain::restricted() const {
  return max_support < kDimension || std::any_of(allowed.begin(), allowed.end(), [](auto m) { return m != 7; });
}

std::string SearchDomain::str() const {
  std::string s;
  for (auto m : allowed) s.push_back(static_cast<char>('0' + m));
  return s + ":" + std::to_string(max_support);
}

std::string ShardSpec::str() const {
  return std::to_string(depth) + ":" + std::to_string(index) + "/" + std::to_string(count);
}

bool SearchReport::complete() const {
  if (restricted || static_cast<int>(shards.size()) != shard_count) return false;
  for (int i = 0; i < shard_count; ++i) {
    if (shards[i] != i) return false;
  }
  return true;
}

std::map<long long, long long> SearchReport::abs_histogram() const {
  std::map<long long, long long> out;
  for (const auto& [v, n] : histogram) out[std::llabs(v)] += n;
  return out;
}

std::string write_checkpoint(const Checkpoint& c) {
  std::ostringstream os;
  os << "CHECKPOINT v1\n";
  os << "instance " << c.instance << '\n';
  os << "shard " << c.shard.depth << ' ' << c.shard.index << ' ' << c.shard.count << '\n';
  os << "PATH";
  for (int v : c.path) os << ' ' << v;
  os << '\n';
  os << "nodes " << c.nodes << '\n';
  os << "pruned_bound " << c.pruned_bound << '\n';
  os << "pruned_minimality " << c.pruned_minimality << '\n';
  os << "wall_seconds " << c.wall_seconds << '\n';
  for (const auto& e : c.vectors) os << "vector " << e.x.str() << ' ' << e.selfint << '\n';
  const std::string body = os.str();
  return body + "sha256 " + sha256_hex(body) + '\n';
}

Checkpoint read_checkpoint(const std::string& text) {
  const auto tail = text.rfind("sha256 ");
  if (tail == std::string::npos || (tail > 0 && text[tail - 1] != '\n')) throw SearchError("checkpoint has no checksum");
  const std::string body = text.substr(0, tail);
  std::string digest = text.substr(tail + 7);
  while (!digest.empty() && (digest.back() == '\n' || digest.back() == '\r')) digest.pop_back();
  if (digest != sha256_hex(body)) throw SearchError("checkpoint checksum mismatch");

  Checkpoint c;
  std::istringstream is(body);
  std::string line;
  bool header = false;
  bool have_path = false;
  try {
    while (std::getline(is, line)) {
      std::istringstream ls(line);
      std::string key;
      ls >> key;
      if (key == "CHECKPOINT") {
        std::string version;
        ls >> version;
        if (version != "v1") throw SearchError("unknown checkpoint version");
        header = true;
      } else if (key == "instance") {
        ls >> c.instance;
      } else if (key == "shard") {
        ls >> c.shard.depth >> c.shard.index >> c.shard.count;
      } else if (key == "PATH") {
        int v = 0;
        while (ls >> v) c.path.push_back(v);
        have_path = true;
      } else if (key == "nodes") {
        ls >> c.nodes;
      } else if (key == "pruned_bound") {
        ls >> c.pruned_bound;
      } else if (key == "pruned_minimality") {
        ls >> c.pruned_minimality;
      } else if (key == "wall_seconds") {
        ls >> c.wall_seconds;
      } else if (key == "vector") {
        std::string x;
        long long s = 0;
        ls >> x >> s;
        c.vectors.push_back({SignVector::parse(x), s});
      } else {
        throw SearchError("unknown checkpoint line: " + line);
      }
      if (ls.fail() && key != "PATH") throw SearchError("malformed checkpoint line: " + line);
    }
  } catch (const std::invalid_argument& e) {
    throw SearchError(std::string("malformed checkpoint: ") + e.what());
  }
  if (!header || !have_path) throw SearchError("incomplete checkpoint");
  return c;
}

SearchOutcome dfs_search(const ConstraintSystem& system, const SymmetryGroup& group,
                         const SearchOptions& options, const Checkpoint* resume, CheckpointSink sink,
                         void* sink_context) {
  Engine engine(system, group, options);
  return engine.run(resume, sink, sink_context);
}

SearchReport run_shards(const ConstraintSystem& system, const SymmetryGroup& group,
                        const SearchOptions& options, int shard_depth, int shard_count, int threads) {
  std::vector<SearchReport> reports(shard_count);
  std::vector<bool> done(shard_count, false);
  std::atomic<int> next{0};
  std::mutex error_mutex;
  std::string error;
  auto worker = [&] {
    for (int i = next++; i < shard_count; i = next++) {
      try {
        SearchOptions o = options;
        o.shard = {shard_depth, i, shard_count};
        o.checkpoint_every = 0;
        o.stop_after = 0;
        SearchOutcome out = dfs_search(system, group, o);
        if (!out.interrupted) {
          reports[i] = std::move(out.report);
          done[i] = true;
        }
      } catch (const std::exception& e) {
        std::lock_guard lock(error_mutex);
        error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < std::max(1, threads); ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (!error.empty()) throw SearchError(error);
  std::vector<SearchReport> finished;
  for (int i = 0; i < shard_count; ++i) {
    if (done[i]) finished.push_back(std::move(reports[i]));
  }
  return merge_reports(finished);
}

VectorCheck verify_vector(const SignVector& x, const IntersectionData& data) {
  const auto s = support_of(x);
  VectorCheck out;
  out.bounded = true;
  out.even = true;
  auto pairing = [&](const IntMatrix& m, Eigen::Index col, bool by_column) {
    long long total = 0;
    for (int i : s) total += static_cast<long long>(by_column ? m(i, col) : m(col, i)) * x.get(i);
    return total;
  };
  auto check = [&](long long v) {
    if (std::llabs(v) > kConstraintBound) out.bounded = false;
    if (v % 2 != 0) out.even = false;
  };
  for (Eigen::Index r = 0; r < data.Q.rows(); ++r) check(pairing(data.Q, r, false));
  for (Eigen::Index c = 0; c < data.Mb.cols(); ++c) check(pairing(data.Mb, c, true));
  for (Eigen::Index c = 0; c < data.MB.cols(); ++c) check(pairing(data.MB, c, true));
  out.selfint = self_intersection(data.Q, x);
  return out;
}

SearchReport brute_force_subcube(const IntersectionData& data, const SymmetryGroup& group,
                                 const SearchDomain& domain, const std::string& instance,
                                 bool require_even) {
  std::vector<int> free;
  SignVector base;
  for (int i = 0; i < kDimension; ++i) {
    const int n = std::popcount(static_cast<unsigned>(domain.allowed[i]));
    if (n == 0) throw SearchError("empty domain");
    if (n > 1) {
      free.push_back(i);
    } else {
      base.set(i, std::countr_zero(static_cast<unsigned>(domain.allowed[i])) - 1);
    }
  }
  if (free.size() > 13) throw SearchError("brute force limited to 13 free coordinates");
  SearchReport r;
  r.instance = instance;
  r.shards = {0};
  r.restricted = domain.restricted();
  std::vector<int> digit(free.size(), 0);
  while (true) {
    SignVector x = base;
    bool in_domain = true;
    for (std::size_t k = 0; k < free.size(); ++k) {
      x.set(free[k], kValues[digit[k]]);
      if (!domain.allows(free[k], kValues[digit[k]])) in_domain = false;
    }
    if (in_domain && x.support() <= domain.max_support) {
      ++r.nodes;
      const VectorCheck check = verify_vector(x, data);
      if (check.admissible(require_even) && is_canonical(x, group)) r.vectors.push_back({x, check.selfint});
    }
    std::size_t k = 0;
    while (k < free.size() && digit[k] == 2) digit[k++] = 0;
    if (k == free.size()) break;
    ++digit[k];
  }
  finish_report(r);
  return r;
}

SearchReport merge_reports(const std::vector<SearchReport>& reports) {
  SearchReport out;
  for (const auto& r : reports) {
    if (r.empty()) continue;
    if (out.empty()) {
      out = r;
      continue;
    }
    if (r.instance != out.instance || r.shard_depth != out.shard_depth || r.shard_count != out.shard_count ||
        r.restricted != out.restricted) {
      throw SearchError("merging reports of different instances or shard layouts");
    }
    for (int s : r.shards) {
      if (std::find(out.shards.begin(), out.shards.end(), s) != out.shards.end()) {
        throw SearchError("overlapping shard " + std::to_string(s));
      }
      out.shards.push_back(s);
    }
    out.nodes += r.nodes;
    out.pruned_bound += r.pruned_bound;
    out.pruned_minimality += r.pruned_minimality;
    out.wall_seconds += r.wall_seconds;
    out.vectors.insert(out.vectors.end(), r.vectors.begin(), r.vectors.end());
  }
  std::sort(out.shards.begin(), out.shards.end());
  finish_report(out);
  for (std::size_t i = 1; i < out.vectors.size(); ++i) {
    if (out.vectors[i].x == out.vectors[i - 1].x) throw SearchError("vector reported by two shards");
  }
  return out;
}

std::string write_certificate(const SearchReport& report) {
  std::ostringstream os;
  os << "# instance " << report.instance << '\n';
  os << "# restricted " << (report.restricted ? 1 : 0) << '\n';
  os << "# shard_depth " << report.shard_depth << '\n';
  os << "# shard_count " << report.shard_count << '\n';
  os << "# shards";
  for (int s : report.shards) os << ' ' << s;
  os << '\n';
  for (const auto& e : report.vectors) os << e.x.str() << '\t' << e.selfint << '\n';
  os << "# nodes " << report.nodes << '\n';
  os << "# pruned_bound " << report.pruned_bound << '\n';
  os << "# pruned_minimality " << report.pruned_minimality << '\n';
  os << "# vectors " << report.vectors.size() << '\n';
  os << "# histogram";
  for (const auto& [v, n] : report.histogram) os << ' ' << v << ':' << n;
  os << '\n';
  os << "# max_abs " << report.max_abs << '\n';
  return os.str();
}

SearchReport read_certificate(const std::string& text) {
  SearchReport r;
  std::istringstream is(text);
  std::string line;
  long long declared = -1;
  std::map<long long, long long> declared_histogram;
  long long declared_max = -1;
  bool have_instance = false;
  try {
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      if (line[0] != '#') {
        const auto tab = line.find('\t');
        if (tab == std::string::npos) throw SearchError("certificate line without tab");
        r.vectors.push_back({SignVector::parse(line.substr(0, tab)), parse_ll(line.substr(tab + 1))});
        continue;
      }
      std::istringstream ls(line.substr(1));
      std::string key;
      ls >> key;
      if (key == "instance") {
        ls >> r.instance;
        have_instance = true;
      } else if (key == "restricted") {
        int v = 0;
        ls >> v;
        r.restricted = v != 0;
      } else if (key == "shard_depth") {
        ls >> r.shard_depth;
      } else if (key == "shard_count") {
        ls >> r.shard_count;
      } else if (key == "shards") {
        int s = 0;
        while (ls >> s) r.shards.push_back(s);
      } else if (key == "nodes") {
        ls >> r.nodes;
      } else if (key == "pruned_bound") {
        ls >> r.pruned_bound;
      } else if (key == "pruned_minimality") {
        ls >> r.pruned_minimality;
      } else if (key == "vectors") {
        ls >> declared;
      } else if (key == "histogram") {
        std::string item;
        while (ls >> item) {
          const auto colon = item.find(':');
          if (colon == std::string::npos) throw SearchError("bad histogram item");
          declared_histogram[parse_ll(item.substr(0, colon))] = parse_ll(item.substr(colon + 1));
        }
      } else if (key == "max_abs") {
        ls >> declared_max;
      }
    }
  } catch (const std::invalid_argument& e) {
    throw SearchError(std::string("malformed certificate: ") + e.what());
  }
  if (!have_instance) throw SearchError("certificate has no instance line");
  finish_report(r);
  if (declared != static_cast<long long>(r.vectors.size()) || declared_histogram != r.histogram ||
      declared_max != r.max_abs) {
    throw SearchError("certificate footer disagrees with its vectors");
  }
  return r;
}

}  // namespace davis
