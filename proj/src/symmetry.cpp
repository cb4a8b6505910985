#include "davis/symmetry.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <random>
#include <sstream>
#include <string_view>
#include <unordered_set>

namespace davis {

namespace {

struct PermutationHash {
  std::size_t operator()(const SignedPermutation& g) const {
    std::size_t h = 1469598103934665603ULL;
    for (int i = 0; i < kDimension; ++i) {
      h = (h ^ g.image[i]) * 1099511628211ULL;
      h = (h ^ static_cast<std::uint8_t>(g.sign[i])) * 1099511628211ULL;
    }
    return h;
  }
};

/// Signed permutations compared without chi, which they determine.
struct SamePermutation {
  bool operator()(const SignedPermutation& a, const SignedPermutation& b) const {
    return a.image == b.image && a.sign == b.sign;
  }
};

using PermutationSet = std::unordered_set<SignedPermutation, PermutationHash, SamePermutation>;

struct GroupTables {
  std::vector<std::vector<int>> product;  // product[a][b] = index of a * b
  std::vector<int> conjugate;
};

GroupTables group_tables(const FacetGraph& graph) {
  GroupTables t;
  const int n = graph.size();
  t.product.assign(n, std::vector<int>(n, -1));
  t.conjugate.assign(n, -1);
  for (int a = 0; a < n; ++a) {
    t.conjugate[a] = graph.index_of(quaternion_conjugate(graph.centers[a]));
    for (int b = 0; b < n; ++b) {
      t.product[a][b] = graph.index_of(quaternion_product(graph.centers[a], graph.centers[b]));
      if (t.product[a][b] < 0) throw GeometryError("facet set not closed under multiplication");
    }
  }
  return t;
}

std::vector<int> facet_image(const GroupTables& t, const QuaternionMap& m) {
  const int n = static_cast<int>(t.conjugate.size());
  std::vector<int> img(n);
  for (int q = 0; q < n; ++q) {
    const int base = m.conjugate ? t.conjugate[q] : q;
    img[q] = t.product[t.product[m.left][base]][m.right];
  }
  return img;
}

std::map<std::array<int, kCircleLength>, int> circle_lookup(const std::vector<GreatCircle>& circles) {
  std::map<std::array<int, kCircleLength>, int> out;
  for (int i = 0; i < static_cast<int>(circles.size()); ++i) {
    auto key = circles[i].facets;
    std::sort(key.begin(), key.end());
    out[key] = i;
  }
  return out;
}

int image_circle(const std::map<std::array<int, kCircleLength>, int>& lookup, const GreatCircle& c,
                 const std::vector<int>& img) {
  std::array<int, kCircleLength> key{};
  for (int k = 0; k < kCircleLength; ++k) key[k] = img[c.facets[k]];
  std::sort(key.begin(), key.end());
  const auto it = lookup.find(key);
  if (it == lookup.end()) throw GeometryError("symmetry does not map circles to circles");
  return it->second;
}

/// Signs read off the traversal order: consecutive facets map to
/// consecutive facets, forward or backward.
SignedPermutation combinatorial_permutation(const std::vector<GreatCircle>& circles,
                                            const std::map<std::array<int, kCircleLength>, int>& lookup,
                                            const std::vector<int>& img, int chi) {
  SignedPermutation g;
  g.chi = chi;
  for (int i = 0; i < kDimension; ++i) {
    const int j = image_circle(lookup, circles[i], img);
    g.image[i] = static_cast<std::uint8_t>(j);
    g.sign[i] = circles[j].next(img[circles[i].facets[0]]) == img[circles[i].facets[1]] ? 1 : -1;
  }
  return g;
}

PermutationSet closure(const std::vector<SignedPermutation>& generators,
                       std::vector<SignedPermutation>* ordered) {
  PermutationSet seen;
  std::deque<SignedPermutation> queue;
  const SignedPermutation id = SignedPermutation::identity();
  seen.insert(id);
  queue.push_back(id);
  if (ordered) ordered->push_back(id);
  while (!queue.empty()) {
    const SignedPermutation e = queue.front();
    queue.pop_front();
    for (const auto& s : generators) {
      SignedPermutation next = compose(s, e);
      if (seen.insert(next).second) {
        if (ordered) ordered->push_back(next);
        queue.push_back(std::move(next));
      }
    }
  }
  return seen;
}

SignVector random_vector(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> d(-1, 1);
  SignVector x;
  for (int i = 0; i < kDimension; ++i) x.set(i, d(rng));
  return x;
}

std::vector<int> normalized_row(std::vector<int> row) {
  const auto first = std::find_if(row.begin(), row.end(), [](int v) { return v != 0; });
  if (first != row.end() && *first < 0) {
    for (int& v : row) v = -v;
  }
  return row;
}

std::vector<std::vector<int>> constraint_rows(const IntMatrix& m, bool by_rows) {
  std::vector<std::vector<int>> out;
  const Eigen::Index count = by_rows ? m.rows() : m.cols();
  for (Eigen::Index r = 0; r < count; ++r) {
    std::vector<int> row(kDimension);
    for (int i = 0; i < kDimension; ++i) row[i] = by_rows ? m(r, i) : m(i, r);
    out.push_back(std::move(row));
  }
  return out;
}

bool rows_preserved(const SignedPermutation& g, const std::vector<std::vector<int>>& rows) {
  std::vector<std::vector<int>> before;
  std::vector<std::vector<int>> after;
  for (const auto& r : rows) {
    before.push_back(normalized_row(r));
    after.push_back(normalized_row(act(g, r)));
  }
  std::sort(before.begin(), before.end());
  std::sort(after.begin(), after.end());
  return before == after;
}

}  // namespace

SignedPermutation SignedPermutation::identity() {
  SignedPermutation g;
  for (int i = 0; i < kDimension; ++i) {
    g.image[i] = static_cast<std::uint8_t>(i);
    g.sign[i] = 1;
  }
  return g;
}

SignedPermutation SignedPermutation::negation() {
  SignedPermutation g = identity();
  g.sign.fill(-1);
  return g;
}

std::string SignedPermutation::str() const {
  std::ostringstream os;
  for (int i = 0; i < kDimension; ++i) {
    if (i) os << ' ';
    os << sign[i] * (image[i] + 1);
  }
  return os.str();
}

SignedPermutation SignedPermutation::parse(const std::string& line, int chi) {
  std::istringstream is(line);
  SignedPermutation g;
  g.chi = chi;
  std::vector<bool> hit(kDimension, false);
  for (int i = 0; i < kDimension; ++i) {
    int v = 0;
    if (!(is >> v) || v == 0 || std::abs(v) > kDimension || hit[std::abs(v) - 1]) {
      throw std::invalid_argument("malformed signed permutation");
    }
    hit[std::abs(v) - 1] = true;
    g.image[i] = static_cast<std::uint8_t>(std::abs(v) - 1);
    g.sign[i] = v > 0 ? 1 : -1;
  }
  std::string rest;
  if (is >> rest) throw std::invalid_argument("trailing data in signed permutation");
  return g;
}

SignedPermutation compose(const SignedPermutation& g, const SignedPermutation& h) {
  SignedPermutation out;
  for (int i = 0; i < kDimension; ++i) {
    out.image[i] = g.image[h.image[i]];
    out.sign[i] = static_cast<std::int8_t>(h.sign[i] * g.sign[h.image[i]]);
  }
  out.chi = g.chi * h.chi;
  return out;
}

SignedPermutation inverse(const SignedPermutation& g) {
  SignedPermutation out;
  for (int i = 0; i < kDimension; ++i) {
    out.image[g.image[i]] = static_cast<std::uint8_t>(i);
    out.sign[g.image[i]] = g.sign[i];
  }
  out.chi = g.chi;
  return out;
}

SignVector act(const SignedPermutation& g, const SignVector& x) {
  SignVector out;
  for (int i = 0; i < kDimension; ++i) {
    const int v = x.get(i);
    if (v != 0) out.set(g.image[i], g.sign[i] * v);
  }
  return out;
}

std::vector<int> act(const SignedPermutation& g, const std::vector<int>& x) {
  std::vector<int> out(kDimension, 0);
  for (int i = 0; i < kDimension; ++i) out[g.image[i]] = g.sign[i] * x[i];
  return out;
}

SignedPermutation induced_permutation(const Geometry& geo, const std::vector<GreatCircle>& circles,
                                      const QuaternionMap& map) {
  const auto& centers = geo.graph.centers;
  auto apply = [&](const Vec4& q) {
    const Vec4 base = map.conjugate ? quaternion_conjugate(q) : q;
    return quaternion_product(quaternion_product(centers[map.left], base), centers[map.right]);
  };
  const auto lookup = circle_lookup(circles);
  SignedPermutation g;
  g.chi = map.conjugate ? -1 : 1;
  for (int i = 0; i < kDimension; ++i) {
    const Vec4 fu = apply(circles[i].u);
    const Vec4 fv = apply(circles[i].v);
    std::vector<int> img(geo.graph.size(), -1);
    std::array<int, kCircleLength> key{};
    for (int k = 0; k < kCircleLength; ++k) {
      key[k] = geo.graph.index_of(apply(centers[circles[i].facets[k]]));
      if (key[k] < 0) throw GeometryError("map does not preserve the facet set");
    }
    std::sort(key.begin(), key.end());
    const auto it = lookup.find(key);
    if (it == lookup.end()) throw GeometryError("map does not send circles to circles");
    const GreatCircle& target = circles[it->second];
    // (fu, fv) = M (u', v') and the Gram matrix of (u', v') is positive
    // definite, so the cross-Gram determinant has the sign of det M.
    const Golden cross = dot(fu, target.u) * dot(fv, target.v) - dot(fu, target.v) * dot(fv, target.u);
    if (cross.is_zero()) throw GeometryError("image plane is not the target plane");
    g.image[i] = static_cast<std::uint8_t>(it->second);
    g.sign[i] = static_cast<std::int8_t>(cross.sign());
  }
  return g;
}

SymmetryGroup generate_group(const Geometry& geo, const std::vector<GreatCircle>& circles) {
  const int n = geo.graph.size();
  std::vector<QuaternionMap> candidates;
  // Index of the identity quaternion, used as the neutral factor.
  const int one = geo.graph.index_of(Vec4(Golden(1), Golden(0), Golden(0), Golden(0)));
  candidates.push_back({one, one, true});
  for (int a = 0; a < n; ++a) candidates.push_back({a, one, false});
  for (int b = 0; b < n; ++b) candidates.push_back({one, b, false});

  SymmetryGroup group;
  PermutationSet current = closure({}, nullptr);
  for (const auto& m : candidates) {
    SignedPermutation g = induced_permutation(geo, circles, m);
    if (current.count(g)) continue;
    group.generators.push_back(g);
    group.generator_maps.push_back(m);
    current = closure(group.generators, nullptr);
  }

  std::vector<SignedPermutation> ordered;
  current = closure(group.generators, &ordered);
  // chi is multiplicative, so the product over generator words is well
  // defined; closure() composed it along the way.

  // Every map q -> a q b, a conj(q) b must land in the closure and vice versa.
  const GroupTables tables = group_tables(geo.graph);
  const auto lookup = circle_lookup(circles);
  PermutationSet all;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (bool conj : {false, true}) {
        const SignedPermutation g =
            combinatorial_permutation(circles, lookup, facet_image(tables, {a, b, conj}), conj ? -1 : 1);
        const auto it = current.find(g);
        if (it == current.end() || it->chi != g.chi) {
          throw GeometryError("closure misses a quaternionic symmetry");
        }
        all.insert(g);
      }
    }
  }
  if (all.size() != current.size()) throw GeometryError("closure larger than the symmetry set");
  group.polytope_order = static_cast<int>(ordered.size());

  const SignedPermutation neg = SignedPermutation::negation();
  group.generators.push_back(neg);
  group.generator_maps.push_back({one, one, false});  // placeholder for negation
  const std::size_t base = ordered.size();
  for (std::size_t i = 0; i < base; ++i) {
    SignedPermutation h = compose(neg, ordered[i]);
    if (current.count(h)) throw GeometryError("negation already induced by the polytope");
    ordered.push_back(h);
  }
  group.elements = std::move(ordered);
  group.includes_negation = true;
  return group;
}

SymmetryGroup group_from_elements(std::vector<SignedPermutation> elements) {
  SymmetryGroup group;
  PermutationSet wanted(elements.begin(), elements.end());
  PermutationSet current = closure({}, nullptr);
  for (const auto& g : elements) {
    if (current.count(g)) continue;
    group.generators.push_back(g);
    current = closure(group.generators, nullptr);
  }
  if (current.size() != wanted.size()) throw std::invalid_argument("element list is not a group");
  for (const auto& g : elements) {
    if (!current.count(g)) throw std::invalid_argument("element list is not a group");
  }
  const SignedPermutation neg = SignedPermutation::negation();
  group.includes_negation = wanted.count(neg) > 0;
  group.polytope_order = group.includes_negation ? static_cast<int>(elements.size()) / 2
                                                 : static_cast<int>(elements.size());
  group.elements = std::move(elements);
  return group;
}

SignVector canonical_rep(const SignVector& x, const SymmetryGroup& group) {
  SignVector best = x;
  for (const auto& g : group.elements) {
    const SignVector y = act(g, x);
    if (y < best) best = y;
  }
  return best;
}

bool is_canonical(const SignVector& x, const SymmetryGroup& group) {
  for (const auto& g : group.elements) {
    // Position p of g.x holds sign * x[q] for the q with image p.
    std::array<int, kDimension> pre{};
    for (int i = 0; i < kDimension; ++i) pre[g.image[i]] = i;
    for (int p = 0; p < kDimension; ++p) {
      const int q = pre[p];
      const int gx = g.sign[q] * x.get(q);
      const int xp = x.get(p);
      if (gx < xp) return false;
      if (gx > xp) break;
    }
  }
  return true;
}

long long form_value(const IntMatrix& q, const SignVector& x, const SignVector& y) {
  long long total = 0;
  for (int i = 0; i < kDimension; ++i) {
    const int xi = x.get(i);
    if (xi == 0) continue;
    for (int j = 0; j < kDimension; ++j) {
      const int yj = y.get(j);
      if (yj != 0) total += static_cast<long long>(xi) * yj * q(i, j);
    }
  }
  return total;
}

EquivarianceReport verify_equivariance(const SymmetryGroup& group, const IntersectionData& data,
                                       int samples, std::uint64_t seed) {
  EquivarianceReport r;
  const PermutationSet members(group.elements.begin(), group.elements.end());
  if (members.size() != group.elements.size()) {
    r.failure = "duplicate elements";
    return r;
  }

  r.closed = members.count(SignedPermutation::identity()) > 0;
  for (const auto& e : group.elements) {
    for (const auto& s : group.generators) {
      const auto it = members.find(compose(s, e));
      if (it == members.end() || it->chi != s.chi * e.chi) r.closed = false;
    }
  }
  r.inverses = true;
  for (const auto& e : group.elements) {
    if (!members.count(inverse(e))) r.inverses = false;
  }
  if (!r.closed) r.failure = "not closed under generators";

  std::mt19937_64 rng(seed);
  r.form_preserved = true;
  r.zero_pattern_preserved = true;
  r.constraint_rows_preserved = true;
  const auto q_rows = constraint_rows(data.Q, true);
  const auto b_rows = constraint_rows(data.Mb, false);
  const auto bb_rows = constraint_rows(data.MB, false);
  auto check_pair = [&](const SignedPermutation& g) {
    const SignVector x = random_vector(rng);
    const SignVector y = random_vector(rng);
    ++r.samples_checked;
    if (form_value(data.Q, act(g, x), act(g, y)) != g.chi * form_value(data.Q, x, y)) {
      r.form_preserved = false;
      r.failure = "Q(gx, gy) != chi Q(x, y)";
    }
  };
  for (const auto& g : group.generators) {
    for (int s = 0; s < samples; ++s) check_pair(g);
    for (int i = 0; i < kDimension; ++i) {
      for (int j = 0; j < kDimension; ++j) {
        if ((data.Q(i, j) == 0) != (data.Q(g.image[i], g.image[j]) == 0)) {
          r.zero_pattern_preserved = false;
          r.failure = "zero pattern of Q not preserved";
        }
      }
    }
    if (!rows_preserved(g, q_rows) || !rows_preserved(g, b_rows) || !rows_preserved(g, bb_rows)) {
      r.constraint_rows_preserved = false;
      r.failure = "constraint rows not permuted";
    }
  }
  std::uniform_int_distribution<std::size_t> pick(0, group.elements.size() - 1);
  for (int s = 0; s < samples; ++s) check_pair(group.elements[pick(rng)]);
  return r;
}

}  // namespace davis
