#include "davis/polytope.hpp"

#include <numeric>
#include <optional>
#include <set>
#include <sstream>

#include "davis/exact_linalg.hpp"

namespace davis {

Vec4 quaternion_product(const Vec4& a, const Vec4& b) {
  Vec4 out;
  out(0) = a(0) * b(0) - a(1) * b(1) - a(2) * b(2) - a(3) * b(3);
  out(1) = a(0) * b(1) + a(1) * b(0) + a(2) * b(3) - a(3) * b(2);
  out(2) = a(0) * b(2) - a(1) * b(3) + a(2) * b(0) + a(3) * b(1);
  out(3) = a(0) * b(3) + a(1) * b(2) - a(2) * b(1) + a(3) * b(0);
  return out;
}

Vec4 quaternion_conjugate(const Vec4& q) {
  Vec4 out;
  out << q(0), -q(1), -q(2), -q(3);
  return out;
}

Golden dot(const Vec4& a, const Vec4& b) {
  return a(0) * b(0) + a(1) * b(1) + a(2) * b(2) + a(3) * b(3);
}

Golden det4(const Vec4& a, const Vec4& b, const Vec4& c, const Vec4& d) {
  Mat4 m;
  m.col(0) = a;
  m.col(1) = b;
  m.col(2) = c;
  m.col(3) = d;
  return bareiss_determinant(m);
}

bool lex_less(const Vec4& a, const Vec4& b) {
  for (int i = 0; i < 4; ++i) {
    const int s = (a(i) - b(i)).sign();
    if (s != 0) return s < 0;
  }
  return false;
}

std::vector<Vec4> build_group() {
  const Golden half(Rational(1, 2));
  const Golden phi_half = Golden::phi() * half;
  const Golden inv_phi_half = (Golden::phi() - Golden(1)) * half;

  std::vector<Vec4> elements;
  for (int axis = 0; axis < 4; ++axis) {
    for (int s : {1, -1}) {
      Vec4 e = Vec4::Constant(Golden(0));
      e(axis) = Golden(s);
      elements.push_back(e);
    }
  }
  for (int mask = 0; mask < 16; ++mask) {
    Vec4 e;
    for (int i = 0; i < 4; ++i) e(i) = (mask >> i) & 1 ? -half : half;
    elements.push_back(e);
  }
  // Even permutations of (0, +-1, +-phi, +-1/phi) / 2.
  std::array<int, 4> perm{0, 1, 2, 3};
  const std::array<Golden, 4> base{Golden(0), half, phi_half, inv_phi_half};
  do {
    int inversions = 0;
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) inversions += perm[i] > perm[j];
    }
    if (inversions % 2 != 0) continue;
    for (int mask = 0; mask < 8; ++mask) {
      Vec4 e;
      for (int k = 0; k < 4; ++k) {
        Golden value = base[k];
        if (k > 0 && ((mask >> (k - 1)) & 1)) value = -value;
        e(perm[k]) = value;
      }
      elements.push_back(e);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  std::sort(elements.begin(), elements.end(), lex_less);
  std::map<Vec4, int, LexLess> index;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (dot(elements[i], elements[i]) != Golden(1)) {
      throw GeometryError("group element " + std::to_string(i) + " is not a unit quaternion");
    }
    if (!index.emplace(elements[i], static_cast<int>(i)).second) {
      throw GeometryError("duplicate group element");
    }
  }
  if (elements.size() != kFacetCount) {
    throw GeometryError("group has " + std::to_string(elements.size()) + " elements, expected 120");
  }
  for (const auto& a : elements) {
    for (const auto& b : elements) {
      if (!index.contains(quaternion_product(a, b))) {
        throw GeometryError("group is not closed under multiplication");
      }
    }
  }
  return elements;
}

int FacetGraph::index_of(const Vec4& p) const {
  const auto it = index.find(p);
  return it == index.end() ? -1 : it->second;
}

int FacetGraph::opposite_neighbor(int c, int n) const {
  const auto& cc = centers[c];
  const auto& nn = centers[n];
  const Vec4 p = cc * (Golden(2) * dot(nn, cc)) - nn;
  return index_of(p);
}

FacetGraph build_facet_graph(std::vector<Vec4> group) {
  FacetGraph g;
  g.centers = std::move(group);
  const int n = g.size();
  for (int i = 0; i < n; ++i) g.index.emplace(g.centers[i], i);

  // Largest inner product strictly below 1.
  std::optional<Golden> best;
  std::vector<std::vector<Golden>> gram(n, std::vector<Golden>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      Golden ip = dot(g.centers[i], g.centers[j]);
      if (i != j && ip < Golden(1) && (!best || ip > *best)) best = ip;
      gram[i][j] = ip;
      gram[j][i] = std::move(ip);
    }
  }
  if (!best) throw GeometryError("no adjacent facets");
  g.neighbor_inner_product = *best;

  g.neighbors.assign(n, {});
  g.adjacency.assign(n, {});
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && gram[i][j] == *best) {
        g.neighbors[i].push_back(j);
        g.adjacency[i].set(j);
      }
    }
  }

  g.antipode.resize(n);
  for (int i = 0; i < n; ++i) {
    const int a = g.index_of(-g.centers[i]);
    if (a < 0 || a == i) throw GeometryError("antipode missing or fixed for facet " + std::to_string(i));
    g.antipode[i] = a;
  }

  g.opposite_pairs.resize(n);
  for (int c = 0; c < n; ++c) {
    std::set<std::array<int, 2>> pairs;
    for (int nb : g.neighbors[c]) {
      const int op = g.opposite_neighbor(c, nb);
      if (op < 0 || !g.adjacent(c, op) || op == nb) {
        throw GeometryError("opposite neighbor of " + std::to_string(nb) + " around " +
                            std::to_string(c) + " is not a neighbor");
      }
      pairs.insert({std::min(nb, op), std::max(nb, op)});
    }
    if (pairs.size() != 6) {
      throw GeometryError("facet " + std::to_string(c) + " has " + std::to_string(pairs.size()) +
                          " opposite pairs");
    }
    std::copy(pairs.begin(), pairs.end(), g.opposite_pairs[c].begin());
  }
  return g;
}

Vec4 FaceLattice::edge_midpoint(int edge) const {
  const auto& ends = edge_endpoints[edge];
  return (vertex_points[ends[0]] + vertex_points[ends[1]]) *
         Golden(Rational(1, 2));
}

FaceLattice build_face_lattice(const FacetGraph& graph) {
  FaceLattice lat;
  const int n = graph.size();
  for (int a = 0; a < n; ++a) {
    for (int b : graph.neighbors[a]) {
      if (b <= a) continue;
      lat.ridge_index.emplace(std::array<int, 2>{a, b}, static_cast<int>(lat.ridges.size()));
      lat.ridges.push_back({a, b});
      for (int c : graph.neighbors[b]) {
        if (c <= b || !graph.adjacent(a, c)) continue;
        lat.edge_index.emplace(std::array<int, 3>{a, b, c}, static_cast<int>(lat.edges.size()));
        lat.edges.push_back({a, b, c});
        for (int d : graph.neighbors[c]) {
          if (d <= c || !graph.adjacent(a, d) || !graph.adjacent(b, d)) continue;
          lat.vertex_index.emplace(std::array<int, 4>{a, b, c, d}, static_cast<int>(lat.vertices.size()));
          lat.vertices.push_back({a, b, c, d});
        }
      }
    }
  }
  if (lat.ridges.size() != 720 || lat.edges.size() != 1200 || lat.vertices.size() != 600) {
    std::ostringstream os;
    os << "face lattice counts " << lat.ridges.size() << "/" << lat.edges.size() << "/"
       << lat.vertices.size() << ", expected 720/1200/600";
    throw GeometryError(os.str());
  }

  lat.edge_endpoints.assign(lat.edges.size(), {-1, -1});
  std::vector<int> filled(lat.edges.size(), 0);
  for (std::size_t v = 0; v < lat.vertices.size(); ++v) {
    const auto& q = lat.vertices[v];
    for (int skip = 0; skip < 4; ++skip) {
      std::array<int, 3> e{};
      int k = 0;
      for (int i = 0; i < 4; ++i) {
        if (i != skip) e[k++] = q[i];
      }
      const int ei = lat.edge_index.at(e);
      auto& slot = filled[ei];
      if (slot >= 2) throw GeometryError("edge with more than two vertices");
      lat.edge_endpoints[ei][slot++] = static_cast<int>(v);
    }
  }
  for (int f : filled) {
    if (f != 2) throw GeometryError("edge without two vertices");
  }

  lat.vertex_points.reserve(lat.vertices.size());
  for (const auto& q : lat.vertices) {
    Mat4 m;
    for (int i = 0; i < 4; ++i) m.row(i) = graph.centers[q[i]].transpose();
    const auto sol = solve_affine(m, Vec4::Constant(Golden(1)));
    if (!sol.consistent || sol.kernel.cols() != 0) throw GeometryError("degenerate vertex");
    lat.vertex_points.push_back(sol.particular);
  }
  return lat;
}

std::string to_string(GluingKind kind) {
  switch (kind) {
    case GluingKind::kTranslation:
      return "translation";
    case GluingKind::kInversion:
      return "inversion";
  }
  return "unknown";
}

namespace {

int total_orbits(const std::map<int, int>& sizes) {
  int t = 0;
  for (const auto& [size, count] : sizes) t += count;
  return t;
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t a) {
    while (parent_[a] != a) a = parent_[a] = parent_[parent_[a]];
    return a;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::size_t> parent_;
};

template <std::size_t N>
std::map<int, int> face_orbits(const PairingMap& pairing, const std::vector<std::array<int, N>>& faces,
                               const std::map<std::array<int, N>, int>& index) {
  UnionFind uf(faces.size());
  for (std::size_t f = 0; f < faces.size(); ++f) {
    for (int c : faces[f]) {
      const auto image = pairing.map_face(c, faces[f]);
      const auto it = index.find(image);
      if (it == index.end()) {
        throw GeometryError("gluing " + to_string(pairing.kind) + " does not map faces to faces");
      }
      uf.unite(f, it->second);
    }
  }
  std::map<std::size_t, int> sizes;
  for (std::size_t f = 0; f < faces.size(); ++f) ++sizes[uf.find(f)];
  std::map<int, int> profile;
  for (const auto& [root, size] : sizes) ++profile[size];
  return profile;
}

}  // namespace

int OrbitSummary::ridge_orbits() const { return total_orbits(ridge_orbit_sizes); }
int OrbitSummary::edge_orbits() const { return total_orbits(edge_orbit_sizes); }
int OrbitSummary::vertex_orbits() const { return total_orbits(vertex_orbit_sizes); }

int OrbitSummary::euler_characteristic() const {
  return 1 - edge_orbits() + ridge_orbits() - facet_orbits + vertex_orbits();
}

bool OrbitSummary::matches_davis() const {
  return facet_orbits == 60 && ridge_orbit_sizes == std::map<int, int>{{5, 144}} &&
         edge_orbit_sizes == std::map<int, int>{{20, 60}} &&
         vertex_orbit_sizes == std::map<int, int>{{600, 1}};
}

PairingMap make_pairing(GluingKind kind, const FacetGraph& graph) {
  PairingMap p;
  p.kind = kind;
  p.facet_image = graph.antipode;
  p.point_map.assign(graph.size(), std::vector<int>(graph.size(), -1));
  for (int c = 0; c < graph.size(); ++c) {
    const auto& cc = graph.centers[c];
    for (int k = 0; k < graph.size(); ++k) {
      const auto& kk = graph.centers[k];
      Vec4 image = kind == GluingKind::kTranslation ? Vec4(kk - cc * (Golden(2) * dot(kk, cc))) : Vec4(-kk);
      const int idx = graph.index_of(image);
      if (idx < 0) throw GeometryError("gluing " + to_string(kind) + " leaves the facet set");
      p.point_map[c][k] = idx;
    }
    if (p.point_map[c][c] != graph.antipode[c]) {
      throw GeometryError("gluing does not carry a facet to its antipode");
    }
  }
  return p;
}

OrbitSummary quotient_orbits(const PairingMap& pairing, const FaceLattice& lattice) {
  OrbitSummary s;
  std::set<std::array<int, 2>> facet_pairs;
  for (std::size_t c = 0; c < pairing.facet_image.size(); ++c) {
    const int a = static_cast<int>(c);
    const int b = pairing.facet_image[c];
    facet_pairs.insert({std::min(a, b), std::max(a, b)});
  }
  s.facet_orbits = static_cast<int>(facet_pairs.size());
  s.ridge_orbit_sizes = face_orbits(pairing, lattice.ridges, lattice.ridge_index);
  s.edge_orbit_sizes = face_orbits(pairing, lattice.edges, lattice.edge_index);
  s.vertex_orbit_sizes = face_orbits(pairing, lattice.vertices, lattice.vertex_index);
  return s;
}

PairingMap build_pairing(const FacetGraph& graph, const FaceLattice& lattice) {
  std::vector<PairingMap> passing;
  std::ostringstream diagnostics;
  for (GluingKind kind : {GluingKind::kTranslation, GluingKind::kInversion}) {
    PairingMap candidate = make_pairing(kind, graph);
    const OrbitSummary s = quotient_orbits(candidate, lattice);
    diagnostics << to_string(kind) << ": ridges " << s.ridge_orbits() << ", edges " << s.edge_orbits()
                << ", vertices " << s.vertex_orbits() << "; ";
    if (s.matches_davis()) passing.push_back(std::move(candidate));
  }
  if (passing.empty()) {
    throw GeometryError("no gluing candidate matches the (144, 60, 1) orbit profile: " + diagnostics.str());
  }
  if (passing.size() > 1) {
    throw GeometryError("ambiguous gluing, several candidates match: " + diagnostics.str());
  }
  return std::move(passing.front());
}

bool GreatCircle::contains(int facet) const { return position(facet) >= 0; }

int GreatCircle::position(int facet) const {
  for (int i = 0; i < kCircleLength; ++i) {
    if (facets[i] == facet) return i;
  }
  return -1;
}

int GreatCircle::next(int facet) const {
  const int p = position(facet);
  return p < 0 ? -1 : facets[(p + 1) % kCircleLength];
}

GreatCircle GreatCircle::reversed_copy(const FacetGraph& graph) const {
  GreatCircle r = *this;
  for (int i = 1; i < kCircleLength; ++i) {
    r.facets[i] = facets[kCircleLength - i];
  }
  r.u = graph.centers[r.facets[0]];
  r.v = graph.centers[r.facets[1]];
  r.reversed = !reversed;
  return r;
}

std::vector<GreatCircle> build_circles(const FacetGraph& graph) {
  auto walk = [&](int start, int second) {
    std::array<int, kCircleLength> seq{};
    seq[0] = start;
    seq[1] = second;
    for (int k = 2; k < kCircleLength; ++k) {
      const int nxt = graph.opposite_neighbor(seq[k - 1], seq[k - 2]);
      if (nxt < 0) throw GeometryError("great circle walk left the facet set");
      seq[k] = nxt;
    }
    if (graph.opposite_neighbor(seq[9], seq[8]) != start) {
      throw GeometryError("great circle starting at " + std::to_string(start) + " does not close in 10 steps");
    }
    return seq;
  };

  std::set<std::array<int, kCircleLength>> sorted_sets;
  std::vector<std::array<int, kCircleLength>> canonical;
  for (int c = 0; c < graph.size(); ++c) {
    for (int n : graph.neighbors[c]) {
      auto seq = walk(c, n);
      auto key = seq;
      std::sort(key.begin(), key.end());
      if (!sorted_sets.insert(key).second) continue;
      const int first = key[0];
      // Canonical orientation: start at the smallest facet, step to the smaller circle neighbor.
      int pos = 0;
      while (seq[pos] != first) ++pos;
      const int fwd = seq[(pos + 1) % kCircleLength];
      const int bwd = seq[(pos + kCircleLength - 1) % kCircleLength];
      canonical.push_back(walk(first, std::min(fwd, bwd)));
    }
  }
  std::sort(canonical.begin(), canonical.end());
  if (canonical.size() != kCircleCount) {
    throw GeometryError("found " + std::to_string(canonical.size()) + " great circles, expected 72");
  }
  std::vector<GreatCircle> circles;
  circles.reserve(canonical.size());
  for (const auto& seq : canonical) {
    GreatCircle gc;
    gc.facets = seq;
    gc.u = graph.centers[seq[0]];
    gc.v = graph.centers[seq[1]];
    circles.push_back(std::move(gc));
  }
  return circles;
}

Geometry build_geometry() {
  Geometry g;
  g.graph = build_facet_graph(build_group());
  g.lattice = build_face_lattice(g.graph);
  g.pairing = build_pairing(g.graph, g.lattice);
  g.circles = build_circles(g.graph);
  return g;
}

}  // namespace davis
