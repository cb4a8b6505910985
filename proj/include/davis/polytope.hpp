#pragma once

// Combinatorics of the 120-cell and the Davis side pairing.
//
// Facets are identified with the 120 elements of the binary icosahedral group
// (their centers on S^3). Ridges, edges and vertices are the 2-, 3- and
// 4-cliques of the facet adjacency graph.

#include <algorithm>
#include <array>
#include <bitset>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "davis/golden.hpp"

namespace davis {

using Vec4 = Eigen::Matrix<Golden, 4, 1>;
using Mat4 = Eigen::Matrix<Golden, 4, 4>;

inline constexpr int kFacetCount = 120;
inline constexpr int kCircleCount = 72;
inline constexpr int kCircleLength = 10;

/// Raised when an exact construction step fails one of its own checks.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Hamilton product, coordinates ordered (w, x, y, z).
Vec4 quaternion_product(const Vec4& a, const Vec4& b);
Vec4 quaternion_conjugate(const Vec4& q);
Golden dot(const Vec4& a, const Vec4& b);
/// det[a b c d] with the vectors as columns, in the standard orientation of R^4.
Golden det4(const Vec4& a, const Vec4& b, const Vec4& c, const Vec4& d);
/// Lexicographic order on coordinate tuples.
bool lex_less(const Vec4& a, const Vec4& b);

struct LexLess {
  bool operator()(const Vec4& a, const Vec4& b) const { return lex_less(a, b); }
};

/// The binary icosahedral group as 120 unit quaternions, sorted
/// lexicographically. Throws GeometryError if closure or normalization fails.
std::vector<Vec4> build_group();

struct FacetGraph {
  std::vector<Vec4> centers;
  std::vector<std::vector<int>> neighbors;  // sorted, 12 per facet
  std::vector<std::bitset<kFacetCount>> adjacency;
  /// Six (n, n') pairs per facet with n < n', sorted.
  std::vector<std::array<std::array<int, 2>, 6>> opposite_pairs;
  std::vector<int> antipode;
  /// The common inner product of adjacent centers.
  Golden neighbor_inner_product;

  int size() const { return static_cast<int>(centers.size()); }
  bool adjacent(int a, int b) const { return adjacency[a].test(b); }
  /// Index of the exact point, or -1.
  int index_of(const Vec4& p) const;
  /// Neighbor of c across from n, i.e. the center 2<n,c>c - n.
  int opposite_neighbor(int c, int n) const;

  std::map<Vec4, int, LexLess> index;
};

FacetGraph build_facet_graph(std::vector<Vec4> group);

struct FaceLattice {
  std::vector<std::array<int, 2>> ridges;
  std::vector<std::array<int, 3>> edges;
  std::vector<std::array<int, 4>> vertices;
  /// Two vertex indices per edge.
  std::vector<std::array<int, 2>> edge_endpoints;
  /// Position of each vertex of the polytope {x : <x, c> <= 1}.
  std::vector<Vec4> vertex_points;

  std::map<std::array<int, 2>, int> ridge_index;
  std::map<std::array<int, 3>, int> edge_index;
  std::map<std::array<int, 4>, int> vertex_index;

  Vec4 edge_midpoint(int edge) const;
};

FaceLattice build_face_lattice(const FacetGraph& graph);

enum class GluingKind {
  kTranslation,  // x -> x - 2<x,c>c on the centers; Euclidean translation of the facet
  kInversion,    // x -> -x
};

std::string to_string(GluingKind kind);

struct OrbitSummary {
  int facet_orbits = 0;
  std::map<int, int> ridge_orbit_sizes;   // orbit size -> number of orbits
  std::map<int, int> edge_orbit_sizes;
  std::map<int, int> vertex_orbit_sizes;

  int ridge_orbits() const;
  int edge_orbits() const;
  int vertex_orbits() const;
  /// 1 - edges + ridges - facets + 1 (one 4-cell, the interior of P).
  int euler_characteristic() const;
  bool matches_davis() const;
};

/// Side pairing: facet c is glued to facet antipode(c) by a map that sends
/// every facet center k to point_map[c][k].
struct PairingMap {
  GluingKind kind = GluingKind::kTranslation;
  std::vector<int> facet_image;
  std::vector<std::vector<int>> point_map;

  template <std::size_t N>
  std::array<int, N> map_face(int facet, const std::array<int, N>& face) const;
};

PairingMap make_pairing(GluingKind kind, const FacetGraph& graph);
OrbitSummary quotient_orbits(const PairingMap& pairing, const FaceLattice& lattice);

/// Tries every gluing candidate and keeps the one whose orbit profile is
/// (144 x 5, 60 x 20, 1 x 600). Throws GeometryError if none or several pass.
PairingMap build_pairing(const FacetGraph& graph, const FaceLattice& lattice);

struct GreatCircle {
  /// Facets in traversal order.
  std::array<int, kCircleLength> facets{};
  /// Oriented basis of the spanning plane: centers of facets[0], facets[1].
  Vec4 u;
  Vec4 v;
  bool reversed = false;

  bool contains(int facet) const;
  /// Position of a facet in the traversal, or -1.
  int position(int facet) const;
  int next(int facet) const;
  GreatCircle reversed_copy(const FacetGraph& graph) const;
};

/// The 72 great circles, indexed by their canonical facet sequence: each
/// starts at its smallest facet index and proceeds toward the smaller of the
/// two neighbors on the circle.
std::vector<GreatCircle> build_circles(const FacetGraph& graph);

struct Geometry {
  FacetGraph graph;
  FaceLattice lattice;
  PairingMap pairing;
  std::vector<GreatCircle> circles;
};

Geometry build_geometry();

template <std::size_t N>
std::array<int, N> PairingMap::map_face(int facet, const std::array<int, N>& face) const {
  std::array<int, N> out{};
  const auto& m = point_map[facet];
  for (std::size_t i = 0; i < N; ++i) out[i] = m[face[i]];
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace davis
