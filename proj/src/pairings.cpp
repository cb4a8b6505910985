#include "davis/pairings.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>

#include "davis/exact_linalg.hpp"

namespace davis {

namespace {

std::string at(const char* what, int i) {
  std::ostringstream os;
  os << what << " " << i;
  return os.str();
}

/// Component of x orthogonal to the unit vector c.
Vec4 tangential(const Vec4& x, const Vec4& c) { return x - dot(x, c) * c; }

/// Oriented closed cycle through the nodes of a 2-regular edge list.
std::vector<int> trace_cycle(const std::vector<std::array<int, 2>>& links) {
  std::map<int, std::vector<int>> nbr;
  for (const auto& l : links) {
    nbr[l[0]].push_back(l[1]);
    nbr[l[1]].push_back(l[0]);
  }
  for (const auto& [node, list] : nbr) {
    if (list.size() != 2) throw PairingError(at("cycle is not 2-regular at node", node));
  }
  std::vector<int> cycle{nbr.begin()->first};
  int prev = -1;
  while (true) {
    const auto& list = nbr[cycle.back()];
    const int next = list[0] != prev ? list[0] : list[1];
    if (next == cycle.front()) break;
    prev = cycle.back();
    cycle.push_back(next);
    if (cycle.size() > nbr.size()) throw PairingError("cycle does not close");
  }
  if (cycle.size() != nbr.size()) throw PairingError("links form more than one cycle");
  return cycle;
}

ConeClass make_cone(const Geometry& geo, int c, int n, int n2) {
  const auto& lat = geo.lattice;
  const auto& centers = geo.graph.centers;
  std::vector<std::array<int, 2>> links;
  for (std::size_t e = 0; e < lat.edges.size(); ++e) {
    const auto& edge = lat.edges[e];
    if (std::find(edge.begin(), edge.end(), c) == edge.end()) continue;
    bool touches_pole = false;
    for (int v : lat.edge_endpoints[e]) {
      for (int f : lat.vertices[v]) touches_pole = touches_pole || f == n || f == n2;
    }
    if (!touches_pole) links.push_back(lat.edge_endpoints[e]);
  }
  if (links.size() != 10) throw PairingError(at("equator without 10 edges in facet", c));
  std::vector<int> cycle = trace_cycle(links);

  // Orient the sectors (y_a, y_a+1) to face the pole n.
  const Vec4& cc = centers[c];
  const Vec4 toward_pole = tangential(centers[n], cc);
  const Vec4 y0 = lat.vertex_points[cycle[0]] - cc;
  const Vec4 y1 = lat.vertex_points[cycle[1]] - cc;
  const int s = det4(cc, toward_pole, y0, y1).sign();
  if (s == 0) throw PairingError(at("degenerate equator sector in facet", c));
  if (s < 0) std::reverse(cycle.begin() + 1, cycle.end());

  ConeClass cone;
  cone.facet = c;
  cone.pole = n;
  cone.antipole = n2;
  std::copy(cycle.begin(), cycle.end(), cone.equator.begin());
  return cone;
}

std::vector<ConeClass> build_cones(const Geometry& geo) {
  std::vector<ConeClass> cones;
  for (int c = 0; c < geo.graph.size(); ++c) {
    if (geo.graph.antipode[c] < c) continue;
    for (const auto& p : geo.graph.opposite_pairs[c]) cones.push_back(make_cone(geo, c, p[0], p[1]));
  }
  if (static_cast<int>(cones.size()) != kConeClassCount) {
    throw PairingError(at("cone class count", static_cast<int>(cones.size())));
  }
  return cones;
}

/// x with p = lambda * d for some lambda.
bool parallel(const Vec4& p, const Vec4& d) {
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      if (p(i) * d(j) != p(j) * d(i)) return false;
    }
  }
  return true;
}

std::array<Golden, 2> frame_coordinates(const Vec4& x, const Vec4& s1, const Vec4& s2) {
  Eigen::Matrix<Golden, 4, 2> a;
  a.col(0) = s1;
  a.col(1) = s2;
  const auto sol = solve_affine(a, x);
  if (!sol.consistent || sol.kernel.cols() != 0) throw PairingError("point outside pentagon plane");
  return {sol.particular(0), sol.particular(1)};
}

PentagonClass make_pentagon(const Geometry& geo, std::array<int, 2> ridge) {
  const auto& lat = geo.lattice;
  const auto& centers = geo.graph.centers;
  const int ridge_id = lat.ridge_index.at(ridge);

  // One diagonal per edge {c, n, k} of the ridge, lying in facet k.
  std::vector<std::array<int, 2>> diagonals;
  for (std::size_t e = 0; e < lat.edges.size(); ++e) {
    const auto& edge = lat.edges[e];
    if (std::find(edge.begin(), edge.end(), ridge[0]) == edge.end() ||
        std::find(edge.begin(), edge.end(), ridge[1]) == edge.end()) {
      continue;
    }
    int k = -1;
    for (int f : edge) {
      if (f != ridge[0] && f != ridge[1]) k = f;
    }
    const auto& ends = lat.edge_endpoints[e];
    const Vec4 d = lat.vertex_points[ends[1]] - lat.vertex_points[ends[0]];
    std::vector<int> hits;
    for (std::size_t g = 0; g < lat.edges.size(); ++g) {
      const auto& other = lat.edges[g];
      if (std::find(other.begin(), other.end(), k) == other.end()) continue;
      if (parallel(lat.edge_midpoint(static_cast<int>(g)) - centers[k], d)) {
        hits.push_back(static_cast<int>(g));
      }
    }
    if (hits.size() != 2) throw PairingError(at("diagonal without two ends at ridge", ridge_id));
    diagonals.push_back({hits[0], hits[1]});
  }
  if (diagonals.size() != 5) throw PairingError(at("ridge without five edges", ridge_id));
  std::vector<int> cycle = trace_cycle(diagonals);
  if (cycle.size() != 5) throw PairingError(at("small circle is not a pentagon at ridge", ridge_id));

  // Start at the lexicographically smallest corner, toward its smaller neighbor.
  auto point = [&](int edge) { return lat.edge_midpoint(edge); };
  const auto first = std::min_element(cycle.begin(), cycle.end(), [&](int a, int b) {
    return lex_less(point(a), point(b));
  });
  std::rotate(cycle.begin(), first, cycle.end());
  if (lex_less(point(cycle[4]), point(cycle[1]))) std::reverse(cycle.begin() + 1, cycle.end());

  PentagonClass pent;
  pent.ridge = ridge;
  std::copy(cycle.begin(), cycle.end(), pent.corners.begin());
  Vec4 sum = Vec4::Constant(Golden(0));
  for (int e : cycle) sum += point(e);
  pent.center = sum / Golden(5);
  return pent;
}

void finish_pentagon(const Geometry& geo, PentagonClass& pent) {
  const auto& lat = geo.lattice;
  pent.s1 = lat.edge_midpoint(pent.corners[0]) - pent.center;
  pent.s2 = lat.edge_midpoint(pent.corners[1]) - pent.center;
  for (int k = 0; k < 5; ++k) {
    pent.frame_corners[k] =
        frame_coordinates(lat.edge_midpoint(pent.corners[k]) - pent.center, pent.s1, pent.s2);
    // The side from corner k to k+1 is a diagonal of the facet containing both.
    const auto& a = lat.edges[pent.corners[k]];
    const auto& b = lat.edges[pent.corners[(k + 1) % 5]];
    int shared = -1;
    for (int f : a) {
      if (std::find(b.begin(), b.end(), f) != b.end()) {
        if (shared >= 0) throw PairingError("pentagon side in two facets");
        shared = f;
      }
    }
    if (shared < 0) throw PairingError("pentagon side outside every facet");
    pent.side_facet[k] = shared;
  }
}

std::vector<PentagonClass> build_pentagons(const Geometry& geo) {
  const auto& g = geo.graph;
  std::vector<PentagonClass> out;
  for (const auto& ridge : geo.lattice.ridges) {
    std::array<int, 2> mirror{g.antipode[ridge[0]], g.antipode[ridge[1]]};
    std::sort(mirror.begin(), mirror.end());
    if (!(ridge < mirror)) continue;
    out.push_back(make_pentagon(geo, ridge));
  }
  if (static_cast<int>(out.size()) != kPentagonClassCount) {
    throw PairingError(at("pentagon class count", static_cast<int>(out.size())));
  }
  return out;
}

Golden cross2(const std::array<Golden, 2>& a, const std::array<Golden, 2>& b) {
  return a[0] * b[1] - a[1] * b[0];
}

std::array<Golden, 2> minus2(const std::array<Golden, 2>& a, const std::array<Golden, 2>& b) {
  return {a[0] - b[0], a[1] - b[1]};
}

enum class PolygonSide { kInside, kOutside, kEdge, kCorner };

struct Location {
  PolygonSide side = PolygonSide::kOutside;
  int edge = -1;  // side index when kEdge
};

/// Position of q relative to the counterclockwise pentagon.
Location locate(const PentagonClass& pent, const std::array<Golden, 2>& q) {
  int zeros = 0;
  int zero_edge = -1;
  for (int k = 0; k < 5; ++k) {
    const auto& a = pent.frame_corners[k];
    const auto& b = pent.frame_corners[(k + 1) % 5];
    const int s = cross2(minus2(b, a), minus2(q, a)).sign();
    if (s < 0) return {};
    if (s == 0) {
      ++zeros;
      zero_edge = k;
    }
  }
  if (zeros == 0) return {PolygonSide::kInside, -1};
  if (zeros == 1) return {PolygonSide::kEdge, zero_edge};
  return {PolygonSide::kCorner, -1};
}

/// Parameter interval {t : q0 + t q1 in pentagon}: empty, a point, or a segment.
int clip_line(const PentagonClass& pent, const std::array<Golden, 2>& q0,
              const std::array<Golden, 2>& q1) {
  std::optional<Golden> lo;
  std::optional<Golden> hi;
  for (int k = 0; k < 5; ++k) {
    const auto& a = pent.frame_corners[k];
    const auto e = minus2(pent.frame_corners[(k + 1) % 5], a);
    // cross(e, q0 + t q1 - a) >= 0
    const Golden c0 = cross2(e, minus2(q0, a));
    const Golden c1 = cross2(e, q1);
    if (c1.is_zero()) {
      if (c0.sign() < 0) return -1;
      continue;
    }
    const Golden t = -c0 / c1;
    if (c1.sign() > 0) {
      if (!lo || t > *lo) lo = t;
    } else {
      if (!hi || t < *hi) hi = t;
    }
  }
  if (!lo || !hi) throw PairingError("unbounded line clip on a bounded pentagon");
  if (*lo > *hi) return -1;
  return *lo == *hi ? 0 : 1;
}

}  // namespace

char kind_letter(SurfaceKind kind) {
  switch (kind) {
    case SurfaceKind::kDecagon:
      return 'a';
    case SurfaceKind::kRidgePair:
      return 'A';
    case SurfaceKind::kCone:
      return 'b';
    case SurfaceKind::kPentagon:
      return 'B';
  }
  return '?';
}

std::vector<SurfaceClass> SurfaceModel::classes() const {
  std::vector<SurfaceClass> out;
  for (int i = 0; i < static_cast<int>(circles.size()); ++i) {
    out.push_back({SurfaceKind::kDecagon, i, 2, circles[i].reversed});
  }
  for (int i = 0; i < static_cast<int>(circles.size()); ++i) {
    out.push_back({SurfaceKind::kRidgePair, i, 2, circles[i].reversed});
  }
  for (int j = 0; j < static_cast<int>(cones.size()); ++j) {
    out.push_back({SurfaceKind::kCone, j, 2, cones[j].flipped});
  }
  for (int j = 0; j < static_cast<int>(pentagons.size()); ++j) {
    out.push_back({SurfaceKind::kPentagon, j, 2, pentagons[j].flipped});
  }
  return out;
}

SurfaceModel build_surfaces(const Geometry& geo, const OrientationChoice& choice) {
  SurfaceModel model;
  model.circles = geo.circles;
  for (int i = 0; i < static_cast<int>(model.circles.size()); ++i) {
    if (choice.circle_flipped(i)) model.circles[i] = model.circles[i].reversed_copy(geo.graph);
  }
  model.cones = build_cones(geo);
  for (int j = 0; j < kConeClassCount; ++j) {
    if (!choice.cone_flipped(j)) continue;
    auto& eq = model.cones[j].equator;
    std::reverse(eq.begin() + 1, eq.end());
    model.cones[j].flipped = true;
  }
  model.pentagons = build_pentagons(geo);
  for (int j = 0; j < kPentagonClassCount; ++j) {
    auto& pent = model.pentagons[j];
    if (choice.pentagon_flipped(j)) {
      std::reverse(pent.corners.begin() + 1, pent.corners.end());
      pent.flipped = true;
    }
    finish_pentagon(geo, pent);
  }
  return model;
}

bool circles_intersect(const GreatCircle& c1, const GreatCircle& c2) {
  return det4(c1.u, c1.v, c2.u, c2.v).is_zero();
}

int linking_sign(const GreatCircle& c1, const GreatCircle& c2) {
  const int s = det4(c1.u, c1.v, c2.u, c2.v).sign();
  if (s == 0) throw std::invalid_argument("linking_sign of intersecting circles");
  return s;
}

IntMatrix assemble_Q(const std::vector<GreatCircle>& circles) {
  const int n = static_cast<int>(circles.size());
  IntMatrix q = IntMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (circles_intersect(circles[i], circles[j])) continue;
      q(i, j) = q(j, i) = linking_sign(circles[i], circles[j]);
    }
  }
  return q;
}

int pairing_ab_entry(const Geometry& geo, const SurfaceModel& model, int circle, int cone_index) {
  const GreatCircle& circ = model.circles[circle];
  const ConeClass& cone = model.cones[cone_index];
  const int c = cone.facet;
  if (!circ.contains(c)) return 0;

  // The decagon crosses the wall D_c along the line through c in direction t,
  // which passes through the cone apex. Shift it by a generic infinitesimal
  // w and count its signed crossings with the infinite cone sectors.
  const auto& centers = geo.graph.centers;
  const Vec4& cc = centers[c];
  const Vec4 t = tangential(centers[circ.next(c)], cc);
  std::array<Vec4, 10> y;
  for (int a = 0; a < 10; ++a) y[a] = geo.lattice.vertex_points[cone.equator[a]] - cc;

  for (int a = 0; a < 10; ++a) {
    // t inside a closed sector would put the whole segment on the cone.
    Eigen::Matrix<Golden, 4, 2> sector;
    sector.col(0) = y[a];
    sector.col(1) = y[(a + 1) % 10];
    const auto sol = solve_affine(sector, t);
    if (sol.consistent && sol.particular(0).sign() >= 0 && sol.particular(1).sign() >= 0) {
      throw PairingError(at("circle segment lies on a cone sector, circle", circle));
    }
  }

  static const std::array<std::array<int, 4>, 8> kCandidates{{{1, 2, 3, 5},
                                                               {2, -3, 7, 1},
                                                               {-5, 1, 4, 9},
                                                               {3, 8, -2, 7},
                                                               {11, -4, 6, 1},
                                                               {1, 13, 5, -8},
                                                               {7, 3, 17, 2},
                                                               {-2, 9, 1, 19}}};
  for (const auto& cand : kCandidates) {
    const Vec4 w = tangential(Vec4(Golden(cand[0]), Golden(cand[1]), Golden(cand[2]), Golden(cand[3])), cc);
    bool generic = true;
    for (const auto& ya : y) generic = generic && !det4(cc, w, t, ya).is_zero();
    if (!generic) continue;
    int total = 0;
    for (int a = 0; a < 10; ++a) {
      const Vec4& ya = y[a];
      const Vec4& yb = y[(a + 1) % 10];
      const Golden den = det4(cc, ya, yb, t);
      if (den.is_zero()) continue;  // sector parallel to the line
      // w + s t = alpha ya + beta yb
      const Golden alpha = det4(cc, w, yb, t) / den;
      const Golden beta = det4(cc, ya, w, t) / den;
      if (alpha.sign() > 0 && beta.sign() > 0) total += det4(cc, t, ya, yb).sign();
    }
    if (total != 1 && total != -1) {
      throw PairingError(at("cone crossing count not +-1 for circle", circle) +
                         at(", cone", cone_index));
    }
    return total;
  }
  throw PairingError(at("no generic perturbation for circle", circle) + at(", cone", cone_index));
}

PentagonContact pentagon_contact(const Geometry& geo, const SurfaceModel& model, int circle,
                                 int pentagon) {
  const GreatCircle& circ = model.circles[circle];
  const PentagonClass& pent = model.pentagons[pentagon];
  const Vec4& u = circ.u;
  const Vec4& v = circ.v;
  const Golden d = det4(u, v, pent.s1, pent.s2);

  if (!d.is_zero()) {
    // alpha u + beta v = cen + x s1 + y s2; the mirror -P_F gives the same
    // frame point with both signs reversed, so one location serves both.
    const Golden x = -det4(u, v, pent.center, pent.s2) / d;
    const Golden y = -det4(u, v, pent.s1, pent.center) / d;
    const Location loc = locate(pent, {x, y});
    const int s = d.sign();
    switch (loc.side) {
      case PolygonSide::kInside:
        return {2 * s, PlaneContact::kTransverseInterior};
      case PolygonSide::kOutside:
        return {0, PlaneContact::kTransverseOutside};
      case PolygonSide::kCorner:
        throw PairingError(at("decagon passes through a pentagon corner, circle", circle) +
                           at(", pentagon", pentagon));
      case PolygonSide::kEdge: {
        // The point on P_F lies in the wall D_k and its mirror on -P_F lies
        // in D_-k. The gluing x -> x - 2k identifies them only at the center k.
        const Vec4 p = pent.center + x * pent.s1 + y * pent.s2;
        const int k = pent.side_facet[loc.edge];
        if (p != geo.graph.centers[k]) {
          throw PairingError(at("unmatched boundary hit, circle", circle) +
                             at(", pentagon", pentagon));
        }
        return {s, PlaneContact::kTransverseBoundary};
      }
    }
  }

  Eigen::Matrix<Golden, 4, 4> m;
  m.col(0) = u;
  m.col(1) = v;
  m.col(2) = -pent.s1;
  m.col(3) = -pent.s2;
  const auto sol = solve_affine(m, pent.center);
  if (!sol.consistent) {
    return {0, exact_rank(m) == 2 ? PlaneContact::kParallel : PlaneContact::kSkew};
  }
  if (sol.kernel.cols() != 1) throw PairingError("decagon plane contains a pentagon");
  // Both planes sit in a common 3-space through the origin, which also holds
  // the gluing translations along the line; pushing B off that 3-space
  // removes the contact, so it contributes nothing.
  const std::array<Golden, 2> q0{sol.particular(2), sol.particular(3)};
  const std::array<Golden, 2> q1{sol.kernel(2, 0), sol.kernel(3, 0)};
  const int clip = clip_line(pent, q0, q1);
  if (clip == 0) {
    throw PairingError(at("decagon touches a pentagon in a single point, circle", circle) +
                       at(", pentagon", pentagon));
  }
  return {0, clip < 0 ? PlaneContact::kLineMiss : PlaneContact::kLineSegment};
}

int pairing_aB_entry(const Geometry& geo, const SurfaceModel& model, int circle, int pentagon) {
  return pentagon_contact(geo, model, circle, pentagon).entry;
}

void check_patterns(const IntersectionData& data) {
  const IntMatrix& q = data.Q;
  if (q.rows() != kCircleCount || q.cols() != kCircleCount) throw PairingError("Q has wrong shape");
  int zeros_per_row = -1;
  for (int i = 0; i < kCircleCount; ++i) {
    if (q(i, i) != 0) throw PairingError(at("nonzero diagonal of Q at", i));
    int zeros = 0;
    for (int j = 0; j < kCircleCount; ++j) {
      if (q(i, j) != q(j, i)) throw PairingError(at("Q not symmetric at row", i));
      if (std::abs(q(i, j)) > 1) throw PairingError(at("Q entry out of range at row", i));
      zeros += q(i, j) == 0;
    }
    if (zeros_per_row < 0) zeros_per_row = zeros;
    if (zeros != zeros_per_row || zeros != 26) throw PairingError(at("Q zero count differs at row", i));
  }

  auto count = [](const auto& vec, int magnitude) {
    int n = 0;
    for (Eigen::Index k = 0; k < vec.size(); ++k) n += std::abs(vec(k)) == magnitude;
    return n;
  };
  const IntMatrix& mb = data.Mb;
  if (mb.rows() != kCircleCount || mb.cols() != kConeClassCount) throw PairingError("Mb has wrong shape");
  if (mb.cwiseAbs().maxCoeff() > 1) throw PairingError("Mb entry out of range");
  for (int j = 0; j < kConeClassCount; ++j) {
    if (count(mb.col(j), 1) != 6) throw PairingError(at("Mb column without 6 nonzeros:", j));
  }
  for (int i = 0; i < kCircleCount; ++i) {
    if (count(mb.row(i), 1) != 30) throw PairingError(at("Mb row without 30 nonzeros:", i));
  }

  const IntMatrix& mB = data.MB;
  if (mB.rows() != kCircleCount || mB.cols() != kPentagonClassCount) throw PairingError("MB has wrong shape");
  if (mB.cwiseAbs().maxCoeff() > 2) throw PairingError("MB entry out of range");
  for (int j = 0; j < kPentagonClassCount; ++j) {
    if (count(mB.col(j), 2) != 1 || count(mB.col(j), 1) != 20) {
      throw PairingError(at("MB column pattern differs at", j));
    }
  }
  for (int i = 0; i < kCircleCount; ++i) {
    if (count(mB.row(i), 2) != 5 || count(mB.row(i), 1) != 100) {
      throw PairingError(at("MB row pattern differs at", i));
    }
  }
}

IntersectionData assemble_matrices(const Geometry& geo, const SurfaceModel& model) {
  IntersectionData data;
  data.Q = assemble_Q(model.circles);
  for (int i = 0; i < kCircleCount; ++i) {
    for (int j = i + 1; j < kCircleCount; ++j) {
      const bool shares_facets = std::any_of(
          model.circles[i].facets.begin(), model.circles[i].facets.end(),
          [&](int f) { return model.circles[j].contains(f); });
      if (shares_facets != circles_intersect(model.circles[i], model.circles[j])) {
        throw PairingError(at("plane rank disagrees with shared facets, circle", i));
      }
    }
  }
  data.Mb = IntMatrix::Zero(kCircleCount, kConeClassCount);
  for (int i = 0; i < kCircleCount; ++i) {
    for (int j = 0; j < kConeClassCount; ++j) data.Mb(i, j) = pairing_ab_entry(geo, model, i, j);
  }
  data.MB = IntMatrix::Zero(kCircleCount, kPentagonClassCount);
  for (int i = 0; i < kCircleCount; ++i) {
    for (int j = 0; j < kPentagonClassCount; ++j) {
      const PentagonContact pc = pentagon_contact(geo, model, i, j);
      data.MB(i, j) = pc.entry;
      switch (pc.contact) {
        case PlaneContact::kTransverseInterior: ++data.contacts.interior; break;
        case PlaneContact::kTransverseBoundary: ++data.contacts.boundary; break;
        case PlaneContact::kTransverseOutside: ++data.contacts.outside; break;
        case PlaneContact::kSkew: ++data.contacts.skew; break;
        case PlaneContact::kParallel: ++data.contacts.parallel; break;
        case PlaneContact::kLineMiss: ++data.contacts.line_miss; break;
        case PlaneContact::kLineSegment: ++data.contacts.line_segment; break;
      }
    }
  }
  check_patterns(data);
  return data;
}

BigInt det_exact(const IntMatrix& m) {
  return bareiss_determinant(m.cast<BigInt>());
}

HomologyCheck check_homology(const IntersectionData& data) {
  HomologyCheck out;
  const auto inverse = exact_inverse(data.Q.cast<Rational>());
  if (!inverse) return out;
  out.q_invertible = true;

  const Eigen::Index n = data.Q.rows();
  IntMatrix quarter(n, n);  // 4 Q^-1
  out.quarter_inverse_integral = true;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Rational e = 4 * (*inverse)(i, j);
      if (boost::multiprecision::denominator(e) != 1) {
        out.quarter_inverse_integral = false;
        return out;
      }
      quarter(i, j) = boost::multiprecision::numerator(e).convert_to<int>();
    }
  }
  out.ridge_pair_self_zero = quarter.diagonal().isZero();

  // A class with pairing vector p against the a_i is Q^-1 p in the a-basis,
  // so two such classes pair to p^T Q^-1 p'.
  IntMatrix all(n, data.Mb.cols() + data.MB.cols());
  all << data.Mb, data.MB;
  const Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> wide = all.cast<long long>();
  const Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> gram =
      wide.transpose() * quarter.cast<long long>() * wide;
  out.surfaces_self_zero = gram.diagonal().isZero();
  out.surfaces_integral = true;
  for (Eigen::Index i = 0; i < gram.rows(); ++i) {
    for (Eigen::Index j = 0; j < gram.cols(); ++j) {
      if (gram(i, j) % 4 != 0) out.surfaces_integral = false;
    }
  }
  return out;
}

IntersectionData reorient(const IntersectionData& data, const OrientationChoice& choice) {
  IntersectionData out = data;
  const Eigen::Index n = data.Q.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!choice.circle_flipped(static_cast<int>(i))) continue;
    out.Q.row(i) *= -1;
    out.Q.col(i) *= -1;
    out.Mb.row(i) *= -1;
    out.MB.row(i) *= -1;
  }
  for (Eigen::Index j = 0; j < data.Mb.cols(); ++j) {
    if (choice.cone_flipped(static_cast<int>(j))) out.Mb.col(j) *= -1;
  }
  for (Eigen::Index j = 0; j < data.MB.cols(); ++j) {
    if (choice.pentagon_flipped(static_cast<int>(j))) out.MB.col(j) *= -1;
  }
  return out;
}

}  // namespace davis
