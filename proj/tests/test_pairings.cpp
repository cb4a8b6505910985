#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include <Eigen/LU>
#include <gtest/gtest.h>

#include "davis/pairings.hpp"
#include "fixtures.hpp"

namespace davis {
namespace {

using fixture::shared_geometry;
using fixture::shared_matrices;
using fixture::shared_surfaces;

using P3 = std::array<double, 3>;
using P4 = std::array<double, 4>;

P4 to_double(const Vec4& v) {
  return {v(0).to_double(), v(1).to_double(), v(2).to_double(), v(3).to_double()};
}

double dot4(const P4& a, const P4& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]; }

P4 axpy(double a, const P4& x, const P4& y) {
  return {a * x[0] + y[0], a * x[1] + y[1], a * x[2] + y[2], a * x[3] + y[3]};
}

P4 normalized(const P4& x) {
  const double n = std::sqrt(dot4(x, x));
  return {x[0] / n, x[1] / n, x[2] / n, x[3] / n};
}

double det3(const P3& a, const P3& b, const P3& c) {
  return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
         a[2] * (b[0] * c[1] - b[1] * c[0]);
}

// Gauss linking integral of two great circles after stereographic projection
// from the unit vector `pole`, using an orthonormal frame of pole^⊥.
double gauss_linking(const P4& u1, const P4& v1, const P4& u2, const P4& v2, const P4& pole,
                     const std::array<P4, 3>& frame) {
  constexpr int kSteps = 240;
  auto polygon = [&](const P4& u, const P4& v) {
    const P4 e1 = normalized(u);
    const P4 e2 = normalized(axpy(-dot4(v, e1), e1, v));
    std::vector<P3> pts;
    for (int s = 0; s < kSteps; ++s) {
      const double th = 2 * std::numbers::pi * s / kSteps;
      const P4 x = axpy(std::cos(th), e1, axpy(std::sin(th), e2, {0, 0, 0, 0}));
      const double scale = 1.0 / (1.0 - dot4(x, pole));
      pts.push_back({dot4(x, frame[0]) * scale, dot4(x, frame[1]) * scale, dot4(x, frame[2]) * scale});
    }
    return pts;
  };
  const auto a = polygon(u1, v1);
  const auto b = polygon(u2, v2);
  double total = 0;
  for (int i = 0; i < kSteps; ++i) {
    const P3& a0 = a[i];
    const P3& a1 = a[(i + 1) % kSteps];
    const P3 da{a1[0] - a0[0], a1[1] - a0[1], a1[2] - a0[2]};
    const P3 ma{(a0[0] + a1[0]) / 2, (a0[1] + a1[1]) / 2, (a0[2] + a1[2]) / 2};
    for (int j = 0; j < kSteps; ++j) {
      const P3& b0 = b[j];
      const P3& b1 = b[(j + 1) % kSteps];
      const P3 db{b1[0] - b0[0], b1[1] - b0[1], b1[2] - b0[2]};
      const P3 r{ma[0] - (b0[0] + b1[0]) / 2, ma[1] - (b0[1] + b1[1]) / 2, ma[2] - (b0[2] + b1[2]) / 2};
      const double d = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
      total += det3(r, da, db) / (d * d * d);
    }
  }
  return total / (4 * std::numbers::pi);
}

TEST(Pairings, SelfIntersectingAndMeetingCircles) {
  const auto& circles = shared_surfaces().circles;
  for (std::size_t i = 0; i < circles.size(); ++i) {
    EXPECT_TRUE(circles_intersect(circles[i], circles[i]));
    int meeting = 0;
    for (std::size_t j = 0; j < circles.size(); ++j) {
      if (i == j) continue;
      bool shared = false;
      for (int f : circles[j].facets) shared = shared || circles[i].contains(f);
      EXPECT_EQ(circles_intersect(circles[i], circles[j]), shared);
      meeting += circles_intersect(circles[i], circles[j]);
    }
    EXPECT_EQ(meeting, 25);
  }
  EXPECT_THROW(linking_sign(circles[0], circles[0]), std::invalid_argument);
}

TEST(Pairings, LinkingSignSymmetryAndReversal) {
  const auto& geo = shared_geometry();
  const auto& circles = shared_surfaces().circles;
  for (std::size_t i = 0; i < circles.size(); ++i) {
    for (std::size_t j = 0; j < circles.size(); ++j) {
      if (circles_intersect(circles[i], circles[j])) continue;
      EXPECT_EQ(linking_sign(circles[i], circles[j]), linking_sign(circles[j], circles[i]));
      EXPECT_EQ(linking_sign(circles[i], circles[j].reversed_copy(geo.graph)),
                -linking_sign(circles[i], circles[j]));
    }
  }
}

TEST(Pairings, LinkingSignMatchesGaussIntegral) {
  const auto& circles = shared_surfaces().circles;
  std::mt19937_64 rng(99);
  const P4 pole = normalized({0.31, -0.47, 0.62, 0.55});
  // Orthonormal frame of pole^⊥ completing pole to a positive basis.
  std::array<P4, 3> frame;
  {
    std::array<P4, 4> basis{pole, P4{1, 0, 0, 0}, P4{0, 1, 0, 0}, P4{0, 0, 1, 0}};
    for (int k = 1; k < 4; ++k) {
      for (int m = 0; m < k; ++m) basis[k] = axpy(-dot4(basis[k], basis[m]), basis[m], basis[k]);
      basis[k] = normalized(basis[k]);
    }
    frame = {basis[1], basis[2], basis[3]};
  }
  // The global sign relating det[u1 v1 u2 v2] to the projected linking number
  // is fixed by a coordinate Hopf pair.
  const double hopf = gauss_linking({1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, pole, frame);
  ASSERT_NEAR(std::abs(hopf), 1.0, 0.05);
  const int convention = hopf > 0 ? 1 : -1;

  std::uniform_int_distribution<int> pick(0, kCircleCount - 1);
  int checked = 0;
  while (checked < 100) {
    const int i = pick(rng);
    const int j = pick(rng);
    if (circles_intersect(circles[i], circles[j])) continue;
    const double lk = gauss_linking(to_double(circles[i].u), to_double(circles[i].v),
                                    to_double(circles[j].u), to_double(circles[j].v), pole, frame);
    ASSERT_NEAR(std::abs(lk), 1.0, 0.05) << i << " " << j;
    EXPECT_EQ(convention * (lk > 0 ? 1 : -1), linking_sign(circles[i], circles[j])) << i << " " << j;
    ++checked;
  }
}

TEST(Pairings, QShapeAndDeterminant) {
  const auto& q = shared_matrices().Q;
  EXPECT_TRUE(q == q.transpose());
  EXPECT_TRUE(q.diagonal().isZero());
  for (int i = 0; i < kCircleCount; ++i) {
    EXPECT_EQ((q.row(i).array() == 0).count(), 26);
  }
  EXPECT_EQ(det_exact(q), BigInt(1) << 72);
  EXPECT_EQ(det_exact(IntMatrix::Identity(72, 72)), BigInt(1));
  EXPECT_EQ(det_exact(shared_matrices().a_A()), BigInt(1) << 72);
}

TEST(Pairings, DeterminantAgreesWithFloatingLU) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> e(-2, 2);
  for (int trial = 0; trial < 20; ++trial) {
    IntMatrix m(8, 8);
    for (int i = 0; i < 8; ++i) {
      for (int j = 0; j < 8; ++j) m(i, j) = e(rng);
    }
    const double expected = m.cast<double>().fullPivLu().determinant();
    EXPECT_NEAR(det_exact(m).convert_to<double>(), expected, 1e-6 * std::max(1.0, std::abs(expected)));
  }
}

// The cone over the equator splits the twelve faces of D_c into the pole with
// its five neighbors and the antipole with its five. Crossing toward the pole
// side is positive for the canonical orientation.
TEST(Pairings, ConeEntriesMatchSideRule) {
  const auto& geo = shared_geometry();
  const auto& model = shared_surfaces();
  const auto& mb = shared_matrices().Mb;
  for (int j = 0; j < kConeClassCount; ++j) {
    const auto& cone = model.cones[j];
    int nonzero = 0;
    for (int i = 0; i < kCircleCount; ++i) {
      const auto& circ = model.circles[i];
      if (!circ.contains(cone.facet)) {
        EXPECT_EQ(mb(i, j), 0);
        continue;
      }
      ++nonzero;
      const int next = circ.next(cone.facet);
      const bool pole_side = next == cone.pole || geo.graph.adjacent(next, cone.pole);
      EXPECT_EQ(mb(i, j), pole_side ? 1 : -1) << i << " " << j;
    }
    EXPECT_EQ(nonzero, 6);
  }
}

// Floating oracle: push the segment through the apex off by a random small
// vector and count signed crossings with the actual cone triangles.
TEST(Pairings, ConeEntriesMatchMonteCarloCrossings) {
  const auto& geo = shared_geometry();
  const auto& model = shared_surfaces();
  const auto& mb = shared_matrices().Mb;
  std::mt19937_64 rng(31);
  std::normal_distribution<double> gauss;
  std::uniform_int_distribution<int> pick_cone(0, kConeClassCount - 1);
  for (int trial = 0; trial < 200; ++trial) {
    const int j = pick_cone(rng);
    const auto& cone = model.cones[j];
    const P4 c = to_double(geo.graph.centers[cone.facet]);
    for (int i = 0; i < kCircleCount; ++i) {
      const auto& circ = model.circles[i];
      if (!circ.contains(cone.facet)) continue;
      const P4 nx = to_double(geo.graph.centers[circ.next(cone.facet)]);
      const P4 t = axpy(-dot4(nx, c), c, nx);
      P4 w{gauss(rng), gauss(rng), gauss(rng), gauss(rng)};
      w = axpy(-dot4(w, c), c, w);
      w = normalized(w);
      const P4 start = axpy(1e-3, w, axpy(-1.0, t, c));
      const P4 dir = axpy(2.0, t, {0, 0, 0, 0});
      double crossings = 0;
      for (int a = 0; a < 10; ++a) {
        const P4 ya = axpy(-1.0, c, to_double(geo.lattice.vertex_points[cone.equator[a]]));
        const P4 yb = axpy(-1.0, c, to_double(geo.lattice.vertex_points[cone.equator[(a + 1) % 10]]));
        // start + s dir = c + alpha ya + beta yb, solved in the wall with c.
        Eigen::Matrix4d m;
        Eigen::Vector4d rhs;
        for (int r = 0; r < 4; ++r) {
          m(r, 0) = dir[r];
          m(r, 1) = -ya[r];
          m(r, 2) = -yb[r];
          m(r, 3) = c[r];
          rhs(r) = c[r] - start[r];
        }
        Eigen::Matrix4d o;
        for (int r = 0; r < 4; ++r) {
          o(r, 0) = c[r];
          o(r, 1) = t[r];
          o(r, 2) = ya[r];
          o(r, 3) = yb[r];
        }
        // A sector parallel to the segment is missed by the offset line.
        const double orientation = o.determinant();
        if (std::abs(orientation) < 1e-9) continue;
        const Eigen::Vector4d z = m.fullPivLu().solve(rhs);
        const double s = z(0), alpha = z(1), beta = z(2);
        if (s < 0 || s > 1 || alpha < 0 || beta < 0 || alpha + beta > 1) continue;
        crossings += orientation > 0 ? 1 : -1;
      }
      EXPECT_EQ(crossings, mb(i, j)) << i << " " << j;
    }
  }
}

// |Q(a_i, B_j)| from incidences alone: 2 when circle i runs straight across
// the ridge F or -F; 1 when it passes through exactly one facet center of the
// small circle of F (the five facets k with F + k an edge); 0 otherwise.
TEST(Pairings, PentagonMagnitudesMatchSmallCircleIncidence) {
  const auto& geo = shared_geometry();
  const auto& lat = geo.lattice;
  const auto& model = shared_surfaces();
  const auto& mB = shared_matrices().MB;
  for (int j = 0; j < kPentagonClassCount; ++j) {
    const auto ridge = model.pentagons[j].ridge;
    std::array<int, 2> mirror{geo.graph.antipode[ridge[0]], geo.graph.antipode[ridge[1]]};
    std::sort(mirror.begin(), mirror.end());
    std::vector<int> small_circle;
    for (int k = 0; k < geo.graph.size(); ++k) {
      std::array<int, 3> edge{ridge[0], ridge[1], k};
      std::sort(edge.begin(), edge.end());
      if (lat.edge_index.count(edge)) small_circle.push_back(k);
    }
    ASSERT_EQ(small_circle.size(), 5u);
    for (int i = 0; i < kCircleCount; ++i) {
      const auto& circ = model.circles[i];
      int expected = 0;
      for (const auto& f : {ridge, mirror}) {
        if (circ.contains(f[0]) && (circ.next(f[0]) == f[1] || circ.next(f[1]) == f[0])) expected = 2;
      }
      if (expected == 0) {
        const auto hits = std::count_if(small_circle.begin(), small_circle.end(),
                                        [&](int k) { return circ.contains(k); });
        expected = hits == 1 ? 1 : 0;
      }
      EXPECT_EQ(std::abs(mB(i, j)), expected) << i << " " << j;
    }
  }
}

TEST(Pairings, ContactTallies) {
  const auto& c = shared_matrices().contacts;
  EXPECT_EQ(c.interior, 360);
  EXPECT_EQ(c.boundary, 7200);
  EXPECT_EQ(c.interior + c.boundary + c.outside + c.skew + c.parallel + c.line_miss + c.line_segment,
            kCircleCount * kPentagonClassCount);
}

TEST(Pairings, HomologyConsequences) {
  const HomologyCheck h = check_homology(shared_matrices());
  EXPECT_TRUE(h.q_invertible);
  EXPECT_TRUE(h.quarter_inverse_integral);
  EXPECT_TRUE(h.ridge_pair_self_zero);
  EXPECT_TRUE(h.surfaces_self_zero);
  EXPECT_TRUE(h.surfaces_integral);
}

TEST(Pairings, SurfaceRegistryCounts) {
  const auto classes = shared_surfaces().classes();
  ASSERT_EQ(classes.size(), 864u);
  std::map<char, int> by_kind;
  for (const auto& s : classes) {
    ++by_kind[kind_letter(s.kind)];
    EXPECT_EQ(s.genus, 2);
  }
  EXPECT_EQ(by_kind, (std::map<char, int>{{'A', 72}, {'B', 360}, {'a', 72}, {'b', 360}}));
}

TEST(Pairings, PatternCheckRejectsTamperedMatrices) {
  IntersectionData bad = shared_matrices();
  bad.Mb(0, 0) = bad.Mb(0, 0) == 0 ? 1 : 0;
  EXPECT_THROW(check_patterns(bad), PairingError);
  bad = shared_matrices();
  bad.Q(3, 5) = bad.Q(5, 3) == 0 ? 1 : 0;
  EXPECT_THROW(check_patterns(bad), PairingError);
}

TEST(Pairings, OrientationCocycleOnRebuild) {
  const auto& geo = shared_geometry();
  std::mt19937_64 rng(1234);
  std::bernoulli_distribution coin(0.5);
  OrientationChoice choice;
  for (int i = 0; i < kCircleCount; ++i) choice.circle.push_back(coin(rng));
  for (int j = 0; j < kConeClassCount; ++j) choice.cone.push_back(coin(rng));
  for (int j = 0; j < kPentagonClassCount; ++j) choice.pentagon.push_back(coin(rng));
  const IntersectionData rebuilt = assemble_matrices(geo, build_surfaces(geo, choice));
  const IntersectionData predicted = reorient(shared_matrices(), choice);
  EXPECT_TRUE(rebuilt.Q == predicted.Q);
  EXPECT_TRUE(rebuilt.Mb == predicted.Mb);
  EXPECT_TRUE(rebuilt.MB == predicted.MB);
}

}  // namespace
}  // namespace davis
