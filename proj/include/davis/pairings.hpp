#pragma once

// The four families of genus-two surfaces and their intersection numbers
// with the decagon classes a_i.
//
// a_i: the flat decagon span(u_i, v_i) ∩ P, one per great circle.
// A_i: the two ridge pentagons crossed by circle i; paired with a_j as 2δ_ij.
// b_j: the cone from a facet center over an equator of ten edges.
// B_j: two flat pentagons ±P_F spanned by edge midpoints around a ridge F.

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "davis/golden.hpp"
#include "davis/polytope.hpp"

namespace davis {

using IntMatrix = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;

inline constexpr int kConeClassCount = 360;
inline constexpr int kPentagonClassCount = 360;

class PairingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SurfaceKind { kDecagon, kRidgePair, kCone, kPentagon };

/// The letter used for the family: a, A, b, B.
char kind_letter(SurfaceKind kind);

struct SurfaceClass {
  SurfaceKind kind = SurfaceKind::kDecagon;
  int index = 0;
  int genus = 2;
  bool flipped = false;
};

/// Orientation tokens. An empty vector means "canonical" for the whole family;
/// otherwise entry i set reverses class i.
struct OrientationChoice {
  std::vector<bool> circle;
  std::vector<bool> cone;
  std::vector<bool> pentagon;

  bool circle_flipped(int i) const { return !circle.empty() && circle[i]; }
  bool cone_flipped(int j) const { return !cone.empty() && cone[j]; }
  bool pentagon_flipped(int j) const { return !pentagon.empty() && pentagon[j]; }
};

/// b-class: the cone over the equator of `facet` that separates the ridge
/// with `pole` from the ridge with `antipole`.
struct ConeClass {
  int facet = 0;
  int pole = 0;
  int antipole = 0;
  /// Equator vertices in oriented cyclic order.
  std::array<int, 10> equator{};
  bool flipped = false;
};

/// B-class: the pentagon P_F of the representative ridge F (and its mirror
/// -P_F, which shares the oriented basis).
struct PentagonClass {
  std::array<int, 2> ridge{};
  /// Edges whose midpoints are the corners, in oriented cyclic order.
  std::array<int, 5> corners{};
  /// Facet containing the side from corners[k] to corners[k + 1].
  std::array<int, 5> side_facet{};
  Vec4 center;
  Vec4 s1;  // corner 0 - center
  Vec4 s2;  // corner 1 - center
  /// Corner coordinates in the (s1, s2) frame about the center.
  std::array<std::array<Golden, 2>, 5> frame_corners;
  bool flipped = false;
};

struct SurfaceModel {
  std::vector<GreatCircle> circles;
  std::vector<ConeClass> cones;
  std::vector<PentagonClass> pentagons;

  /// All 864 classes in the order a, A, b, B.
  std::vector<SurfaceClass> classes() const;
};

SurfaceModel build_surfaces(const Geometry& geo, const OrientationChoice& choice = {});

/// Nontrivial intersection of the spanning planes, by exact rank.
bool circles_intersect(const GreatCircle& c1, const GreatCircle& c2);
/// Sign of det[u1 v1 u2 v2]; throws std::invalid_argument for meeting circles.
int linking_sign(const GreatCircle& c1, const GreatCircle& c2);
IntMatrix assemble_Q(const std::vector<GreatCircle>& circles);

int pairing_ab_entry(const Geometry& geo, const SurfaceModel& model, int circle, int cone);

/// How a decagon plane meets the affine plane of a pentagon.
enum class PlaneContact {
  kTransverseInterior,  // one point inside each of ±P_F
  kTransverseBoundary,  // a facet center on a side, identified with its partner
  kTransverseOutside,
  kSkew,                // no common point
  kParallel,            // same direction, no common point
  kLineMiss,            // common line missing the pentagon
  kLineSegment,         // common line meeting the pentagon in a segment
};

struct PentagonContact {
  int entry = 0;
  PlaneContact contact = PlaneContact::kSkew;
};

PentagonContact pentagon_contact(const Geometry& geo, const SurfaceModel& model, int circle,
                                 int pentagon);
int pairing_aB_entry(const Geometry& geo, const SurfaceModel& model, int circle, int pentagon);

struct ContactTally {
  int interior = 0;
  int boundary = 0;
  int outside = 0;
  int skew = 0;
  int parallel = 0;
  int line_miss = 0;
  int line_segment = 0;
};

struct IntersectionData {
  IntMatrix Q;   // 72 x 72
  IntMatrix Mb;  // 72 x 360
  IntMatrix MB;  // 72 x 360
  ContactTally contacts;

  /// Q(a_i, A_j) = 2 δ_ij.
  IntMatrix a_A() const { return 2 * IntMatrix::Identity(Q.rows(), Q.rows()); }
};

/// Computes all entries and checks every row/column pattern; throws
/// PairingError naming the offending index.
IntersectionData assemble_matrices(const Geometry& geo, const SurfaceModel& model);

/// The pattern checks alone, for matrices read back from disk.
void check_patterns(const IntersectionData& data);

/// Fraction-free exact determinant.
BigInt det_exact(const IntMatrix& m);

/// Consequences of the matrices through Q^-1: every b and B class has
/// self-intersection 0 and integral pairings with the others.
struct HomologyCheck {
  bool q_invertible = false;
  bool quarter_inverse_integral = false;  // 4 Q^-1 is an integer matrix
  bool ridge_pair_self_zero = false;      // diagonal of 4 Q^-1 vanishes
  bool surfaces_self_zero = false;
  bool surfaces_integral = false;

  bool ok() const {
    return q_invertible && quarter_inverse_integral && ridge_pair_self_zero &&
           surfaces_self_zero && surfaces_integral;
  }
};

HomologyCheck check_homology(const IntersectionData& data);

/// Q conjugated by the signs of `choice` (circle flips on both sides, class
/// flips on columns). Used to predict a rebuild under re-chosen orientations.
IntersectionData reorient(const IntersectionData& data, const OrientationChoice& choice);

}  // namespace davis
