#pragma once

// Symmetries of the 120-cell acting on the 72 circle coordinates.
//
// The maps q -> a q b and q -> a conj(q) b (a, b in the binary icosahedral
// group) permute the facets and therefore the great circles; comparing the
// image of each oriented circle plane with the stored orientation gives a
// sign. Global negation x -> -x is adjoined.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "davis/pairings.hpp"
#include "davis/polytope.hpp"
#include "davis/sign_vector.hpp"

namespace davis {

/// (g x)[image[i]] = sign[i] * x[i]. `chi` is the factor by which the
/// intersection form transforms: Q(g x, g y) = chi * Q(x, y). Orientation
/// reversing maps of the polytope have chi = -1.
struct SignedPermutation {
  std::array<std::uint8_t, kDimension> image{};
  std::array<std::int8_t, kDimension> sign{};
  int chi = 1;

  static SignedPermutation identity();
  static SignedPermutation negation();

  friend bool operator==(const SignedPermutation&, const SignedPermutation&) = default;

  /// group.txt form: 72 signed 1-based image indices.
  std::string str() const;
  static SignedPermutation parse(const std::string& line, int chi);
};

/// g after h.
SignedPermutation compose(const SignedPermutation& g, const SignedPermutation& h);
SignedPermutation inverse(const SignedPermutation& g);

SignVector act(const SignedPermutation& g, const SignVector& x);
/// The same action on an integer coefficient vector of length 72.
std::vector<int> act(const SignedPermutation& g, const std::vector<int>& x);

/// q -> left * (conj ? conj(q) : q) * right, with group elements as indices.
struct QuaternionMap {
  int left = 0;
  int right = 0;
  bool conjugate = false;
};

struct SymmetryGroup {
  std::vector<SignedPermutation> elements;  // identity first
  std::vector<SignedPermutation> generators;
  std::vector<QuaternionMap> generator_maps;
  /// Distinct signed permutations induced by the polytope alone.
  int polytope_order = 0;
  bool includes_negation = false;

  int order() const { return static_cast<int>(elements.size()); }
};

/// Induced signed permutation of one map, with signs from exact plane
/// orientation comparison.
SignedPermutation induced_permutation(const Geometry& geo, const std::vector<GreatCircle>& circles,
                                      const QuaternionMap& map);

/// Greedy generators from {conjugation, left and right multiplications},
/// closure by breadth-first composition, then global negation adjoined.
/// Throws GeometryError if the closure differs from the set induced by all
/// maps q -> a q b and a conj(q) b.
SymmetryGroup generate_group(const Geometry& geo, const std::vector<GreatCircle>& circles);

/// Rebuild a group from stored elements (generators are left empty).
SymmetryGroup group_from_elements(std::vector<SignedPermutation> elements);

/// Lexicographic minimum of the orbit.
SignVector canonical_rep(const SignVector& x, const SymmetryGroup& group);
/// canonical_rep(x) == x, with early exit per element.
bool is_canonical(const SignVector& x, const SymmetryGroup& group);

struct EquivarianceReport {
  bool closed = false;
  bool inverses = false;
  bool form_preserved = false;
  bool zero_pattern_preserved = false;
  bool constraint_rows_preserved = false;
  int samples_checked = 0;
  std::string failure;

  bool ok() const {
    return closed && inverses && form_preserved && zero_pattern_preserved &&
           constraint_rows_preserved;
  }
};

/// Closure and inverses on the full element list; Q(g x, g y) = chi Q(x, y)
/// on `samples` random pairs per generator and on `samples` random
/// (element, x, y) triples; the 72 + 360 + 360 constraint rows permuted up to
/// sign by every generator.
EquivarianceReport verify_equivariance(const SymmetryGroup& group, const IntersectionData& data,
                                       int samples, std::uint64_t seed);

/// Q(x, y) over the cube.
long long form_value(const IntMatrix& q, const SignVector& x, const SignVector& y);

}  // namespace davis
