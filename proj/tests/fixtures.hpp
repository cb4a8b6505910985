#pragma once

#include "davis/pairings.hpp"
#include "davis/polytope.hpp"
#include "davis/symmetry.hpp"

namespace davis::fixture {

inline const Geometry& shared_geometry() {
  static const Geometry g = build_geometry();
  return g;
}

inline const SurfaceModel& shared_surfaces() {
  static const SurfaceModel m = build_surfaces(shared_geometry());
  return m;
}

inline const IntersectionData& shared_matrices() {
  static const IntersectionData d = assemble_matrices(shared_geometry(), shared_surfaces());
  return d;
}

inline const SymmetryGroup& shared_group() {
  static const SymmetryGroup g = generate_group(shared_geometry(), shared_surfaces().circles);
  return g;
}

}  // namespace davis::fixture
