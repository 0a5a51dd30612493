#pragma once

#include "segfib/geometry.hpp"

#include <array>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace segfib {

class FamilyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A polytope together with its canonical fibration onto `base`.
struct FamilyInstance {
  LatticePolytope polytope;
  AffineMap fibration;
  LatticePolytope base;
};

struct IntervalQuadruple {
  std::array<std::pair<Integer, Integer>, 4> intervals;  // [a_k, b_k]
};

LatticePolytope unit_cube(int d);

// conv((0,0,I1), (1,0,I2), (0,1,I3), (1,1,I4)) over the unit square.
FamilyInstance make_segment_polytope(const IntervalQuadruple& q);

// P([0,1], [0,1], [0,1], [m, m+1]).
FamilyInstance make_pm(long long m);

// x -> alpha(x) <= y <= beta(x) over the base; alpha and beta are affine
// maps to Z^1.
struct NakajimaSpec {
  LatticePolytope base;
  AffineMap alpha;
  AffineMap beta;
};

FamilyInstance make_nakajima(const NakajimaSpec& spec);

// One level of an iterated construction: coefficient vectors of length
// dim + 1 over the current coordinates, constant term last.
struct NakajimaStep {
  IntVector alpha;
  IntVector beta;
};

// Folds the steps from a point; levels[i] is the polytope after step i + 1
// fibered over levels[i - 1] (the point for i = 0).
std::vector<FamilyInstance> make_nakajima_tower(const std::vector<NakajimaStep>& steps);

LatticePolytope product_with_segment(const LatticePolytope& p);

struct FiberEntry {
  IntPoint base;  // x in Q
  IntPoint low;   // endpoints of f^-1(x) cap P
  IntPoint high;
};

struct FibrationCheck {
  bool ok = false;
  std::string failure;  // first violated condition
  IntVector direction;  // primitive generator of ker f, oriented
  std::vector<FiberEntry> fiber_table;
};

FibrationCheck check_fibration(const AffineMap& f, const LatticePolytope& p, const LatticePolytope& q);

}  // namespace segfib
