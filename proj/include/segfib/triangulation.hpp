#pragma once

#include "segfib/families.hpp"
#include "segfib/geometry.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace segfib {

// Geometric simplicial complex given by its maximal cells. Faces are implicit.
struct TriangulationComplex {
  std::vector<IntPoint> vertices;
  std::vector<std::vector<int>> simplices;  // sorted index sets
  std::optional<std::vector<Rational>> heights;

  Eigen::Index ambient_dim() const { return vertices.empty() ? 0 : vertices.front().size(); }
  std::vector<IntPoint> simplex_points(std::size_t i) const;
};

// Both triangulations of the unit square; `main_diagonal` uses (0,0)-(1,1).
TriangulationComplex square_triangulation(bool main_diagonal);
// The one-vertex complex of Z^0.
TriangulationComplex point_triangulation();
TriangulationComplex single_simplex(const std::vector<IntPoint>& vertices);

struct Verdict {
  bool ok = true;
  std::string detail;  // first failing cell or pair when !ok

  explicit operator bool() const { return ok; }
  static Verdict fail(std::string why) { return Verdict{false, std::move(why)}; }
};

class CompatibilityError : public GeometryError {
 public:
  CompatibilityError(std::vector<IntPoint> face, std::vector<IntPoint> image);

  const std::vector<IntPoint>& face() const { return face_; }
  const std::vector<IntPoint>& image() const { return image_; }

 private:
  std::vector<IntPoint> face_;
  std::vector<IntPoint> image_;
};

// Throws CompatibilityError naming the first face F of P whose image f(F)
// is not a union of faces of delta_q.
void check_face_compatibility(const AffineMap& f, const LatticePolytope& p, const TriangulationComplex& delta_q);

struct SubdivisionCell {
  std::vector<int> base_simplex;  // index into the base triangulation's simplices
  LatticePolytope polytope;
};

struct FiberedSubdivision {
  TriangulationComplex base;
  std::vector<SubdivisionCell> cells;
};

struct SubdivisionOptions {
  bool check_compatibility = true;
};

FiberedSubdivision fibered_subdivision(const AffineMap& f, const LatticePolytope& p,
                                       const TriangulationComplex& delta_q, const SubdivisionOptions& options = {});

// The trivial subdivision with P as its only cell.
FiberedSubdivision trivial_subdivision(const LatticePolytope& p);

struct MarkedPoint {
  IntPoint point;
  IntPoint base;   // f(y)
  Integer height;  // coordinate along ker f
  bool lower = false;
  bool upper = false;
};

std::vector<MarkedPoint> upper_lower_marking(const AffineMap& f, const LatticePolytope& p);

struct PiOptions {
  // Explicit enumeration of the lattice points off the lower boundary.
  std::optional<std::vector<IntPoint>> order;
  // Uniformly random valid enumeration; ignored when `order` is set.
  std::optional<std::uint64_t> seed;
  bool certify_regularity = true;
};

// The lattice points of P not on the lower boundary, in the default
// (lexicographic on base, then height) or a seeded random valid order.
std::vector<IntPoint> enumeration_order(const AffineMap& f, const LatticePolytope& p,
                                        std::optional<std::uint64_t> seed = std::nullopt);

TriangulationComplex build_pi_triangulation(const AffineMap& f, const LatticePolytope& p,
                                            const TriangulationComplex& delta_q, const PiOptions& options = {});

// Pi triangulations of every level of a tower, each over the previous one.
std::vector<TriangulationComplex> tower_triangulations(const std::vector<FamilyInstance>& levels,
                                                       const PiOptions& options = {});

Verdict is_unimodular_triangulation(const TriangulationComplex& t);
Verdict is_flag(const TriangulationComplex& t);

struct RegularityResult {
  bool regular = false;
  std::vector<Rational> heights;  // integral, gap >= 1 at every non-vertex
  // Nonnegative multipliers on the interior ridges when not regular.
  std::vector<Rational> refutation;
  std::string detail;
};

RegularityResult is_regular(const TriangulationComplex& t);

// Checks heights: for every maximal simplex s and vertex v not in s, the
// affine extension of heights|s at v is at most heights(v) - 1.
Verdict check_heights(const TriangulationComplex& t, const std::vector<Rational>& heights);

Verdict verify_complex(const TriangulationComplex& t, const LatticePolytope& p);
Verdict refines(const TriangulationComplex& t, const FiberedSubdivision& r);

}  // namespace segfib
