#pragma once

#include "segfib/linalg.hpp"
#include "segfib/scalar.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace segfib {

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// HNF basis (rows) of a sublattice of Z^d.
struct SublatticeBasis {
  IntMatrix basis;
  Eigen::Index ambient_dim = 0;

  Eigen::Index rank() const { return basis.rows(); }
  bool operator==(const SublatticeBasis& other) const;
};

// <normal, x> >= offset, normal primitive.
struct Facet {
  IntVector normal;
  Integer offset;

  Integer slack(const IntPoint& p) const { return normal.dot(p) - offset; }
};

struct HRepresentation {
  std::vector<Facet> facets;
  Eigen::Index ambient_dim = 0;

  bool contains(const IntPoint& p) const;
  bool contains(const RatVector& p) const;
  // The H-representation of k * P.
  HRepresentation dilate(const Integer& k) const;
};

// x -> matrix * x + offset
struct AffineMap {
  IntMatrix matrix;
  IntVector offset;

  static AffineMap identity(Eigen::Index dim);
  // Drops the last coordinate of R^dim.
  static AffineMap drop_last(Eigen::Index dim);

  Eigen::Index source_dim() const { return matrix.cols(); }
  Eigen::Index target_dim() const { return matrix.rows(); }
  IntVector operator()(const IntVector& x) const { return matrix * x + offset; }
  RatVector apply(const RatVector& x) const;
};

// outer(inner(x))
AffineMap compose(const AffineMap& outer, const AffineMap& inner);

SublatticeBasis lattice_span(const std::vector<IntPoint>& points);

bool smith_summand_check(const SublatticeBasis& sub, Eigen::Index ambient_dim);

// Basis (rows) of the saturation R*L cap Z^d of a sublattice.
IntMatrix saturation_basis(const SublatticeBasis& sub);

// Coordinates c with c^T * basis = x, for x in the row space of an HNF basis.
// Returns nullopt if x is not an integral combination.
std::optional<IntVector> lattice_coordinates(const IntMatrix& hnf_basis, const IntVector& x);

// A finite set of distinct lattice points, sorted lexicographically, with
// its affine lattice cached.
class PointConfig {
 public:
  PointConfig() = default;
  explicit PointConfig(std::vector<IntPoint> points);

  Eigen::Index dim() const { return dim_; }
  std::size_t size() const { return points_.size(); }
  const std::vector<IntPoint>& points() const { return points_; }
  const SublatticeBasis& span() const { return span_; }
  bool full_lattice() const;

 private:
  Eigen::Index dim_ = 0;
  std::vector<IntPoint> points_;
  SublatticeBasis span_;
};

PointConfig normalize_lattice(const PointConfig& config);

// Simplicial boundary of a full-dimensional hull: `simplices` index into
// `points` (sorted, deduplicated input).
struct BoundaryComplex {
  std::vector<IntPoint> points;
  std::vector<std::vector<int>> simplices;
  std::vector<Facet> planes;  // supporting hyperplane of each simplex
};

BoundaryComplex simplicial_boundary(const std::vector<IntPoint>& points);

struct HullResult {
  std::vector<IntPoint> vertices;
  HRepresentation hrep;
};

HullResult convex_hull(const std::vector<IntPoint>& points);

// All integer points of a bounded polyhedron, lexicographically sorted.
std::vector<IntPoint> enumerate_lattice_points(const HRepresentation& hrep);

// Vertices of the polyhedron {hrep}; throws GeometryError when unbounded.
std::vector<RatVector> polyhedron_vertices(const HRepresentation& hrep);

// Full-dimensional lattice polytope: sorted vertices plus facets.
class LatticePolytope {
 public:
  LatticePolytope() = default;
  static LatticePolytope from_points(const std::vector<IntPoint>& points);

  Eigen::Index dim() const { return hrep_.ambient_dim; }
  const std::vector<IntPoint>& vertices() const { return vertices_; }
  const HRepresentation& hrep() const { return hrep_; }
  bool contains(const IntPoint& p) const { return hrep_.contains(p); }

  std::vector<IntPoint> lattice_points() const;
  LatticePolytope dilate(const Integer& k) const;
  // d! * Euclidean volume.
  Integer normalized_volume() const;
  // Vertex indices lying on each facet, aligned with hrep().facets.
  std::vector<std::vector<int>> facet_vertex_sets() const;
  // Every nonempty face as a sorted vertex-index set, including P itself.
  std::vector<std::vector<int>> faces() const;

 private:
  std::vector<IntPoint> vertices_;
  HRepresentation hrep_;
};

// Lattice points of a box-bounded H-polytope, using the given box.
std::vector<IntPoint> enumerate_in_box(const HRepresentation& hrep, const IntVector& lo,
                                       const IntVector& hi);

// Normalized volume of conv(points) measured in the affine lattice
// origin + Z * rows(basis). The points must lie in that affine lattice; a
// hull of lower dimension than rank(basis) has volume 0.
Integer relative_normalized_volume(const std::vector<IntPoint>& points, const IntPoint& origin,
                                   const IntMatrix& basis);

}  // namespace segfib
