#pragma once

#include "segfib/geometry.hpp"

#include <chrono>
#include <optional>
#include <vector>

namespace segfib {

enum class SliceKind { generated, normalized };

// Height-graded point sets; slice k holds the first d coordinates of the
// degree-k elements, sorted lexicographically.
struct GradedMonoidSlices {
  std::vector<std::vector<IntPoint>> height_slices;
  SliceKind kind = SliceKind::generated;
};

// Slice k = slice(k-1) + slice(1), deduplicated, for k = 0..k_max.
GradedMonoidSlices generated_slices(const PointConfig& config, int k_max);

// Slice k = lattice points of k * conv(A) lying in k * a_0 + L(A). The
// config must be full-dimensional; normalize it first otherwise.
GradedMonoidSlices normalized_slices(const PointConfig& config, int k_max);

using Deadline = std::optional<std::chrono::steady_clock::time_point>;

struct GapOptions {
  int k_max = 64;
  Deadline deadline;
};

struct GapWitness {
  int height = 0;
  IntPoint point;
};

struct GapReport {
  std::vector<Integer> gap_vector;  // gv_1 .. gv_gamma
  int gamma = 0;
  std::vector<GapWitness> witnesses;
  int stop_height = 0;
  // Stopped at k_max with gaps still present: gamma is a lower bound.
  bool capped = false;
  // Deadline reached before the stopping rule fired.
  bool timed_out = false;
};

// Runs on normalize_lattice(config); witnesses are in those coordinates.
GapReport gap_vector(const PointConfig& config, const GapOptions& options = {});

struct HilbertBasis {
  std::vector<IntPoint> generators;
};

// Throws GeometryError for non-pointed or lower-dimensional cones.
HilbertBasis hilbert_basis(const std::vector<IntPoint>& cone_generators);

struct MembershipExpression {
  IntPoint element;
  bool representable = false;
  std::vector<IntPoint> summands;  // elements of A - v adding up to `element`
};

struct VertexCertificate {
  IntPoint vertex;
  std::vector<IntPoint> hilbert_basis;
  std::vector<MembershipExpression> expressions;
};

struct VeryAmpleResult {
  bool very_ample = true;
  // Coordinates are those of normalize_lattice(config).
  std::vector<VertexCertificate> certificate;
};

VeryAmpleResult is_very_ample(const PointConfig& config);

struct ClosednessResult {
  bool integrally_closed = true;
  std::optional<int> first_failure_height;
};

ClosednessResult is_integrally_closed(const PointConfig& config, int k_max = 64);

// gamma = 0 after normalizing the lattice.
bool is_normal(const PointConfig& config, int k_max = 64);

bool is_smooth(const LatticePolytope& polytope);

struct EhrhartPolynomial {
  std::vector<Rational> coefficients;  // constant term first

  Rational operator()(const Integer& j) const;
  int degree() const { return static_cast<int>(coefficients.size()) - 1; }
};

EhrhartPolynomial ehrhart_polynomial(const LatticePolytope& polytope);

// Vertices of conv(config), also for lower-dimensional configs.
std::vector<IntPoint> config_vertices(const PointConfig& config);

PointConfig rarify(const PointConfig& config, int c);

// Throws GeometryError for affinely dependent input.
bool is_unimodular_simplex(const std::vector<IntPoint>& simplex_vertices);

// Lattice points of a full-dimensional polytope as a config.
PointConfig lattice_point_config(const LatticePolytope& polytope);

}  // namespace segfib
