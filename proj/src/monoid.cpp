#include "segfib/monoid.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace segfib {

namespace {

using PointSet = std::unordered_set<IntPoint, PointHash, PointEqual>;

bool deadline_passed(const Deadline& deadline) {
  return deadline && std::chrono::steady_clock::now() >= *deadline;
}

std::vector<IntPoint> to_sorted(const PointSet& set) {
  std::vector<IntPoint> out(set.begin(), set.end());
  std::sort(out.begin(), out.end(), LexLess{});
  return out;
}

// Affine chart x = origin + coords^T * basis for a config living in a proper
// affine sublattice.
struct Chart {
  IntPoint origin;
  IntMatrix basis;  // HNF rows

  IntPoint to_local(const IntPoint& p) const {
    auto c = lattice_coordinates(basis, p - origin);
    if (!c) throw GeometryError("chart: point outside the affine lattice");
    return *c;
  }
  IntPoint to_global(const IntPoint& c) const {
    IntPoint out = origin;
    for (Eigen::Index i = 0; i < basis.rows(); ++i) out += c[i] * basis.row(i).transpose();
    return out;
  }
};

struct SliceCounter {
  HRepresentation hrep;
  IntVector lo, hi;
  // Set when only points of k * origin + L are counted.
  std::optional<IntMatrix> span;
  IntPoint origin;

  explicit SliceCounter(const PointConfig& config, bool restrict_to_span) {
    if (config.span().rank() != config.dim())
      throw GeometryError("normalized slices: config is not full-dimensional (normalize it first)");
    auto hull = convex_hull(config.points());
    hrep = hull.hrep;
    const Eigen::Index d = config.dim();
    lo = hull.vertices.front();
    hi = hull.vertices.front();
    for (const auto& v : hull.vertices)
      for (Eigen::Index i = 0; i < d; ++i) {
        lo[i] = std::min(lo[i], v[i]);
        hi[i] = std::max(hi[i], v[i]);
      }
    origin = config.points().front();
    if (restrict_to_span && !config.full_lattice()) span = config.span().basis;
  }

  std::vector<IntPoint> slice(int k) const {
    const Integer kk = k;
    auto pts = enumerate_in_box(hrep.dilate(kk), IntVector(lo * kk), IntVector(hi * kk));
    if (!span) return pts;
    std::vector<IntPoint> out;
    for (auto& p : pts)
      if (lattice_coordinates(*span, p - origin * kk)) out.push_back(std::move(p));
    return out;
  }
};

// Height-by-height comparison of M_A against the lattice points of the
// dilates. With `rule_from` set, stops at the first k >= rule_from without
// gaps; otherwise stops at the first gap.
GapReport scan_gaps(const PointConfig& config, bool restrict_to_span, std::optional<int> rule_from,
                    int k_max, const Deadline& deadline) {
  GapReport report;
  SliceCounter counter(config, restrict_to_span);
  const std::vector<IntPoint>& gens = config.points();
  PointSet current{IntPoint::Zero(config.dim())};
  std::vector<Integer> gv;

  if (rule_from && *rule_from <= 0) {
    report.stop_height = 0;
    return report;
  }
  int k = 1;
  for (; k <= k_max; ++k) {
    PointSet next;
    next.reserve(current.size() * 4);
    for (const auto& p : current)
      for (const auto& g : gens) next.insert(p + g);
    current = std::move(next);

    auto normal = counter.slice(k);
    Integer gaps = Integer(normal.size()) - Integer(current.size());
    gv.push_back(gaps);
    if (gaps > 0) {
      for (const auto& p : normal)
        if (!current.count(p)) {
          report.witnesses.push_back({k, p});
          break;
        }
      if (!rule_from) break;
    } else if (gaps < 0) {
      throw GeometryError("gap scan: generated slice exceeds the normalized slice");
    }
    if (rule_from && gaps == 0 && k >= *rule_from) break;
    if (deadline_passed(deadline)) {
      report.timed_out = true;
      break;
    }
  }
  if (k > k_max) {
    k = k_max;
    report.capped = !gv.empty() && gv.back() > 0;
  }
  report.stop_height = k;
  while (!gv.empty() && gv.back() == 0) gv.pop_back();
  report.gap_vector = gv;
  report.gamma = static_cast<int>(gv.size());
  return report;
}

// Pointed full-dimensional cone: inward facet normals, a strictly positive
// grading and a triangulation into simplicial cones.
struct ConeData {
  std::vector<IntVector> facets;
  IntVector grading;
  std::vector<IntMatrix> simplices;  // generators as columns

  bool contains(const IntPoint& x) const {
    for (const auto& n : facets)
      if (n.dot(x) < 0) return false;
    return true;
  }
};

ConeData analyze_cone(std::vector<IntPoint> gens) {
  if (gens.empty()) throw GeometryError("hilbert_basis: no generators");
  const Eigen::Index d = gens.front().size();
  gens.erase(std::remove_if(gens.begin(), gens.end(), [](const IntPoint& g) { return g.isZero(); }), gens.end());
  if (gens.empty()) throw GeometryError("hilbert_basis: cone is not full-dimensional");
  sort_unique(gens);
  std::vector<IntPoint> pts = gens;
  pts.push_back(IntPoint::Zero(d));
  BoundaryComplex boundary;
  try {
    boundary = simplicial_boundary(pts);
  } catch (const GeometryError&) {
    throw GeometryError("hilbert_basis: cone is not full-dimensional");
  }
  ConeData cone;
  std::vector<IntVector> normals;
  for (std::size_t i = 0; i < boundary.simplices.size(); ++i) {
    const Facet& plane = boundary.planes[i];
    if (plane.offset == 0) {
      normals.push_back(plane.normal);
      continue;
    }
    IntMatrix u(d, d);
    for (Eigen::Index j = 0; j < d; ++j) u.col(j) = boundary.points[boundary.simplices[i][j]];
    cone.simplices.push_back(u);
  }
  sort_unique(normals);
  IntMatrix stacked(static_cast<Eigen::Index>(normals.size()), d);
  for (std::size_t i = 0; i < normals.size(); ++i) stacked.row(i) = normals[i].transpose();
  if (normals.empty() || rank(stacked) < d) throw GeometryError("hilbert_basis: cone is not pointed");
  cone.facets = normals;
  cone.grading = IntVector::Zero(d);
  for (const auto& n : normals) cone.grading += n;
  return cone;
}

// Lattice points sum lambda_i u_i with 0 <= lambda_i < 1.
std::vector<IntPoint> parallelepiped_points(const IntMatrix& u) {
  const Eigen::Index d = u.rows();
  auto h = hermite_normal_form(IntMatrix(u.transpose()));
  IntMatrix lower = h.form.transpose();
  RatMatrix ru = cast_matrix<Rational>(u);
  RatMatrix inv(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    RatVector e = RatVector::Zero(d);
    e[j] = 1;
    inv.col(j) = solve_exact(ru, e);
  }
  std::vector<IntPoint> out;
  IntPoint r = IntPoint::Zero(d);
  std::function<void(Eigen::Index)> rec = [&](Eigen::Index i) {
    if (i == d) {
      RatVector lambda = inv * to_rational(r);
      IntVector fl(d);
      for (Eigen::Index j = 0; j < d; ++j) fl[j] = floor_of(lambda[j]);
      out.push_back(r - u * fl);
      return;
    }
    for (Integer x = 0; x < lower(i, i); ++x) {
      r[i] = x;
      rec(i + 1);
    }
    r[i] = 0;
  };
  rec(0);
  return out;
}

HilbertBasis hilbert_basis_of(const ConeData& cone) {
  PointSet candidates;
  for (const auto& u : cone.simplices) {
    for (Eigen::Index j = 0; j < u.cols(); ++j) candidates.insert(u.col(j));
    for (auto& p : parallelepiped_points(u))
      if (!p.isZero()) candidates.insert(std::move(p));
  }
  std::vector<std::pair<Integer, IntPoint>> order;
  for (const auto& c : candidates) order.emplace_back(cone.grading.dot(c), c);
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return lex_less(a.second, b.second);
  });
  std::vector<std::pair<Integer, IntPoint>> kept;
  for (const auto& [g, c] : order) {
    bool reducible = false;
    for (const auto& [gh, h] : kept) {
      if (gh >= g) break;
      if (cone.contains(IntPoint(c - h))) {
        reducible = true;
        break;
      }
    }
    if (!reducible) kept.emplace_back(g, c);
  }
  HilbertBasis out;
  for (auto& [g, h] : kept) out.generators.push_back(std::move(h));
  std::sort(out.generators.begin(), out.generators.end(), LexLess{});
  return out;
}

// Decides x in Z_{>=0} gens by recursion on the grading, which drops by at
// least one per generator used.
class MembershipOracle {
 public:
  MembershipOracle(const ConeData& cone, const std::vector<IntPoint>& gens) : cone_(cone), gens_(gens) {
    for (const auto& g : gens_) grades_.push_back(cone_.grading.dot(g));
  }

  std::optional<std::vector<IntPoint>> decompose(const IntPoint& x) {
    if (!member(x)) return std::nullopt;
    std::vector<IntPoint> summands;
    IntPoint cur = x;
    while (!cur.isZero()) {
      int i = memo_.at(cur);
      summands.push_back(gens_[i]);
      cur -= gens_[i];
    }
    std::sort(summands.begin(), summands.end(), LexLess{});
    return summands;
  }

 private:
  bool member(const IntPoint& x) {
    if (x.isZero()) return true;
    auto it = memo_.find(x);
    if (it != memo_.end()) return it->second >= 0;
    const Integer gx = cone_.grading.dot(x);
    int found = -1;
    for (std::size_t i = 0; i < gens_.size() && found < 0; ++i) {
      if (grades_[i] > gx) continue;
      IntPoint rest = x - gens_[i];
      if (!cone_.contains(rest)) continue;
      if (member(rest)) found = static_cast<int>(i);
    }
    memo_[x] = found;
    return found >= 0;
  }

  const ConeData& cone_;
  const std::vector<IntPoint>& gens_;
  std::vector<Integer> grades_;
  std::unordered_map<IntPoint, int, PointHash, PointEqual> memo_;
};

}  // namespace

GradedMonoidSlices generated_slices(const PointConfig& config, int k_max) {
  if (k_max < 1) throw std::invalid_argument("generated_slices: k_max must be positive");
  GradedMonoidSlices out;
  out.kind = SliceKind::generated;
  PointSet current{IntPoint::Zero(config.dim())};
  out.height_slices.push_back(to_sorted(current));
  for (int k = 1; k <= k_max; ++k) {
    PointSet next;
    next.reserve(current.size() * 4);
    for (const auto& p : current)
      for (const auto& g : config.points()) next.insert(p + g);
    current = std::move(next);
    out.height_slices.push_back(to_sorted(current));
  }
  return out;
}

GradedMonoidSlices normalized_slices(const PointConfig& config, int k_max) {
  if (k_max < 1) throw std::invalid_argument("normalized_slices: k_max must be positive");
  GradedMonoidSlices out;
  out.kind = SliceKind::normalized;
  SliceCounter counter(config, true);
  out.height_slices.push_back({IntPoint::Zero(config.dim())});
  for (int k = 1; k <= k_max; ++k) out.height_slices.push_back(counter.slice(k));
  return out;
}

GapReport gap_vector(const PointConfig& config, const GapOptions& options) {
  if (options.k_max < 1) throw std::invalid_argument("gap_vector: k_max must be positive");
  PointConfig normal = normalize_lattice(config);
  const int d = static_cast<int>(normal.dim());
  if (d == 0) return GapReport{};
  // The module generators of the normalization sit in degree <= d - 1 when A
  // contains every lattice point of conv(A), and in degree <= d in general.
  SliceCounter counter(normal, false);
  const bool all_points = counter.slice(1).size() == normal.size();
  const int rule_from = all_points ? d - 1 : d;
  return scan_gaps(normal, false, rule_from, options.k_max, options.deadline);
}

HilbertBasis hilbert_basis(const std::vector<IntPoint>& cone_generators) {
  return hilbert_basis_of(analyze_cone(cone_generators));
}

VeryAmpleResult is_very_ample(const PointConfig& config) {
  PointConfig normal = normalize_lattice(config);
  VeryAmpleResult out;
  if (normal.dim() == 0) return out;
  auto hull = convex_hull(normal.points());
  for (const auto& v : hull.vertices) {
    std::vector<IntPoint> gens;
    for (const auto& a : normal.points())
      if (!equal_vectors(a, v)) gens.push_back(a - v);
    ConeData cone = analyze_cone(gens);
    VertexCertificate cert;
    cert.vertex = v;
    cert.hilbert_basis = hilbert_basis_of(cone).generators;
    MembershipOracle oracle(cone, gens);
    for (const auto& h : cert.hilbert_basis) {
      MembershipExpression expr;
      expr.element = h;
      if (auto summands = oracle.decompose(h)) {
        expr.representable = true;
        expr.summands = std::move(*summands);
      } else {
        out.very_ample = false;
      }
      cert.expressions.push_back(std::move(expr));
    }
    out.certificate.push_back(std::move(cert));
  }
  return out;
}

ClosednessResult is_integrally_closed(const PointConfig& config, int k_max) {
  ClosednessResult out;
  const Eigen::Index r = config.span().rank();
  if (r == 0) return out;
  Chart chart{config.points().front(), saturation_basis(config.span())};
  std::vector<IntPoint> local;
  for (const auto& p : config.points()) local.push_back(chart.to_local(p));
  PointConfig c(std::move(local));
  const bool summand = smith_summand_check(config.span(), config.dim());
  std::optional<int> rule;
  if (summand) {
    SliceCounter counter(c, false);
    rule = counter.slice(1).size() == c.size() ? static_cast<int>(r) - 1 : static_cast<int>(r);
  }
  auto report = scan_gaps(c, false, rule, k_max, std::nullopt);
  if (!report.witnesses.empty()) {
    out.integrally_closed = false;
    out.first_failure_height = report.witnesses.front().height;
  } else if (!summand) {
    // No failure below the cap; the lattice index still rules closedness out.
    out.integrally_closed = false;
  }
  return out;
}

bool is_normal(const PointConfig& config, int k_max) {
  GapOptions options;
  options.k_max = k_max;
  auto report = gap_vector(config, options);
  return report.gamma == 0 && !report.capped;
}

bool is_smooth(const LatticePolytope& polytope) {
  const Eigen::Index d = polytope.dim();
  const auto& verts = polytope.vertices();
  const auto& facets = polytope.hrep().facets;
  std::vector<std::vector<int>> tight(verts.size());
  for (std::size_t i = 0; i < verts.size(); ++i)
    for (std::size_t f = 0; f < facets.size(); ++f)
      if (facets[f].slack(verts[i]) == 0) tight[i].push_back(static_cast<int>(f));
  for (std::size_t i = 0; i < verts.size(); ++i) {
    std::vector<IntVector> dirs;
    for (std::size_t j = 0; j < verts.size(); ++j) {
      if (i == j) continue;
      std::vector<int> common;
      std::set_intersection(tight[i].begin(), tight[i].end(), tight[j].begin(), tight[j].end(),
                            std::back_inserter(common));
      IntMatrix normals(static_cast<Eigen::Index>(common.size()), d);
      for (std::size_t k = 0; k < common.size(); ++k) normals.row(k) = facets[common[k]].normal.transpose();
      if (rank(normals) == d - 1) dirs.push_back(primitive(IntVector(verts[j] - verts[i])));
    }
    if (static_cast<Eigen::Index>(dirs.size()) != d) return false;
    IntMatrix m(d, d);
    for (Eigen::Index k = 0; k < d; ++k) m.col(k) = dirs[k];
    if (abs_value(determinant(m)) != 1) return false;
  }
  return true;
}

Rational EhrhartPolynomial::operator()(const Integer& j) const {
  Rational acc = 0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * Rational(j) + *it;
  return acc;
}

EhrhartPolynomial ehrhart_polynomial(const LatticePolytope& polytope) {
  const int d = static_cast<int>(polytope.dim());
  const auto& verts = polytope.vertices();
  IntVector lo = verts.front(), hi = verts.front();
  for (const auto& v : verts)
    for (Eigen::Index i = 0; i < d; ++i) {
      lo[i] = std::min(lo[i], v[i]);
      hi[i] = std::max(hi[i], v[i]);
    }
  auto count = [&](int j) {
    const Integer jj = j;
    return Integer(enumerate_in_box(polytope.hrep().dilate(jj), IntVector(lo * jj), IntVector(hi * jj)).size());
  };
  RatMatrix vander(d + 1, d + 1);
  RatVector values(d + 1);
  for (int j = 0; j <= d; ++j) {
    Rational power = 1;
    for (int e = 0; e <= d; ++e) {
      vander(j, e) = power;
      power *= j;
    }
    values[j] = Rational(count(j));
  }
  RatVector coeffs = solve_exact(vander, values);
  EhrhartPolynomial out;
  out.coefficients.assign(coeffs.data(), coeffs.data() + coeffs.size());
  for (int j = d + 1; j <= d + 2; ++j)
    if (out(j) != Rational(count(j)))
      throw GeometryError("ehrhart_polynomial: interpolation disagrees with a direct count at j = " +
                          std::to_string(j));
  return out;
}

std::vector<IntPoint> config_vertices(const PointConfig& config) {
  if (config.span().rank() == config.dim()) return convex_hull(config.points()).vertices;
  if (config.span().rank() == 0) return config.points();
  Chart chart{config.points().front(), config.span().basis};
  std::vector<IntPoint> local;
  for (const auto& p : config.points()) local.push_back(chart.to_local(p));
  std::vector<IntPoint> out;
  for (const auto& v : convex_hull(local).vertices) out.push_back(chart.to_global(v));
  sort_unique(out);
  return out;
}

PointConfig rarify(const PointConfig& config, int c) {
  if (c < 1) throw std::invalid_argument("rarify: c must be at least 1");
  std::vector<IntPoint> out;
  const Integer shift = c - 1;
  for (const auto& v : config_vertices(config))
    for (const auto& a : config.points()) out.push_back(IntPoint(v * shift + a));
  return PointConfig(std::move(out));
}

bool is_unimodular_simplex(const std::vector<IntPoint>& simplex_vertices) {
  auto span = lattice_span(simplex_vertices);
  if (span.rank() + 1 != static_cast<Eigen::Index>(simplex_vertices.size()))
    throw GeometryError("is_unimodular_simplex: vertices are affinely dependent");
  return smith_summand_check(span, span.ambient_dim);
}

PointConfig lattice_point_config(const LatticePolytope& polytope) { return PointConfig(polytope.lattice_points()); }

}  // namespace segfib
