#include "segfib/geometry.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace segfib {

namespace {

void check_dims(const std::vector<IntPoint>& points, Eigen::Index d, const char* what) {
  for (const auto& p : points)
    if (p.size() != d) throw GeometryError(std::string(what) + ": points of different dimensions");
}

// Calls fn(indices) for every k-subset of {0..n-1} in lexicographic order.
template <typename Fn>
void for_each_combination(int n, int k, Fn&& fn) {
  if (k > n || k < 0) return;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// Generalized cross product of the (d-1) rows of `rows` (a (d-1) x d matrix).
IntVector orthogonal_vector(const IntMatrix& rows) {
  const Eigen::Index d = rows.cols();
  IntVector n(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    IntMatrix minor(rows.rows(), d - 1);
    for (Eigen::Index j = 0, c = 0; j < d; ++j) {
      if (j == i) continue;
      minor.col(c++) = rows.col(j);
    }
    Integer det = determinant(minor);
    n[i] = (i % 2 == 0) ? det : Integer(-det);
  }
  return n;
}

bool facet_less(const Facet& a, const Facet& b) {
  if (lex_less(a.normal, b.normal)) return true;
  if (lex_less(b.normal, a.normal)) return false;
  return a.offset < b.offset;
}

bool facet_equal(const Facet& a, const Facet& b) {
  return a.offset == b.offset && equal_vectors(a.normal, b.normal);
}

// Hyperplane through the given points, oriented so that `interior_sum`
// (a sum of `weight` points of the hull) lies strictly on the positive side.
Facet oriented_plane(const std::vector<IntPoint>& pts, const std::vector<int>& idx,
                     const IntVector& interior_sum, const Integer& weight) {
  const Eigen::Index d = pts[idx[0]].size();
  IntMatrix rows(static_cast<Eigen::Index>(idx.size()) - 1, d);
  for (std::size_t i = 1; i < idx.size(); ++i) rows.row(i - 1) = (pts[idx[i]] - pts[idx[0]]).transpose();
  IntVector n = primitive(orthogonal_vector(rows));
  Integer off = n.dot(pts[idx[0]]);
  Integer side = n.dot(interior_sum) - weight * off;
  if (side == 0) throw GeometryError("convex_hull: degenerate facet");
  if (side < 0) {
    n = -n;
    off = -off;
  }
  return Facet{n, off};
}

}  // namespace

bool SublatticeBasis::operator==(const SublatticeBasis& other) const {
  if (ambient_dim != other.ambient_dim || basis.rows() != other.basis.rows()) return false;
  for (Eigen::Index i = 0; i < basis.rows(); ++i)
    for (Eigen::Index j = 0; j < basis.cols(); ++j)
      if (basis(i, j) != other.basis(i, j)) return false;
  return true;
}

bool HRepresentation::contains(const IntPoint& p) const {
  for (const auto& f : facets)
    if (f.normal.dot(p) < f.offset) return false;
  return true;
}

bool HRepresentation::contains(const RatVector& p) const {
  for (const auto& f : facets) {
    Rational s = 0;
    for (Eigen::Index i = 0; i < p.size(); ++i) s += Rational(f.normal[i]) * p[i];
    if (s < Rational(f.offset)) return false;
  }
  return true;
}

HRepresentation HRepresentation::dilate(const Integer& k) const {
  HRepresentation out = *this;
  for (auto& f : out.facets) f.offset *= k;
  return out;
}

AffineMap AffineMap::identity(Eigen::Index dim) {
  return AffineMap{IntMatrix::Identity(dim, dim), IntVector::Zero(dim)};
}

AffineMap AffineMap::drop_last(Eigen::Index dim) {
  if (dim < 1) throw GeometryError("drop_last: dimension must be positive");
  IntMatrix m = IntMatrix::Zero(dim - 1, dim);
  for (Eigen::Index i = 0; i + 1 < dim; ++i) m(i, i) = 1;
  return AffineMap{m, IntVector::Zero(dim - 1)};
}

RatVector AffineMap::apply(const RatVector& x) const {
  RatVector out(target_dim());
  for (Eigen::Index i = 0; i < target_dim(); ++i) {
    Rational s = Rational(offset[i]);
    for (Eigen::Index j = 0; j < source_dim(); ++j) s += Rational(matrix(i, j)) * x[j];
    out[i] = s;
  }
  return out;
}

AffineMap compose(const AffineMap& outer, const AffineMap& inner) {
  if (outer.source_dim() != inner.target_dim()) throw GeometryError("compose: dimension mismatch");
  return AffineMap{outer.matrix * inner.matrix, outer.matrix * inner.offset + outer.offset};
}

SublatticeBasis lattice_span(const std::vector<IntPoint>& points) {
  if (points.empty()) throw GeometryError("lattice_span: need at least one point");
  const Eigen::Index d = points.front().size();
  check_dims(points, d, "lattice_span");
  IntMatrix diffs(static_cast<Eigen::Index>(points.size()) - 1, d);
  for (std::size_t i = 1; i < points.size(); ++i) diffs.row(i - 1) = (points[i] - points[0]).transpose();
  SublatticeBasis out;
  out.ambient_dim = d;
  out.basis = hermite_normal_form(diffs).form;
  if (out.basis.rows() == 0) out.basis = IntMatrix(0, d);
  return out;
}

bool smith_summand_check(const SublatticeBasis& sub, Eigen::Index ambient_dim) {
  if (sub.rank() > ambient_dim) throw GeometryError("smith_summand_check: rank exceeds dimension");
  if (sub.rank() == 0) return true;
  auto snf = smith_normal_form(sub.basis);
  return std::all_of(snf.divisors.begin(), snf.divisors.end(), [](const Integer& x) { return x == 1; });
}

IntMatrix saturation_basis(const SublatticeBasis& sub) {
  if (sub.rank() == 0) return IntMatrix(0, sub.ambient_dim);
  auto snf = smith_normal_form(sub.basis);
  // rows(basis) = left^-1 * D * right^-1, so the saturation is spanned by the
  // first rank rows of right^-1.
  IntMatrix right_inv = hermite_normal_form(snf.right).transform;
  IntMatrix rows = right_inv.topRows(sub.rank());
  return hermite_normal_form(rows).form;
}

std::optional<IntVector> lattice_coordinates(const IntMatrix& hnf_basis, const IntVector& x) {
  IntVector residual = x;
  IntVector coords(hnf_basis.rows());
  for (Eigen::Index i = 0; i < hnf_basis.rows(); ++i) {
    Eigen::Index pivot = 0;
    while (pivot < hnf_basis.cols() && hnf_basis(i, pivot) == 0) ++pivot;
    if (pivot == hnf_basis.cols()) return std::nullopt;
    for (Eigen::Index j = 0; j < pivot; ++j)
      if (residual[j] != 0) return std::nullopt;
    if (residual[pivot] % hnf_basis(i, pivot) != 0) return std::nullopt;
    coords[i] = residual[pivot] / hnf_basis(i, pivot);
    residual -= coords[i] * hnf_basis.row(i).transpose();
  }
  for (Eigen::Index j = 0; j < residual.size(); ++j)
    if (residual[j] != 0) return std::nullopt;
  return coords;
}

PointConfig::PointConfig(std::vector<IntPoint> points) {
  if (points.empty()) throw GeometryError("PointConfig: empty point set");
  dim_ = points.front().size();
  check_dims(points, dim_, "PointConfig");
  sort_unique(points);
  points_ = std::move(points);
  span_ = lattice_span(points_);
}

bool PointConfig::full_lattice() const {
  if (span_.rank() != dim_) return false;
  for (Eigen::Index i = 0; i < dim_; ++i)
    for (Eigen::Index j = 0; j < dim_; ++j)
      if (span_.basis(i, j) != (i == j ? 1 : 0)) return false;
  return true;
}

PointConfig normalize_lattice(const PointConfig& config) {
  if (config.full_lattice()) return config;
  const IntPoint& origin = config.points().front();
  std::vector<IntPoint> coords;
  coords.reserve(config.size());
  for (const auto& p : config.points()) {
    auto c = lattice_coordinates(config.span().basis, p - origin);
    if (!c) throw GeometryError("normalize_lattice: point outside its own lattice span");
    coords.push_back(*c);
  }
  if (config.span().rank() == 0) coords.assign(1, IntPoint(0));
  return PointConfig(std::move(coords));
}

BoundaryComplex simplicial_boundary(const std::vector<IntPoint>& input) {
  if (input.empty()) throw GeometryError("convex_hull: empty input");
  BoundaryComplex out;
  out.points = input;
  const Eigen::Index d = input.front().size();
  check_dims(out.points, d, "convex_hull");
  sort_unique(out.points);
  const auto& pts = out.points;
  if (d == 0) return out;

  // Greedy affinely independent initial simplex.
  std::vector<int> simplex{0};
  IntMatrix diffs(0, d);
  for (int i = 1; i < static_cast<int>(pts.size()) && static_cast<Eigen::Index>(simplex.size()) <= d; ++i) {
    IntMatrix trial(diffs.rows() + 1, d);
    trial.topRows(diffs.rows()) = diffs;
    trial.row(diffs.rows()) = (pts[i] - pts[0]).transpose();
    if (rank(trial) == trial.rows()) {
      diffs = trial;
      simplex.push_back(i);
    }
  }
  if (static_cast<Eigen::Index>(simplex.size()) != d + 1)
    throw GeometryError("convex_hull: input is not full-dimensional (normalize the lattice first)");

  IntVector interior = IntVector::Zero(d);
  for (int i : simplex) interior += pts[i];
  const Integer weight = d + 1;

  struct Face {
    std::vector<int> verts;
    Facet plane;
    bool alive = true;
  };
  std::vector<Face> faces;
  for (std::size_t skip = 0; skip < simplex.size(); ++skip) {
    std::vector<int> verts;
    for (std::size_t j = 0; j < simplex.size(); ++j)
      if (j != skip) verts.push_back(simplex[j]);
    std::sort(verts.begin(), verts.end());
    faces.push_back(Face{verts, oriented_plane(pts, verts, interior, weight)});
  }

  std::vector<bool> used(pts.size(), false);
  for (int i : simplex) used[i] = true;
  for (int p = 0; p < static_cast<int>(pts.size()); ++p) {
    if (used[p]) continue;
    std::map<std::vector<int>, int> ridge_count;
    bool any_visible = false;
    for (auto& f : faces) {
      if (!f.alive || f.plane.slack(pts[p]) >= 0) continue;
      any_visible = true;
      f.alive = false;
      for (std::size_t skip = 0; skip < f.verts.size(); ++skip) {
        std::vector<int> ridge;
        for (std::size_t j = 0; j < f.verts.size(); ++j)
          if (j != skip) ridge.push_back(f.verts[j]);
        ++ridge_count[ridge];
      }
    }
    if (!any_visible) continue;
    for (const auto& [ridge, count] : ridge_count) {
      if (count != 1) continue;
      std::vector<int> verts = ridge;
      verts.push_back(p);
      std::sort(verts.begin(), verts.end());
      faces.push_back(Face{verts, oriented_plane(pts, verts, interior, weight)});
    }
    faces.erase(std::remove_if(faces.begin(), faces.end(), [](const Face& f) { return !f.alive; }), faces.end());
  }
  for (auto& f : faces) {
    out.simplices.push_back(std::move(f.verts));
    out.planes.push_back(std::move(f.plane));
  }
  return out;
}

HullResult convex_hull(const std::vector<IntPoint>& points) {
  BoundaryComplex boundary = simplicial_boundary(points);
  const auto& pts = boundary.points;
  HullResult out;
  const Eigen::Index d = pts.front().size();
  out.hrep.ambient_dim = d;
  if (d == 0) {
    out.vertices = pts;
    return out;
  }
  std::vector<Facet> planes = boundary.planes;
  std::sort(planes.begin(), planes.end(), facet_less);
  planes.erase(std::unique(planes.begin(), planes.end(), facet_equal), planes.end());
  out.hrep.facets = planes;

  std::set<int> candidates;
  for (const auto& s : boundary.simplices) candidates.insert(s.begin(), s.end());
  for (int i : candidates) {
    IntMatrix normals(0, d);
    for (const auto& f : planes) {
      if (f.slack(pts[i]) != 0) continue;
      normals.conservativeResize(normals.rows() + 1, d);
      normals.row(normals.rows() - 1) = f.normal.transpose();
    }
    if (rank(normals) == d) out.vertices.push_back(pts[i]);
  }
  return out;
}

std::vector<RatVector> polyhedron_vertices(const HRepresentation& hrep) {
  const Eigen::Index d = hrep.ambient_dim;
  const int m = static_cast<int>(hrep.facets.size());
  if (d == 0) {
    for (const auto& f : hrep.facets)
      if (f.offset > 0) return {};
    return {RatVector(0)};
  }
  IntMatrix a(m, d);
  for (int i = 0; i < m; ++i) a.row(i) = hrep.facets[i].normal.transpose();
  if (rank(a) < d) throw GeometryError("enumerate_lattice_points: unbounded polyhedron (lineality)");

  // Extreme rays of the recession cone {A r >= 0} lie on d-1 tight rows.
  bool unbounded = false;
  for_each_combination(m, static_cast<int>(d - 1), [&](const std::vector<int>& rows) {
    if (unbounded) return;
    IntMatrix sub(static_cast<Eigen::Index>(rows.size()), d);
    for (std::size_t i = 0; i < rows.size(); ++i) sub.row(i) = a.row(rows[i]);
    IntVector r = orthogonal_vector(sub);
    if (r.isZero()) return;
    IntVector ar = a * r;
    bool nonneg = true, nonpos = true;
    for (Eigen::Index i = 0; i < ar.size(); ++i) {
      if (ar[i] < 0) nonneg = false;
      if (ar[i] > 0) nonpos = false;
    }
    if (nonneg || nonpos) unbounded = true;
  });
  if (unbounded) throw GeometryError("enumerate_lattice_points: unbounded polyhedron (recession direction)");

  std::vector<RatVector> verts;
  for_each_combination(m, static_cast<int>(d), [&](const std::vector<int>& rows) {
    IntMatrix sub(d, d);
    IntVector rhs(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      sub.row(i) = a.row(rows[i]);
      rhs[i] = hrep.facets[rows[i]].offset;
    }
    if (determinant(sub) == 0) return;
    RatVector x = solve_exact(cast_matrix<Rational>(sub), to_rational(rhs));
    if (!hrep.contains(x)) return;
    for (const auto& v : verts)
      if (equal_vectors(v, x)) return;
    verts.push_back(x);
  });
  return verts;
}

std::vector<IntPoint> enumerate_in_box(const HRepresentation& hrep, const IntVector& lo, const IntVector& hi) {
  const Eigen::Index d = hrep.ambient_dim;
  std::vector<IntPoint> out;
  if (d == 0) {
    if (hrep.contains(IntPoint(0))) out.emplace_back(0);
    return out;
  }
  for (Eigen::Index i = 0; i < d; ++i)
    if (lo[i] > hi[i]) return out;

  const std::size_t m = hrep.facets.size();
  // tail[f][i] = max over the box of sum_{j > i} n_j x_j
  std::vector<std::vector<Integer>> tail(m, std::vector<Integer>(d + 1, Integer(0)));
  for (std::size_t f = 0; f < m; ++f) {
    const IntVector& n = hrep.facets[f].normal;
    for (Eigen::Index i = d - 1; i >= 0; --i) {
      Integer a = n[i] * lo[i];
      Integer b = n[i] * hi[i];
      tail[f][i] = tail[f][i + 1] + (a > b ? a : b);
    }
  }
  std::vector<std::vector<Integer>> prefix(m, std::vector<Integer>(d + 1, Integer(0)));
  IntPoint x(d);

  auto recurse = [&](auto&& self, Eigen::Index i) -> void {
    Integer low = lo[i];
    Integer high = hi[i];
    for (std::size_t f = 0; f < m; ++f) {
      const Integer& ni = hrep.facets[f].normal[i];
      Integer rhs = hrep.facets[f].offset - prefix[f][i] - tail[f][i + 1];
      if (ni > 0) {
        Integer b = ceil_div<Integer>(rhs, ni);
        if (b > low) low = b;
      } else if (ni < 0) {
        Integer b = floor_div<Integer>(rhs, ni);
        if (b < high) high = b;
      } else if (rhs > 0) {
        return;
      }
      if (low > high) return;
    }
    for (Integer v = low; v <= high; ++v) {
      x[i] = v;
      for (std::size_t f = 0; f < m; ++f) prefix[f][i + 1] = prefix[f][i] + hrep.facets[f].normal[i] * v;
      if (i + 1 == d)
        out.push_back(x);
      else
        self(self, i + 1);
    }
  };
  recurse(recurse, 0);
  return out;
}

std::vector<IntPoint> enumerate_lattice_points(const HRepresentation& hrep) {
  const Eigen::Index d = hrep.ambient_dim;
  std::vector<RatVector> verts = polyhedron_vertices(hrep);
  if (verts.empty()) return {};
  IntVector lo(d), hi(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    Rational mn = verts[0][i], mx = verts[0][i];
    for (const auto& v : verts) {
      if (v[i] < mn) mn = v[i];
      if (v[i] > mx) mx = v[i];
    }
    lo[i] = ceil_of(mn);
    hi[i] = floor_of(mx);
  }
  return enumerate_in_box(hrep, lo, hi);
}

LatticePolytope LatticePolytope::from_points(const std::vector<IntPoint>& points) {
  HullResult hull = convex_hull(points);
  LatticePolytope p;
  p.vertices_ = std::move(hull.vertices);
  p.hrep_ = std::move(hull.hrep);
  return p;
}

std::vector<IntPoint> LatticePolytope::lattice_points() const {
  const Eigen::Index d = dim();
  IntVector lo(d), hi(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    lo[i] = vertices_[0][i];
    hi[i] = vertices_[0][i];
    for (const auto& v : vertices_) {
      if (v[i] < lo[i]) lo[i] = v[i];
      if (v[i] > hi[i]) hi[i] = v[i];
    }
  }
  return enumerate_in_box(hrep_, lo, hi);
}

LatticePolytope LatticePolytope::dilate(const Integer& k) const {
  if (k < 1) throw GeometryError("dilate: factor must be positive");
  LatticePolytope p;
  p.vertices_ = vertices_;
  for (auto& v : p.vertices_) v *= k;
  p.hrep_ = hrep_.dilate(k);
  return p;
}

Integer LatticePolytope::normalized_volume() const {
  const Eigen::Index d = dim();
  if (d == 0) return 1;
  BoundaryComplex boundary = simplicial_boundary(vertices_);
  const IntPoint& apex = boundary.points[0];
  Integer total = 0;
  for (const auto& s : boundary.simplices) {
    if (std::find(s.begin(), s.end(), 0) != s.end()) continue;
    IntMatrix m(d, d);
    for (Eigen::Index i = 0; i < d; ++i) m.row(i) = (boundary.points[s[i]] - apex).transpose();
    total += abs_value(determinant(m));
  }
  return total;
}

std::vector<std::vector<int>> LatticePolytope::facet_vertex_sets() const {
  std::vector<std::vector<int>> out;
  for (const auto& f : hrep_.facets) {
    std::vector<int> s;
    for (int i = 0; i < static_cast<int>(vertices_.size()); ++i)
      if (f.slack(vertices_[i]) == 0) s.push_back(i);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<std::vector<int>> LatticePolytope::faces() const {
  std::vector<int> all(vertices_.size());
  for (int i = 0; i < static_cast<int>(all.size()); ++i) all[i] = i;
  std::set<std::vector<int>> seen{all};
  std::vector<std::vector<int>> frontier = facet_vertex_sets();
  const auto facet_sets = frontier;
  while (!frontier.empty()) {
    std::vector<std::vector<int>> next;
    for (auto& face : frontier) {
      if (face.empty() || !seen.insert(face).second) continue;
      for (const auto& f : facet_sets) {
        std::vector<int> meet;
        std::set_intersection(face.begin(), face.end(), f.begin(), f.end(), std::back_inserter(meet));
        if (!meet.empty() && !seen.count(meet)) next.push_back(std::move(meet));
      }
    }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

Integer relative_normalized_volume(const std::vector<IntPoint>& points, const IntPoint& origin,
                                   const IntMatrix& basis) {
  const Eigen::Index g = basis.rows();
  if (points.empty()) return 0;
  if (g == 0) return 1;
  IntMatrix hnf = hermite_normal_form(basis).form;
  if (hnf.rows() != g) throw GeometryError("relative_normalized_volume: dependent basis");
  std::vector<IntPoint> coords;
  for (const auto& p : points) {
    auto c = lattice_coordinates(hnf, p - origin);
    if (!c) throw GeometryError("relative_normalized_volume: point outside the affine lattice");
    coords.push_back(*c);
  }
  sort_unique(coords);
  if (lattice_span(coords).rank() < g) return 0;
  return LatticePolytope::from_points(coords).normalized_volume();
}

}  // namespace segfib
