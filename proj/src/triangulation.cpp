#include "segfib/triangulation.hpp"

#include "segfib/lp.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

namespace segfib {

namespace {

std::string describe(const std::vector<IntPoint>& pts) {
  std::string out = "{";
  for (std::size_t i = 0; i < pts.size(); ++i) out += (i ? ", " : "") + to_string(pts[i]);
  return out + "}";
}

std::string describe(const std::vector<int>& idx) {
  std::string out = "[";
  for (std::size_t i = 0; i < idx.size(); ++i) out += (i ? "," : "") + std::to_string(idx[i]);
  return out + "]";
}

int index_of(const std::vector<IntPoint>& sorted, const IntPoint& p) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), p, LexLess{});
  if (it == sorted.end() || !equal_vectors(*it, p)) return -1;
  return static_cast<int>(it - sorted.begin());
}

// d! * volume of a simplex with d + 1 vertices in Z^d (signed).
Integer simplex_det(const std::vector<IntPoint>& s) {
  const Eigen::Index d = s.front().size();
  if (static_cast<Eigen::Index>(s.size()) != d + 1) return 0;
  IntMatrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) m.row(i) = (s[i + 1] - s[0]).transpose();
  return determinant(m);
}

// Affine function (a, c) with a . s_i + c = w_i on a full-dimensional simplex.
std::pair<RatVector, Rational> affine_interpolant(const std::vector<IntPoint>& s, const std::vector<Rational>& w) {
  const Eigen::Index d = s.front().size();
  RatMatrix m(d + 1, d + 1);
  RatVector rhs(d + 1);
  for (Eigen::Index i = 0; i <= d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = Rational(s[i][j]);
    m(i, d) = 1;
    rhs[i] = w[i];
  }
  RatVector sol = solve_exact(m, rhs);
  return {sol.head(d), sol[d]};
}

// Barycentric coordinates of p with respect to a full-dimensional simplex.
RatVector barycentric(const std::vector<IntPoint>& s, const IntPoint& p) {
  const Eigen::Index d = p.size();
  RatMatrix m(d + 1, d + 1);
  RatVector rhs(d + 1);
  for (Eigen::Index j = 0; j <= d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) m(i, j) = Rational(s[j][i]);
    m(d, j) = 1;
  }
  for (Eigen::Index i = 0; i < d; ++i) rhs[i] = Rational(p[i]);
  rhs[d] = 1;
  return solve_exact(m, rhs);
}

// Facets of a full-dimensional simplex: the one opposite s[i] comes i-th,
// oriented so that s[i] is on the positive side.
std::vector<Facet> simplex_facets(const std::vector<IntPoint>& s) {
  const Eigen::Index d = s.front().size();
  std::vector<Facet> out;
  if (d == 0) return out;
  for (Eigen::Index i = 0; i <= d; ++i) {
    std::vector<IntPoint> rest;
    for (Eigen::Index j = 0; j <= d; ++j)
      if (j != i) rest.push_back(s[j]);
    IntVector normal;
    if (d == 1) {
      normal = IntVector::Ones(1);
    } else {
      IntMatrix diffs(d - 1, d);
      for (Eigen::Index j = 1; j < d; ++j) diffs.row(j - 1) = (rest[j] - rest[0]).transpose();
      IntMatrix ker = integer_kernel(diffs);
      if (ker.rows() != 1) throw GeometryError("simplex_facets: degenerate simplex " + describe(s));
      normal = primitive(IntVector(ker.row(0).transpose()));
    }
    Integer offset = normal.dot(rest[0]);
    if (normal.dot(s[i]) < offset) {
      normal = -normal;
      offset = -offset;
    }
    out.push_back(Facet{normal, offset});
  }
  return out;
}

// A chart of the affine hull of some lattice points: origin plus an HNF
// basis of the saturated lattice.
struct AffineChart {
  IntPoint origin;
  IntMatrix basis;

  explicit AffineChart(const std::vector<IntPoint>& pts) : origin(pts.front()) {
    basis = saturation_basis(lattice_span(pts));
  }
  Eigen::Index dim() const { return basis.rows(); }
  std::optional<IntVector> coords(const IntPoint& p) const { return lattice_coordinates(basis, p - origin); }
};

IntVector kernel_direction(const AffineMap& f) {
  IntMatrix ker = integer_kernel(f.matrix);
  if (ker.rows() != 1) throw GeometryError("fibration kernel is not one-dimensional");
  IntVector k = primitive(IntVector(ker.row(0).transpose()));
  for (Eigen::Index i = k.size() - 1; i >= 0; --i)
    if (k[i] != 0) {
      if (k[i] < 0) k = -k;
      break;
    }
  return k;
}

// l with l . k = 1.
IntVector height_form(const IntVector& k) {
  IntVector l = IntVector::Zero(k.size());
  Integer g = 0;
  for (Eigen::Index i = 0; i < k.size(); ++i) {
    Integer s, t;
    Integer next = extended_gcd(g, k[i], s, t);
    l *= s;
    l[i] += t;
    g = next;
  }
  if (g < 0) l = -l;
  if (l.dot(k) != 1) throw GeometryError("kernel direction is not primitive");
  return l;
}

LatticePolytope base_polytope(const TriangulationComplex& delta) {
  if (delta.vertices.empty()) throw GeometryError("empty base triangulation");
  return LatticePolytope::from_points(delta.vertices);
}

// Everything the Pi construction needs about the fibers.
struct FiberData {
  IntVector direction;
  IntVector height;
  std::vector<IntPoint> pool;                 // lattice points of P, sorted
  std::vector<int> base_of;                   // pool index -> delta vertex index
  std::vector<int> position;                  // pool index -> position in fiber
  std::vector<std::vector<int>> fiber;        // delta vertex -> pool indices by height
};

FiberData fiber_data(const AffineMap& f, const LatticePolytope& p, const TriangulationComplex& delta) {
  FiberData out;
  out.direction = kernel_direction(f);
  out.height = height_form(out.direction);
  out.pool = p.lattice_points();
  out.base_of.assign(out.pool.size(), -1);
  out.position.assign(out.pool.size(), -1);
  out.fiber.resize(delta.vertices.size());
  std::vector<IntPoint> sorted_base = delta.vertices;
  std::vector<int> order(sorted_base.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return lex_less(delta.vertices[a], delta.vertices[b]); });
  sort_unique(sorted_base);
  for (std::size_t i = 0; i < out.pool.size(); ++i) {
    IntPoint x = f(out.pool[i]);
    int b = index_of(sorted_base, x);
    if (b < 0) throw GeometryError("lattice point " + to_string(out.pool[i]) + " lies over " + to_string(x) +
                                   ", which is not a vertex of the base triangulation");
    out.base_of[i] = order[b];
    out.fiber[order[b]].push_back(static_cast<int>(i));
  }
  for (std::size_t b = 0; b < out.fiber.size(); ++b) {
    auto& fb = out.fiber[b];
    if (fb.empty()) throw GeometryError("no lattice point of P over " + to_string(delta.vertices[b]));
    std::sort(fb.begin(), fb.end(),
              [&](int a, int c) { return out.height.dot(out.pool[a]) < out.height.dot(out.pool[c]); });
    for (std::size_t j = 0; j < fb.size(); ++j) out.position[fb[j]] = static_cast<int>(j);
  }
  return out;
}

void require_fibration(const AffineMap& f, const LatticePolytope& p, const LatticePolytope& q) {
  FibrationCheck check = check_fibration(f, p, q);
  if (!check.ok) throw GeometryError("not a lattice segmental fibration: " + check.failure);
}

void require_triangulation(const TriangulationComplex& delta, const LatticePolytope& q) {
  Verdict v = verify_complex(delta, q);
  if (!v) throw GeometryError("base is not a triangulation of Q: " + v.detail);
  std::vector<IntPoint> sorted = delta.vertices;
  sort_unique(sorted);
  for (const auto& x : q.lattice_points())
    if (index_of(sorted, x) < 0) throw GeometryError("base triangulation misses the lattice point " + to_string(x));
}

// Facets and bounding box of one maximal simplex, for the pair test.
struct SimplexShape {
  std::vector<Facet> facets;
  IntVector lo, hi;
};

SimplexShape simplex_shape(const std::vector<IntPoint>& pts) {
  SimplexShape out;
  out.lo = pts.front();
  out.hi = pts.front();
  for (const auto& p : pts)
    for (Eigen::Index j = 0; j < p.size(); ++j) {
      if (p[j] < out.lo[j]) out.lo[j] = p[j];
      if (p[j] > out.hi[j]) out.hi[j] = p[j];
    }
  if (pts.size() == static_cast<std::size_t>(pts.front().size() + 1)) out.facets = simplex_facets(pts);
  return out;
}

// Some facet hyperplane of s has t on its outer closed side, touching it
// only in shared vertices. Then s cap t is the hull of those vertices.
bool facet_separated(const std::vector<int>& t, const SimplexShape& s_shape, const std::vector<int>& shared,
                     const std::vector<IntPoint>& pts) {
  for (const auto& facet : s_shape.facets) {
    bool ok = true;
    for (int v : t) {
      Integer slack = facet.slack(pts[v]);
      if (slack > 0 || (slack == 0 && !std::binary_search(shared.begin(), shared.end(), v))) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

// Is conv(s) cap conv(t) = conv(s cap t)?
bool proper_pair(const std::vector<int>& s, const std::vector<int>& t, const SimplexShape& s_shape,
                 const SimplexShape& t_shape, const std::vector<IntPoint>& pts) {
  std::vector<int> shared;
  std::set_intersection(s.begin(), s.end(), t.begin(), t.end(), std::back_inserter(shared));
  if (shared.size() == s.size() || shared.size() == t.size()) return true;
  const Eigen::Index d = pts.front().size();
  for (Eigen::Index j = 0; j < d; ++j)
    if (s_shape.hi[j] < t_shape.lo[j] || t_shape.hi[j] < s_shape.lo[j]) return shared.empty();
  if (facet_separated(t, s_shape, shared, pts) || facet_separated(s, t_shape, shared, pts)) return true;
  // Is there lambda >= 0 on s, mu >= 0 on t with equal weighted sums and
  // positive weight off the shared face?
  const Eigen::Index ns = static_cast<Eigen::Index>(s.size());
  const Eigen::Index nt = static_cast<Eigen::Index>(t.size());
  IntMatrix a = IntMatrix::Zero(d + 2, ns + nt);
  IntVector b = IntVector::Zero(d + 2);
  for (Eigen::Index i = 0; i < ns; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) a(j, i) = pts[s[i]][j];
    a(d, i) = 1;
    if (!std::binary_search(shared.begin(), shared.end(), s[i])) a(d + 1, i) = 1;
  }
  for (Eigen::Index i = 0; i < nt; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) a(j, ns + i) = -pts[t[i]][j];
    a(d, ns + i) = -1;
  }
  b[d + 1] = 1;
  return !solve_feasibility(a, b).feasible;
}

}  // namespace

std::vector<IntPoint> TriangulationComplex::simplex_points(std::size_t i) const {
  std::vector<IntPoint> out;
  for (int v : simplices.at(i)) out.push_back(vertices.at(v));
  return out;
}

TriangulationComplex square_triangulation(bool main_diagonal) {
  TriangulationComplex t;
  t.vertices = {make_point({0, 0}), make_point({0, 1}), make_point({1, 0}), make_point({1, 1})};
  if (main_diagonal)
    t.simplices = {{0, 1, 3}, {0, 2, 3}};
  else
    t.simplices = {{0, 1, 2}, {1, 2, 3}};
  return t;
}

TriangulationComplex point_triangulation() {
  TriangulationComplex t;
  t.vertices = {IntPoint(0)};
  t.simplices = {{0}};
  return t;
}

TriangulationComplex single_simplex(const std::vector<IntPoint>& vertices) {
  TriangulationComplex t;
  t.vertices = vertices;
  sort_unique(t.vertices);
  std::vector<int> all(t.vertices.size());
  std::iota(all.begin(), all.end(), 0);
  t.simplices = {all};
  return t;
}

CompatibilityError::CompatibilityError(std::vector<IntPoint> face, std::vector<IntPoint> image)
    : GeometryError("face-compatibility violated: the image " + describe(image) + " of the face " + describe(face) +
                    " is not a union of faces of the base triangulation"),
      face_(std::move(face)),
      image_(std::move(image)) {}

void check_face_compatibility(const AffineMap& f, const LatticePolytope& p, const TriangulationComplex& delta) {
  // Faces of delta grouped by vertex count.
  std::vector<std::set<std::vector<int>>> delta_faces(delta.ambient_dim() + 2);
  for (const auto& s : delta.simplices) {
    const int n = static_cast<int>(s.size());
    for (int mask = 1; mask < (1 << n); ++mask) {
      std::vector<int> face;
      for (int i = 0; i < n; ++i)
        if (mask >> i & 1) face.push_back(s[i]);
      if (face.size() < delta_faces.size()) delta_faces[face.size()].insert(face);
    }
  }
  std::vector<IntPoint> base_vertices = delta.vertices;
  sort_unique(base_vertices);

  for (const auto& face : p.faces()) {
    std::vector<IntPoint> pts, image;
    for (int i : face) {
      pts.push_back(p.vertices()[i]);
      image.push_back(f(p.vertices()[i]));
    }
    sort_unique(image);
    AffineChart chart(image);
    const Eigen::Index g = chart.dim();
    if (g == 0) {
      if (index_of(base_vertices, image.front()) < 0) throw CompatibilityError(pts, image);
      continue;
    }
    std::vector<IntPoint> coords;
    for (const auto& x : image) coords.push_back(*chart.coords(x));
    LatticePolytope local = LatticePolytope::from_points(coords);
    Integer covered = 0;
    for (const auto& cell : delta_faces[g + 1]) {
      std::vector<IntPoint> cell_coords;
      bool inside = true;
      for (int v : cell) {
        auto c = chart.coords(delta.vertices[v]);
        if (!c || !local.contains(*c)) {
          inside = false;
          break;
        }
        cell_coords.push_back(*c);
      }
      if (inside) covered += abs_value(simplex_det(cell_coords));
    }
    if (covered != local.normalized_volume()) throw CompatibilityError(pts, image);
  }
}

FiberedSubdivision fibered_subdivision(const AffineMap& f, const LatticePolytope& p,
                                       const TriangulationComplex& delta_q, const SubdivisionOptions& options) {
  LatticePolytope q = base_polytope(delta_q);
  require_fibration(f, p, q);
  require_triangulation(delta_q, q);
  if (options.check_compatibility) check_face_compatibility(f, p, delta_q);

  FiberedSubdivision out;
  out.base = delta_q;
  Integer total = 0;
  for (std::size_t i = 0; i < delta_q.simplices.size(); ++i) {
    HRepresentation hrep = p.hrep();
    const auto simplex = delta_q.simplex_points(i);
    if (q.dim() > 0) {
      for (const auto& facet : simplex_facets(simplex)) {
        // <n, M y + c> >= o
        IntVector normal = f.matrix.transpose() * facet.normal;
        Integer offset = facet.offset - facet.normal.dot(f.offset);
        Integer g = content(normal);
        if (g > 1 && offset % g == 0) {
          normal /= g;
          offset /= g;
        }
        hrep.facets.push_back(Facet{normal, offset});
      }
    }
    std::vector<IntPoint> verts;
    for (const auto& v : polyhedron_vertices(hrep)) {
      IntPoint y(v.size());
      std::string text = "(";
      bool lattice = true;
      for (Eigen::Index j = 0; j < v.size(); ++j) {
        text += (j ? ", " : "") + to_string(v[j]);
        if (denominator(v[j]) != 1) lattice = false;
        y[j] = numerator(v[j]);
      }
      if (!lattice) throw GeometryError("cell over " + describe(simplex) + " has the non-lattice vertex " + text + ")");
      verts.push_back(y);
    }
    SubdivisionCell cell{delta_q.simplices[i], LatticePolytope::from_points(verts)};
    total += cell.polytope.normalized_volume();
    out.cells.push_back(std::move(cell));
  }
  if (total != p.normalized_volume())
    throw GeometryError("fibered cells do not tile P (volume " + to_string(total) + " vs " +
                        to_string(p.normalized_volume()) + ")");
  return out;
}

FiberedSubdivision trivial_subdivision(const LatticePolytope& p) {
  FiberedSubdivision out;
  out.cells.push_back(SubdivisionCell{{}, p});
  return out;
}

std::vector<MarkedPoint> upper_lower_marking(const AffineMap& f, const LatticePolytope& p) {
  IntVector k = kernel_direction(f);
  IntVector l = height_form(k);
  std::map<IntPoint, std::pair<Integer, Integer>, LexLess> range;
  const auto pool = p.lattice_points();
  for (const auto& y : pool) {
    IntPoint x = f(y);
    Integer h = l.dot(y);
    auto it = range.find(x);
    if (it == range.end())
      range.emplace(x, std::make_pair(h, h));
    else
      it->second = {std::min(it->second.first, h), std::max(it->second.second, h)};
  }
  std::vector<MarkedPoint> out;
  for (const auto& y : pool) {
    MarkedPoint m{y, f(y), l.dot(y)};
    const auto& r = range.at(m.base);
    m.lower = m.height == r.first;
    m.upper = m.height == r.second;
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<IntPoint> enumeration_order(const AffineMap& f, const LatticePolytope& p,
                                        std::optional<std::uint64_t> seed) {
  auto marks = upper_lower_marking(f, p);
  std::sort(marks.begin(), marks.end(), [](const MarkedPoint& a, const MarkedPoint& b) {
    if (!equal_vectors(a.base, b.base)) return lex_less(a.base, b.base);
    return a.height < b.height;
  });
  std::vector<MarkedPoint> rest;
  for (auto& m : marks)
    if (!m.lower) rest.push_back(std::move(m));
  std::vector<IntPoint> out;
  if (!seed) {
    for (const auto& m : rest) out.push_back(m.point);
    return out;
  }
  // Shuffle the fiber labels, then fill each fiber's slots bottom to top.
  std::vector<std::size_t> group(rest.size());
  std::vector<std::size_t> first;
  for (std::size_t i = 0; i < rest.size(); ++i) {
    if (i == 0 || !equal_vectors(rest[i].base, rest[i - 1].base)) first.push_back(i);
    group[i] = first.size() - 1;
  }
  std::mt19937_64 rng(*seed);
  std::shuffle(group.begin(), group.end(), rng);
  std::vector<std::size_t> next = first;
  for (std::size_t g : group) out.push_back(rest[next[g]++].point);
  return out;
}

TriangulationComplex build_pi_triangulation(const AffineMap& f, const LatticePolytope& p,
                                            const TriangulationComplex& delta_q, const PiOptions& options) {
  LatticePolytope q = base_polytope(delta_q);
  require_fibration(f, p, q);
  require_triangulation(delta_q, q);
  check_face_compatibility(f, p, delta_q);

  FiberData data = fiber_data(f, p, delta_q);
  const auto& pool = data.pool;

  std::vector<IntPoint> order = options.order ? *options.order : enumeration_order(f, p, options.seed);
  {
    auto expected = enumeration_order(f, p);
    auto given = order;
    sort_unique(expected);
    sort_unique(given);
    if (given.size() != order.size() || given.size() != expected.size() ||
        !std::equal(given.begin(), given.end(), expected.begin(), expected.end(),
                    [](const IntPoint& a, const IntPoint& b) { return equal_vectors(a, b); }))
      throw std::invalid_argument("enumeration must list every lattice point of P off the lower boundary once");
  }

  std::vector<std::vector<int>> cells;
  std::vector<std::vector<int>> cells_of(pool.size());
  auto add_cell = [&](std::vector<int> cell) {
    std::sort(cell.begin(), cell.end());
    for (int v : cell) cells_of[v].push_back(static_cast<int>(cells.size()));
    cells.push_back(std::move(cell));
  };

  // Pi_0: the lower simplices; upper[d] is the current top face over delta d.
  std::vector<std::vector<int>> upper;
  std::vector<std::vector<int>> simplices_at(delta_q.vertices.size());
  for (std::size_t i = 0; i < delta_q.simplices.size(); ++i) {
    std::vector<int> face;
    for (int x : delta_q.simplices[i]) {
      face.push_back(data.fiber[x].front());
      simplices_at[x].push_back(static_cast<int>(i));
    }
    std::sort(face.begin(), face.end());
    add_cell(face);
    upper.push_back(face);
  }
  const std::size_t lower_cells = cells.size();
  std::vector<int> top(delta_q.vertices.size(), 0);
  std::vector<bool> grown(delta_q.simplices.size(), false);

  for (const auto& y_point : order) {
    const int y = index_of(pool, y_point);
    const int x = data.base_of[y];
    if (data.position[y] != top[x] + 1)
      throw std::invalid_argument("enumeration visits " + to_string(y_point) + " before the point below it");
    const int z = data.fiber[x][top[x]];

    // star+ of z: the top-height parts of the cells through z, maximal ones.
    std::set<std::vector<int>> found;
    for (int c : cells_of[z]) {
      std::vector<int> face;
      for (int v : cells[c])
        if (data.position[v] == top[data.base_of[v]]) face.push_back(v);
      found.insert(face);
    }
    std::set<std::vector<int>> star;
    for (const auto& a : found) {
      bool maximal = true;
      for (const auto& b : found)
        if (a.size() < b.size() && std::includes(b.begin(), b.end(), a.begin(), a.end())) {
          maximal = false;
          break;
        }
      if (maximal) star.insert(a);
    }
    std::set<std::vector<int>> expected;
    for (int d : simplices_at[x]) expected.insert(upper[d]);
    if (star != expected) {
      std::string bad;
      for (const auto& s : star)
        if (!expected.count(s)) bad = describe(s);
      throw GeometryError("star+ of " + to_string(pool[z]) + " has the face " + (bad.empty() ? "?" : bad) +
                          " that is not on the upper boundary");
    }

    for (int d : simplices_at[x]) {
      std::vector<int> cell = upper[d];
      cell.push_back(y);
      add_cell(cell);
      std::replace(upper[d].begin(), upper[d].end(), z, y);
      std::sort(upper[d].begin(), upper[d].end());
      grown[d] = true;
    }
    top[x] += 1;
  }

  TriangulationComplex out;
  out.vertices = pool;
  for (std::size_t i = 0; i < cells.size(); ++i)
    if (i >= lower_cells || !grown[i]) out.simplices.push_back(cells[i]);
  std::sort(out.simplices.begin(), out.simplices.end());
  if (options.certify_regularity) {
    RegularityResult reg = is_regular(out);
    if (reg.regular) out.heights = reg.heights;
  }
  return out;
}

std::vector<TriangulationComplex> tower_triangulations(const std::vector<FamilyInstance>& levels,
                                                       const PiOptions& options) {
  std::vector<TriangulationComplex> out;
  TriangulationComplex delta = point_triangulation();
  for (std::size_t i = 0; i < levels.size(); ++i) {
    PiOptions level = options;
    level.order.reset();
    if (options.seed) level.seed = *options.seed + i;
    level.certify_regularity = options.certify_regularity && i + 1 == levels.size();
    delta = build_pi_triangulation(levels[i].fibration, levels[i].polytope, delta, level);
    out.push_back(delta);
  }
  return out;
}

Verdict is_unimodular_triangulation(const TriangulationComplex& t) {
  const auto d = static_cast<std::size_t>(t.ambient_dim());
  for (std::size_t i = 0; i < t.simplices.size(); ++i) {
    if (t.simplices[i].size() != d + 1) return Verdict::fail("simplex " + describe(t.simplex_points(i)) + " is not full-dimensional");
    Integer det = abs_value(simplex_det(t.simplex_points(i)));
    if (det != 1)
      return Verdict::fail("simplex " + describe(t.simplex_points(i)) + " has normalized volume " + to_string(det));
  }
  return {};
}

Verdict is_flag(const TriangulationComplex& t) {
  const std::size_t n = t.vertices.size();
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (const auto& s : t.simplices)
    for (int a : s)
      for (int b : s)
        if (a != b) adj[a][b] = 1;
  auto is_face = [&](const std::vector<int>& clique) {
    for (const auto& s : t.simplices)
      if (std::includes(s.begin(), s.end(), clique.begin(), clique.end())) return true;
    return false;
  };
  std::optional<std::vector<int>> bad;
  // Bron-Kerbosch with pivoting over maximal cliques.
  std::function<void(std::vector<int>&, std::vector<int>, std::vector<int>)> expand =
      [&](std::vector<int>& r, std::vector<int> cand, std::vector<int> excl) {
        if (bad) return;
        if (cand.empty() && excl.empty()) {
          if (r.empty()) return;
          std::vector<int> clique = r;
          std::sort(clique.begin(), clique.end());
          if (!is_face(clique)) bad = clique;
          return;
        }
        int pivot = !cand.empty() ? cand.front() : excl.front();
        std::size_t best = 0;
        for (const auto* set : {&cand, &excl})
          for (int u : *set) {
            std::size_t deg = 0;
            for (int v : cand) deg += adj[u][v];
            if (deg >= best) best = deg, pivot = u;
          }
        std::vector<int> todo;
        for (int v : cand)
          if (!adj[pivot][v]) todo.push_back(v);
        for (int v : todo) {
          std::vector<int> nc, ne;
          for (int u : cand)
            if (adj[v][u]) nc.push_back(u);
          for (int u : excl)
            if (adj[v][u]) ne.push_back(u);
          r.push_back(v);
          expand(r, nc, ne);
          r.pop_back();
          cand.erase(std::find(cand.begin(), cand.end(), v));
          excl.push_back(v);
        }
      };
  std::vector<int> used;
  for (const auto& s : t.simplices) used.insert(used.end(), s.begin(), s.end());
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  std::vector<int> r;
  expand(r, used, {});
  if (bad) {
    std::vector<IntPoint> pts;
    for (int v : *bad) pts.push_back(t.vertices[v]);
    return Verdict::fail("clique " + describe(pts) + " is a non-face");
  }
  return {};
}

namespace {

// Smallest gap heights(v) - (affine extension over s)(v) over all maximal s
// and vertices v outside s; nullopt when there is no such pair.
std::optional<Rational> min_gap(const TriangulationComplex& t, const std::vector<Rational>& heights,
                                std::string* where) {
  std::optional<Rational> best;
  for (std::size_t i = 0; i < t.simplices.size(); ++i) {
    const auto& s = t.simplices[i];
    std::vector<Rational> w;
    for (int v : s) w.push_back(heights[v]);
    auto [a, c] = affine_interpolant(t.simplex_points(i), w);
    for (std::size_t v = 0; v < t.vertices.size(); ++v) {
      if (std::binary_search(s.begin(), s.end(), static_cast<int>(v))) continue;
      Rational ext = c;
      for (Eigen::Index j = 0; j < a.size(); ++j) ext += a[j] * Rational(t.vertices[v][j]);
      Rational gap = heights[v] - ext;
      if (!best || gap < *best) {
        best = gap;
        if (where) *where = "simplex " + describe(t.simplex_points(i)) + " at vertex " + to_string(t.vertices[v]);
      }
    }
  }
  return best;
}

}  // namespace

Verdict check_heights(const TriangulationComplex& t, const std::vector<Rational>& heights) {
  if (heights.size() != t.vertices.size()) return Verdict::fail("height vector has the wrong length");
  for (std::size_t i = 0; i < t.simplices.size(); ++i)
    if (simplex_det(t.simplex_points(i)) == 0)
      return Verdict::fail("simplex " + describe(t.simplex_points(i)) + " is not full-dimensional");
  std::string where;
  auto gap = min_gap(t, heights, &where);
  if (gap && *gap < 1) return Verdict::fail("height gap " + to_string(*gap) + " < 1 for " + where);
  return {};
}

RegularityResult is_regular(const TriangulationComplex& t) {
  RegularityResult out;
  const Eigen::Index n = static_cast<Eigen::Index>(t.vertices.size());
  for (std::size_t i = 0; i < t.simplices.size(); ++i)
    if (simplex_det(t.simplex_points(i)) == 0) {
      out.detail = "simplex " + describe(t.simplex_points(i)) + " is not full-dimensional";
      return out;
    }
  if (t.simplices.empty()) {
    out.detail = "empty complex";
    return out;
  }

  // Local folding: across every interior ridge the far vertex lies strictly
  // above the affine extension of the near simplex.
  std::map<std::vector<int>, std::vector<int>> ridges;
  for (std::size_t i = 0; i < t.simplices.size(); ++i) {
    const auto& s = t.simplices[i];
    for (std::size_t skip = 0; skip < s.size(); ++skip) {
      std::vector<int> ridge;
      for (std::size_t j = 0; j < s.size(); ++j)
        if (j != skip) ridge.push_back(s[j]);
      ridges[ridge].push_back(static_cast<int>(i));
    }
  }
  std::vector<RatVector> rows;
  for (const auto& [ridge, owners] : ridges) {
    if (owners.size() > 2) {
      out.detail = "ridge " + describe(ridge) + " lies in more than two simplices";
      return out;
    }
    if (owners.size() != 2) continue;
    const auto& s = t.simplices[owners[0]];
    const auto& other = t.simplices[owners[1]];
    int far = -1;
    for (int v : other)
      if (!std::binary_search(s.begin(), s.end(), v)) far = v;
    RatVector lambda = barycentric(t.simplex_points(owners[0]), t.vertices[far]);
    RatVector row = RatVector::Zero(n);
    row[far] += 1;
    for (std::size_t j = 0; j < s.size(); ++j) row[s[j]] -= lambda[j];
    rows.push_back(row);
  }
  const Eigen::Index m = static_cast<Eigen::Index>(rows.size());
  RatMatrix folding(m, n);
  for (Eigen::Index i = 0; i < m; ++i) folding.row(i) = rows[i].transpose();
  IntMatrix mi = scale_rows(folding);

  // Farkas: M w >= 1 is solvable iff M^T y = 0, 1^T y = 1, y >= 0 is not.
  IntMatrix a(n + 1, m);
  a.topRows(n) = mi.transpose();
  a.row(n).setOnes();
  IntVector b = IntVector::Zero(n + 1);
  b[n] = 1;
  LpResult lp = solve_feasibility(a, b);
  if (lp.feasible) {
    out.refutation.assign(lp.solution.begin(), lp.solution.end());
    out.detail = "local folding constraints are infeasible";
    return out;
  }
  const Rational scale = lp.farkas[n];
  std::vector<Rational> w(n);
  for (Eigen::Index i = 0; i < n; ++i) w[i] = -lp.farkas[i] / scale;

  // Normalize: zero on the first simplex, then integral with gaps >= 1.
  {
    std::vector<Rational> w0;
    for (int v : t.simplices[0]) w0.push_back(w[v]);
    auto [lin, c] = affine_interpolant(t.simplex_points(0), w0);
    for (Eigen::Index i = 0; i < n; ++i) {
      Rational ext = c;
      for (Eigen::Index j = 0; j < lin.size(); ++j) ext += lin[j] * Rational(t.vertices[i][j]);
      w[i] -= ext;
    }
  }
  std::string where;
  auto gap = min_gap(t, w, &where);
  if (gap && *gap <= 0) {
    out.detail = "locally convex heights fail globally for " + where;
    return out;
  }
  Integer factor = 1;
  for (const auto& h : w) factor = factor / gcd_value(factor, Integer(denominator(h))) * Integer(denominator(h));
  if (gap) {
    Rational scaled = *gap * Rational(factor);
    if (scaled < 1) factor *= ceil_of(Rational(1) / scaled);
  }
  for (auto& h : w) h *= Rational(factor);
  out.regular = true;
  out.heights = std::move(w);
  return out;
}

Verdict verify_complex(const TriangulationComplex& t, const LatticePolytope& p) {
  const Eigen::Index d = p.dim();
  if (t.ambient_dim() != d) return Verdict::fail("ambient dimension mismatch");
  for (const auto& v : t.vertices)
    if (!p.contains(v)) return Verdict::fail("vertex " + to_string(v) + " lies outside P");
  std::vector<IntPoint> distinct = t.vertices;
  sort_unique(distinct);
  if (distinct.size() != t.vertices.size()) return Verdict::fail("repeated vertex coordinates");
  {
    auto cells = t.simplices;
    for (auto& c : cells) std::sort(c.begin(), c.end());
    std::sort(cells.begin(), cells.end());
    auto dup = std::adjacent_find(cells.begin(), cells.end());
    if (dup != cells.end()) {
      std::vector<IntPoint> pts;
      for (int v : *dup) pts.push_back(t.vertices[v]);
      return Verdict::fail("cell " + describe(pts) + " appears twice");
    }
  }
  Integer total = 0;
  for (std::size_t i = 0; i < t.simplices.size(); ++i) {
    if (t.simplices[i].size() != static_cast<std::size_t>(d + 1))
      return Verdict::fail("cell " + describe(t.simplex_points(i)) + " is not a full-dimensional simplex");
    Integer det = abs_value(simplex_det(t.simplex_points(i)));
    if (det == 0) return Verdict::fail("cell " + describe(t.simplex_points(i)) + " is degenerate");
    total += det;
  }
  if (total != p.normalized_volume())
    return Verdict::fail("simplex volumes sum to " + to_string(total) + ", P has normalized volume " +
                         to_string(p.normalized_volume()));
  std::vector<SimplexShape> shapes;
  for (std::size_t i = 0; i < t.simplices.size(); ++i) shapes.push_back(simplex_shape(t.simplex_points(i)));
  for (std::size_t i = 0; i < t.simplices.size(); ++i)
    for (std::size_t j = i + 1; j < t.simplices.size(); ++j)
      if (!proper_pair(t.simplices[i], t.simplices[j], shapes[i], shapes[j], t.vertices))
        return Verdict::fail("simplices " + describe(t.simplex_points(i)) + " and " + describe(t.simplex_points(j)) +
                             " do not meet in a common face");
  return {};
}

Verdict refines(const TriangulationComplex& t, const FiberedSubdivision& r) {
  for (std::size_t i = 0; i < t.simplices.size(); ++i) {
    bool found = false;
    for (const auto& cell : r.cells) {
      bool inside = true;
      for (int v : t.simplices[i])
        if (!cell.polytope.contains(t.vertices[v])) {
          inside = false;
          break;
        }
      if (inside) {
        found = true;
        break;
      }
    }
    if (!found) return Verdict::fail("simplex " + describe(t.simplex_points(i)) + " lies in no cell");
  }
  return {};
}

}  // namespace segfib
