#include "segfib/families.hpp"

#include <algorithm>

namespace segfib {

namespace {

// Some y in Z^n with a * y = b, if one exists.
std::optional<IntVector> integer_solution(const IntMatrix& a, const IntVector& b) {
  const Eigen::Index n = a.cols();
  if (a.rows() == 0) return IntVector(IntVector::Zero(n));
  auto snf = smith_normal_form(a);
  IntVector c = snf.left * b;
  IntVector z = IntVector::Zero(n);
  const Eigen::Index r = static_cast<Eigen::Index>(snf.divisors.size());
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    if (i < r) {
      if (c[i] % snf.divisors[i] != 0) return std::nullopt;
      z[i] = c[i] / snf.divisors[i];
    } else if (c[i] != 0) {
      return std::nullopt;
    }
  }
  return IntVector(snf.right * z);
}

AffineMap affine_form(const IntVector& coeffs, Eigen::Index dim, const char* what) {
  if (coeffs.size() != dim + 1)
    throw FamilyError(std::string(what) + ": expected " + std::to_string(dim + 1) + " coefficients");
  AffineMap f;
  f.matrix = coeffs.head(dim).transpose();
  f.offset = IntVector::Constant(1, coeffs[dim]);
  return f;
}

LatticePolytope unit_square() { return unit_cube(2); }

}  // namespace

LatticePolytope unit_cube(int d) {
  std::vector<IntPoint> pts;
  for (int mask = 0; mask < (1 << d); ++mask) {
    IntPoint p(d);
    for (int j = 0; j < d; ++j) p[j] = (mask >> (d - 1 - j)) & 1;
    pts.push_back(p);
  }
  return LatticePolytope::from_points(pts);
}

FamilyInstance make_segment_polytope(const IntervalQuadruple& q) {
  static const int corners[4][2] = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  std::vector<IntPoint> pts;
  for (int k = 0; k < 4; ++k) {
    const auto& [a, b] = q.intervals[k];
    if (!(a < b)) throw FamilyError("make_segment_polytope: interval " + std::to_string(k + 1) + " is degenerate");
    IntPoint lo(3), hi(3);
    lo << corners[k][0], corners[k][1], a;
    hi << corners[k][0], corners[k][1], b;
    pts.push_back(lo);
    pts.push_back(hi);
  }
  return FamilyInstance{LatticePolytope::from_points(pts), AffineMap::drop_last(3), unit_square()};
}

FamilyInstance make_pm(long long m) {
  if (m < 0) throw FamilyError("make_pm: m must be nonnegative");
  IntervalQuadruple q;
  q.intervals = {{{0, 1}, {0, 1}, {0, 1}, {m, m + 1}}};
  return make_segment_polytope(q);
}

FamilyInstance make_nakajima(const NakajimaSpec& spec) {
  const Eigen::Index d = spec.base.dim();
  for (const AffineMap* f : {&spec.alpha, &spec.beta})
    if (f->source_dim() != d || f->target_dim() != 1) throw FamilyError("make_nakajima: forms must map Z^d to Z");
  bool strict = false;
  for (const auto& x : spec.base.lattice_points()) {
    Integer a = spec.alpha(x)[0];
    Integer b = spec.beta(x)[0];
    if (a > b) throw FamilyError("make_nakajima: alpha > beta at " + to_string(x));
    if (a < b) strict = true;
  }
  if (!strict) throw FamilyError("make_nakajima: alpha = beta on the whole base");
  std::vector<IntPoint> pts;
  for (const auto& v : spec.base.vertices()) {
    for (const AffineMap* f : {&spec.alpha, &spec.beta}) {
      IntPoint p(d + 1);
      p.head(d) = v;
      p[d] = (*f)(v)[0];
      pts.push_back(p);
    }
  }
  return FamilyInstance{LatticePolytope::from_points(pts), AffineMap::drop_last(d + 1), spec.base};
}

std::vector<FamilyInstance> make_nakajima_tower(const std::vector<NakajimaStep>& steps) {
  std::vector<FamilyInstance> levels;
  LatticePolytope current = LatticePolytope::from_points({IntPoint(0)});
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const Eigen::Index d = current.dim();
    NakajimaSpec spec{current, affine_form(steps[i].alpha, d, "nakajima step alpha"),
                      affine_form(steps[i].beta, d, "nakajima step beta")};
    levels.push_back(make_nakajima(spec));
    current = levels.back().polytope;
  }
  return levels;
}

LatticePolytope product_with_segment(const LatticePolytope& p) {
  const Eigen::Index d = p.dim();
  std::vector<IntPoint> pts;
  for (const auto& v : p.vertices())
    for (int t = 0; t <= 1; ++t) {
      IntPoint q(d + 1);
      q.head(d) = v;
      q[d] = t;
      pts.push_back(q);
    }
  return LatticePolytope::from_points(pts);
}

FibrationCheck check_fibration(const AffineMap& f, const LatticePolytope& p, const LatticePolytope& q) {
  FibrationCheck out;
  if (f.source_dim() != p.dim() || f.target_dim() != q.dim()) {
    out.failure = "dimension mismatch between the map and the polytopes";
    return out;
  }
  IntMatrix kernel = integer_kernel(f.matrix);
  if (kernel.rows() != 1) {
    out.failure = "condition (i): ker f has dimension " + std::to_string(kernel.rows()) + ", fibers are not segments";
    return out;
  }
  IntVector k = primitive(IntVector(kernel.row(0).transpose()));
  for (Eigen::Index i = k.size() - 1; i >= 0; --i)
    if (k[i] != 0) {
      if (k[i] < 0) k = -k;
      break;
    }
  out.direction = k;

  for (const auto& v : p.vertices())
    if (!q.contains(f(v))) {
      out.failure = "f does not map P into Q (vertex " + to_string(v) + ")";
      return out;
    }

  const auto p_points = p.lattice_points();
  for (const auto& y : p_points)
    if (!q.contains(f(y))) {
      out.failure = "condition (iii): lattice point " + to_string(y) + " maps outside Q";
      return out;
    }

  bool has_segment = false;
  for (const auto& x : q.lattice_points()) {
    auto y0 = integer_solution(f.matrix, IntVector(x - f.offset));
    if (!y0) {
      out.failure = "condition (i): the fiber over " + to_string(x) + " contains no lattice point";
      return out;
    }
    std::optional<Rational> lo, hi;
    bool empty = false;
    for (const auto& facet : p.hrep().facets) {
      Integer nk = facet.normal.dot(k);
      Integer rest = facet.offset - facet.normal.dot(*y0);
      if (nk == 0) {
        if (rest > 0) empty = true;
        continue;
      }
      Rational bound = Rational(rest) / Rational(nk);
      if (nk > 0) {
        if (!lo || bound > *lo) lo = bound;
      } else {
        if (!hi || bound < *hi) hi = bound;
      }
    }
    if (empty || !lo || !hi || *lo > *hi) {
      out.failure = "condition (i): the fiber over " + to_string(x) + " is empty";
      return out;
    }
    if (denominator(*lo) != 1 || denominator(*hi) != 1) {
      out.failure = "condition (i): the fiber over " + to_string(x) + " is not a lattice segment";
      return out;
    }
    if (*lo < *hi) has_segment = true;
    IntPoint low = *y0 + Integer(numerator(*lo)) * k;
    IntPoint high = *y0 + Integer(numerator(*hi)) * k;
    out.fiber_table.push_back(FiberEntry{x, low, high});
  }
  if (!has_segment) {
    out.failure = "condition (ii): every fiber is a single point";
    return out;
  }

  // L(P) = L(Q) + Z k, i.e. rank goes up by one and f maps L(P) onto L(Q).
  auto lp = lattice_span(p_points);
  auto lq = lattice_span(q.lattice_points());
  IntMatrix image(lp.rank(), q.dim());
  for (Eigen::Index i = 0; i < lp.rank(); ++i) image.row(i) = (f.matrix * lp.basis.row(i).transpose()).transpose();
  SublatticeBasis mapped{hermite_normal_form(image).form, q.dim()};
  if (mapped.basis.rows() == 0) mapped.basis = IntMatrix(0, q.dim());
  if (lp.rank() != lq.rank() + 1 || !(mapped == lq)) {
    out.failure = "lattice splitting: L(P) is not L(Q) + Z (ker f)";
    return out;
  }
  out.ok = true;
  return out;
}

}  // namespace segfib
