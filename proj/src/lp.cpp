#include "segfib/lp.hpp"

#include <stdexcept>

namespace segfib {

namespace {

Integer lcm_value(const Integer& a, const Integer& b) { return a / gcd_value(a, b) * b; }

}  // namespace

IntMatrix scale_rows(const RatMatrix& m) {
  IntMatrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Integer l = 1;
    for (Eigen::Index j = 0; j < m.cols(); ++j) l = lcm_value(l, Integer(denominator(m(i, j))));
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      Rational v = m(i, j) * Rational(l);
      out(i, j) = numerator(v);
    }
  }
  return out;
}

LpResult solve_feasibility(const IntMatrix& a, const IntVector& b) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  if (b.size() != m) throw std::invalid_argument("solve_feasibility: size mismatch");

  // Columns: n structural, m artificial, then the right-hand side. All rows
  // share the positive denominator `den`.
  const Eigen::Index cols = n + m + 1;
  const Eigen::Index rhs = n + m;
  IntMatrix t = IntMatrix::Zero(m + 1, cols);
  std::vector<Integer> sign(m, 1);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (b[i] < 0) sign[i] = -1;
    for (Eigen::Index j = 0; j < n; ++j) t(i, j) = sign[i] * a(i, j);
    t(i, n + i) = 1;
    t(i, rhs) = sign[i] * b[i];
  }
  // Reduced costs of min sum(artificials); the last row holds -objective.
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) t(m, j) -= t(i, j);
    t(m, rhs) -= t(i, rhs);
  }
  std::vector<Eigen::Index> basis(m);
  for (Eigen::Index i = 0; i < m; ++i) basis[i] = n + i;
  Integer den = 1;
  // Dantzig's rule until a run of degenerate pivots, then Bland's rule,
  // which cannot cycle.
  bool bland = false;
  int degenerate = 0;

  for (;;) {
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < n + m; ++j)
      if (t(m, j) < 0) {
        if (enter < 0 || (!bland && t(m, j) < t(m, enter))) enter = j;
        if (bland) break;
      }
    if (enter < 0) break;
    Eigen::Index leave = -1;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (t(i, enter) <= 0) continue;
      if (leave < 0) {
        leave = i;
        continue;
      }
      // Compare rhs_i / t_i,enter with rhs_leave / t_leave,enter.
      Integer lhs = t(i, rhs) * t(leave, enter);
      Integer rhs_cmp = t(leave, rhs) * t(i, enter);
      if (lhs < rhs_cmp || (lhs == rhs_cmp && basis[i] < basis[leave])) leave = i;
    }
    if (leave < 0) throw std::logic_error("solve_feasibility: phase one is unbounded");
    if (t(leave, rhs) == 0) {
      if (++degenerate > 50) bland = true;
    } else {
      degenerate = 0;
    }
    const Integer p = t(leave, enter);
    for (Eigen::Index i = 0; i <= m; ++i) {
      if (i == leave) continue;
      const Integer f = t(i, enter);
      for (Eigen::Index j = 0; j < cols; ++j) t(i, j) = (p * t(i, j) - f * t(leave, j)) / den;
    }
    den = p;
    basis[leave] = enter;
  }

  LpResult out;
  out.feasible = t(m, rhs) == 0;
  if (out.feasible) {
    out.solution = RatVector::Zero(n);
    for (Eigen::Index i = 0; i < m; ++i)
      if (basis[i] < n) out.solution[basis[i]] = Rational(t(i, rhs)) / Rational(den);
  } else {
    // Dual of phase one: pi_i = 1 - (reduced cost of artificial i).
    out.farkas = RatVector(m);
    for (Eigen::Index i = 0; i < m; ++i)
      out.farkas[i] = (Rational(1) - Rational(t(m, n + i)) / Rational(den)) * Rational(sign[i]);
  }
  return out;
}

}  // namespace segfib
