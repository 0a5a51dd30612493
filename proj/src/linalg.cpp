#include "segfib/linalg.hpp"

namespace segfib {

RatVector solve_exact(const RatMatrix& a, const RatVector& b) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || b.size() != n) throw std::invalid_argument("solve_exact: shape mismatch");
  RatMatrix m(n, n + 1);
  m.leftCols(n) = a;
  m.col(n) = b;
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index piv = -1;
    for (Eigen::Index i = c; i < n; ++i)
      if (m(i, c) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) throw std::domain_error("solve_exact: singular system");
    m.row(c).swap(m.row(piv));
    Rational inv = Rational(1) / m(c, c);
    for (Eigen::Index j = c; j <= n; ++j) m(c, j) *= inv;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == c || m(i, c) == 0) continue;
      Rational f = m(i, c);
      for (Eigen::Index j = c; j <= n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return m.col(n);
}

}  // namespace segfib
