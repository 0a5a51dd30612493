#pragma once

// Exact linear algebra over the integers and the rationals. Everything here is
// templated on the scalar so it works for Integer, Rational and machine ints.

#include "segfib/scalar.hpp"

#include <stdexcept>
#include <utility>

namespace segfib {

template <typename Scalar>
struct HermiteResult {
  Matrix<Scalar> form;       // rank x cols, row echelon, positive pivots
  Matrix<Scalar> transform;  // rows x rows unimodular, transform * input = [form; 0]
  std::vector<Eigen::Index> pivots;
};

namespace detail {

template <typename Scalar>
void combine_rows(Matrix<Scalar>& m, Eigen::Index r, Eigen::Index i, const Scalar& s,
                  const Scalar& t, const Scalar& u, const Scalar& v) {
  // [row_r; row_i] <- [[s, t], [u, v]] * [row_r; row_i]
  for (Eigen::Index k = 0; k < m.cols(); ++k) {
    Scalar a = m(r, k);
    Scalar b = m(i, k);
    m(r, k) = s * a + t * b;
    m(i, k) = u * a + v * b;
  }
}

template <typename Scalar>
void add_row_multiple(Matrix<Scalar>& m, Eigen::Index dst, Eigen::Index src, const Scalar& q) {
  if (q == 0) return;
  for (Eigen::Index k = 0; k < m.cols(); ++k) m(dst, k) += q * m(src, k);
}

template <typename Scalar>
void add_col_multiple(Matrix<Scalar>& m, Eigen::Index dst, Eigen::Index src, const Scalar& q) {
  if (q == 0) return;
  for (Eigen::Index k = 0; k < m.rows(); ++k) m(k, dst) += q * m(k, src);
}

}  // namespace detail

// Row-style Hermite normal form: the rows of `form` are the unique HNF basis
// of the row lattice of `input`.
template <typename Derived>
HermiteResult<typename Derived::Scalar> hermite_normal_form(const Eigen::MatrixBase<Derived>& input) {
  using Scalar = typename Derived::Scalar;
  Matrix<Scalar> h = input;
  const Eigen::Index rows = h.rows();
  const Eigen::Index cols = h.cols();
  Matrix<Scalar> u = Matrix<Scalar>::Identity(rows, rows);
  std::vector<Eigen::Index> pivots;

  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
    for (Eigen::Index i = r + 1; i < rows; ++i) {
      if (h(i, c) == 0) continue;
      Scalar a = h(r, c);
      Scalar b = h(i, c);
      Scalar s, t;
      Scalar g = extended_gcd(a, b, s, t);
      Scalar ua = -(b / g);
      Scalar va = a / g;
      detail::combine_rows(h, r, i, s, t, ua, va);
      detail::combine_rows(u, r, i, s, t, ua, va);
    }
    if (h(r, c) == 0) continue;
    if (h(r, c) < 0) {
      h.row(r) = -h.row(r);
      u.row(r) = -u.row(r);
    }
    for (Eigen::Index k = 0; k < r; ++k) {
      Scalar q = floor_div<Scalar>(h(k, c), h(r, c));
      detail::add_row_multiple<Scalar>(h, k, r, Scalar(-q));
      detail::add_row_multiple<Scalar>(u, k, r, Scalar(-q));
    }
    pivots.push_back(c);
    ++r;
  }
  HermiteResult<Scalar> out;
  out.form = h.topRows(r);
  out.transform = std::move(u);
  out.pivots = std::move(pivots);
  return out;
}

template <typename Scalar>
struct SmithResult {
  std::vector<Scalar> divisors;  // nonzero elementary divisors, d_1 | d_2 | ...
  Matrix<Scalar> left;           // unimodular, rows x rows
  Matrix<Scalar> right;          // unimodular, cols x cols; left * input * right = diag
};

template <typename Derived>
SmithResult<typename Derived::Scalar> smith_normal_form(const Eigen::MatrixBase<Derived>& input) {
  using Scalar = typename Derived::Scalar;
  Matrix<Scalar> d = input;
  const Eigen::Index m = d.rows();
  const Eigen::Index n = d.cols();
  Matrix<Scalar> p = Matrix<Scalar>::Identity(m, m);
  Matrix<Scalar> q = Matrix<Scalar>::Identity(n, n);
  SmithResult<Scalar> out;

  for (Eigen::Index t = 0; t < std::min(m, n); ++t) {
    // Move the smallest nonzero entry of the trailing block to (t, t).
    auto place_min = [&](bool whole_block) -> bool {
      Eigen::Index bi = -1, bj = -1;
      Scalar best = 0;
      for (Eigen::Index i = t; i < m; ++i)
        for (Eigen::Index j = t; j < n; ++j) {
          if (!whole_block && i != t && j != t) continue;
          if (d(i, j) == 0) continue;
          Scalar a = abs_value(d(i, j));
          if (bi < 0 || a < best) {
            best = a;
            bi = i;
            bj = j;
          }
        }
      if (bi < 0) return false;
      if (bi != t) {
        d.row(t).swap(d.row(bi));
        p.row(t).swap(p.row(bi));
      }
      if (bj != t) {
        d.col(t).swap(d.col(bj));
        q.col(t).swap(q.col(bj));
      }
      return true;
    };
    if (!place_min(true)) break;

    for (;;) {
      bool clean = true;
      for (Eigen::Index i = t + 1; i < m; ++i) {
        if (d(i, t) == 0) continue;
        Scalar f = floor_div<Scalar>(d(i, t), d(t, t));
        detail::add_row_multiple<Scalar>(d, i, t, Scalar(-f));
        detail::add_row_multiple<Scalar>(p, i, t, Scalar(-f));
        if (d(i, t) != 0) clean = false;
      }
      for (Eigen::Index j = t + 1; j < n; ++j) {
        if (d(t, j) == 0) continue;
        Scalar f = floor_div<Scalar>(d(t, j), d(t, t));
        detail::add_col_multiple<Scalar>(d, j, t, Scalar(-f));
        detail::add_col_multiple<Scalar>(q, j, t, Scalar(-f));
        if (d(t, j) != 0) clean = false;
      }
      if (!clean) {
        place_min(false);
        continue;
      }
      // Enforce divisibility of the trailing block by the pivot.
      Eigen::Index bad = -1;
      for (Eigen::Index i = t + 1; i < m && bad < 0; ++i)
        for (Eigen::Index j = t + 1; j < n; ++j)
          if (d(i, j) % d(t, t) != 0) {
            bad = i;
            break;
          }
      if (bad < 0) break;
      detail::add_row_multiple<Scalar>(d, t, bad, Scalar(1));
      detail::add_row_multiple<Scalar>(p, t, bad, Scalar(1));
    }
    if (d(t, t) < 0) {
      d.row(t) = -d.row(t);
      p.row(t) = -p.row(t);
    }
    out.divisors.push_back(d(t, t));
  }
  out.left = std::move(p);
  out.right = std::move(q);
  return out;
}

// Fraction-free (Bareiss) determinant of a square matrix.
template <typename Derived>
typename Derived::Scalar determinant(const Eigen::MatrixBase<Derived>& input) {
  using Scalar = typename Derived::Scalar;
  if (input.rows() != input.cols()) throw std::invalid_argument("determinant: matrix not square");
  const Eigen::Index n = input.rows();
  if (n == 0) return Scalar(1);
  Matrix<Scalar> a = input;
  Scalar sign = 1;
  Scalar prev = 1;
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      Eigen::Index swap = -1;
      for (Eigen::Index i = k + 1; i < n; ++i)
        if (a(i, k) != 0) {
          swap = i;
          break;
        }
      if (swap < 0) return Scalar(0);
      a.row(k).swap(a.row(swap));
      sign = -sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i)
      for (Eigen::Index j = k + 1; j < n; ++j) a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

// Rank over the rationals.
template <typename Derived>
Eigen::Index rank(const Eigen::MatrixBase<Derived>& input) {
  using Scalar = typename Derived::Scalar;
  Matrix<Scalar> a = input;
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < a.cols() && r < a.rows(); ++c) {
    Eigen::Index piv = -1;
    for (Eigen::Index i = r; i < a.rows(); ++i)
      if (a(i, c) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    a.row(r).swap(a.row(piv));
    for (Eigen::Index i = r + 1; i < a.rows(); ++i) {
      if (a(i, c) == 0) continue;
      Scalar f = a(i, c);
      Scalar g = a(r, c);
      for (Eigen::Index j = c; j < a.cols(); ++j) a(i, j) = a(i, j) * g - a(r, j) * f;
    }
    ++r;
  }
  return r;
}

// Basis (as rows) of the integer kernel {x in Z^n : input * x = 0}.
template <typename Derived>
Matrix<typename Derived::Scalar> integer_kernel(const Eigen::MatrixBase<Derived>& input) {
  using Scalar = typename Derived::Scalar;
  Matrix<Scalar> transposed = input.transpose();
  auto h = hermite_normal_form(transposed);
  const Eigen::Index r = h.form.rows();
  return h.transform.bottomRows(transposed.rows() - r);
}

// Solves a square nonsingular rational system; throws if singular.
RatVector solve_exact(const RatMatrix& a, const RatVector& b);

}  // namespace segfib
