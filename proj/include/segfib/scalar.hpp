#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/eigen.hpp>

#include <Eigen/Core>

#include <cstddef>
#include <iterator>
#include <type_traits>
#include <functional>
#include <string>
#include <vector>

// Eigen 3.4 expression types declare `const_iterator = void`, which trips
// Boost's byte-container detection during Eigen's scalar-promotion overload
// checks. Same trait, minus the hard error on void iterators.
namespace boost::multiprecision::detail {
template <class C>
struct is_byte_container_imp<C, true> {
  static constexpr bool compute() {
    using It = typename C::const_iterator;
    if constexpr (std::is_void_v<It>) {
      return false;
    } else {
      using V = std::remove_cv_t<typename std::iterator_traits<It>::value_type>;
      return std::is_integral_v<V> && sizeof(V) == 1;
    }
  }
  static const bool value = compute();
};
}  // namespace boost::multiprecision::detail

namespace segfib {

// Exact scalars. Expression templates are off so that Eigen and `auto`
// never hold dangling proxies.
using Integer = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                              boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<
    boost::multiprecision::rational_adaptor<boost::multiprecision::cpp_int_backend<>>,
    boost::multiprecision::et_off>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using IntVector = Vector<Integer>;
using IntMatrix = Matrix<Integer>;
using RatVector = Vector<Rational>;
using RatMatrix = Matrix<Rational>;

// A lattice point of Z^d.
using IntPoint = IntVector;

inline IntPoint make_point(std::initializer_list<long long> coords) {
  IntPoint p(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index i = 0;
  for (long long c : coords) p[i++] = c;
  return p;
}

template <typename Scalar>
Scalar abs_value(const Scalar& x) {
  return x < 0 ? Scalar(-x) : x;
}

template <typename Scalar>
Scalar gcd_value(Scalar a, Scalar b) {
  a = abs_value(a);
  b = abs_value(b);
  while (b != 0) {
    Scalar r = a % b;
    a = b;
    b = r;
  }
  return a;
}

// Extended gcd: returns g = gcd(a, b) >= 0 with s*a + t*b = g.
template <typename Scalar>
Scalar extended_gcd(const Scalar& a, const Scalar& b, Scalar& s, Scalar& t) {
  Scalar old_r = a, r = b;
  Scalar old_s = 1, cur_s = 0;
  Scalar old_t = 0, cur_t = 1;
  while (r != 0) {
    Scalar q = old_r / r;
    Scalar tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * cur_s;
    old_s = cur_s;
    cur_s = tmp;
    tmp = old_t - q * cur_t;
    old_t = cur_t;
    cur_t = tmp;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  s = old_s;
  t = old_t;
  return old_r;
}

// Floor and ceiling of a / b for b != 0.
template <typename Scalar>
Scalar floor_div(const Scalar& a, const Scalar& b) {
  Scalar q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
  return q;
}

template <typename Scalar>
Scalar ceil_div(const Scalar& a, const Scalar& b) {
  Scalar q = a / b;
  if ((a % b != 0) && ((a < 0) == (b < 0))) q += 1;
  return q;
}

Integer floor_of(const Rational& r);
Integer ceil_of(const Rational& r);

template <typename Derived>
auto content(const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  Scalar g = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) g = gcd_value<Scalar>(g, v(i));
  return g;
}

// Divides out the content; the zero vector is returned unchanged.
template <typename Scalar>
Vector<Scalar> primitive(const Vector<Scalar>& v) {
  Scalar g = content(v);
  if (g == 0 || g == 1) return v;
  Vector<Scalar> out = v;
  for (Eigen::Index i = 0; i < out.size(); ++i) out[i] /= g;
  return out;
}

template <typename Scalar>
bool lex_less(const Vector<Scalar>& a, const Vector<Scalar>& b) {
  const Eigen::Index n = std::min(a.size(), b.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    if (a[i] < b[i]) return true;
    if (b[i] < a[i]) return false;
  }
  return a.size() < b.size();
}

template <typename Scalar>
bool equal_vectors(const Vector<Scalar>& a, const Vector<Scalar>& b) {
  if (a.size() != b.size()) return false;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

struct LexLess {
  template <typename Scalar>
  bool operator()(const Vector<Scalar>& a, const Vector<Scalar>& b) const {
    return lex_less(a, b);
  }
};

struct PointEqual {
  template <typename Scalar>
  bool operator()(const Vector<Scalar>& a, const Vector<Scalar>& b) const {
    return equal_vectors(a, b);
  }
};

struct PointHash {
  std::size_t operator()(const IntPoint& p) const;
};

// Sorts lexicographically and removes duplicates.
void sort_unique(std::vector<IntPoint>& points);

// True iff `points` (sorted by sort_unique) contains `p`.
bool sorted_contains(const std::vector<IntPoint>& points, const IntPoint& p);

std::string to_string(const Integer& x);
std::string to_string(const Rational& x);
std::string to_string(const IntPoint& p);

Rational parse_rational(const std::string& text);

template <typename To, typename Derived>
Matrix<To> cast_matrix(const Eigen::MatrixBase<Derived>& m) {
  Matrix<To> out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = To(m(i, j));
  return out;
}

inline RatVector to_rational(const IntVector& v) {
  RatVector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = Rational(v[i]);
  return out;
}

}  // namespace segfib
