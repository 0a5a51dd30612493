#include "segfib/scalar.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace segfib {

Integer floor_of(const Rational& r) {
  return floor_div<Integer>(boost::multiprecision::numerator(r), boost::multiprecision::denominator(r));
}

Integer ceil_of(const Rational& r) {
  return ceil_div<Integer>(boost::multiprecision::numerator(r), boost::multiprecision::denominator(r));
}

std::size_t PointHash::operator()(const IntPoint& p) const {
  std::size_t h = 0x9e3779b97f4a7c15ull ^ static_cast<std::size_t>(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const Integer& x = p[i];
    std::size_t v;
    if (x >= std::numeric_limits<long long>::min() && x <= std::numeric_limits<long long>::max())
      v = std::hash<long long>{}(static_cast<long long>(x));
    else
      v = std::hash<std::string>{}(x.str());
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

void sort_unique(std::vector<IntPoint>& points) {
  std::sort(points.begin(), points.end(), LexLess{});
  points.erase(std::unique(points.begin(), points.end(), PointEqual{}), points.end());
}

bool sorted_contains(const std::vector<IntPoint>& points, const IntPoint& p) {
  return std::binary_search(points.begin(), points.end(), p, LexLess{});
}

std::string to_string(const Integer& x) { return x.str(); }

std::string to_string(const Rational& x) {
  if (boost::multiprecision::denominator(x) == 1) return boost::multiprecision::numerator(x).str();
  return boost::multiprecision::numerator(x).str() + "/" + boost::multiprecision::denominator(x).str();
}

std::string to_string(const IntPoint& p) {
  std::ostringstream out;
  out << '(';
  for (Eigen::Index i = 0; i < p.size(); ++i) out << (i ? "," : "") << p[i].str();
  out << ')';
  return out.str();
}

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(Integer(text));
    Integer num(text.substr(0, slash));
    Integer den(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(num) / Rational(den);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a rational number: '" + text + "'");
  }
}

}  // namespace segfib
