#pragma once

#include "oracle.hpp"
#include "segfib/scalar.hpp"

#include <vector>

namespace testing_support {

inline segfib::IntPoint to_int_point(const oracle::Pt& p) {
  segfib::IntPoint out(static_cast<Eigen::Index>(p.size()));
  for (std::size_t i = 0; i < p.size(); ++i) out[static_cast<Eigen::Index>(i)] = p[i];
  return out;
}

inline oracle::Pt to_pt(const segfib::IntPoint& p) {
  oracle::Pt out(static_cast<std::size_t>(p.size()));
  for (Eigen::Index i = 0; i < p.size(); ++i) out[static_cast<std::size_t>(i)] = static_cast<long long>(p[i]);
  return out;
}

inline std::vector<segfib::IntPoint> to_int_points(const std::vector<oracle::Pt>& pts) {
  std::vector<segfib::IntPoint> out;
  for (const auto& p : pts) out.push_back(to_int_point(p));
  return out;
}

inline std::vector<oracle::Pt> to_pts(const std::vector<segfib::IntPoint>& pts) {
  std::vector<oracle::Pt> out;
  for (const auto& p : pts) out.push_back(to_pt(p));
  return out;
}

// The eight lattice points of P_m, in the column order of the defining matrix.
inline std::vector<oracle::Pt> pm_points(long long m) {
  return {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {1, 1, m}, {1, 1, m + 1}};
}

inline std::vector<oracle::Pt> cube_points(int d) {
  std::vector<oracle::Pt> out;
  for (int mask = 0; mask < (1 << d); ++mask) {
    oracle::Pt p(d);
    for (int j = 0; j < d; ++j) p[j] = (mask >> (d - 1 - j)) & 1;
    out.push_back(p);
  }
  return out;
}

}  // namespace testing_support
