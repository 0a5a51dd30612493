#pragma once

// Brute-force reference computations for the test suites. Everything here
// works on plain machine integers and shares no code with the library.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <vector>

namespace oracle {

using Pt = std::vector<long long>;

inline long long det(std::vector<std::vector<long long>> m) {
  // Laplace expansion; matrices here are at most 5x5.
  const std::size_t n = m.size();
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  long long total = 0;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::vector<long long>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<long long> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(m[r][k]);
      minor.push_back(row);
    }
    long long term = m[0][c] * det(minor);
    total += (c % 2 == 0) ? term : -term;
  }
  return total;
}

inline void combinations(int n, int k, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> idx(k);
  std::function<void(int, int)> rec = [&](int pos, int start) {
    if (pos == k) {
      fn(idx);
      return;
    }
    for (int i = start; i < n; ++i) {
      idx[pos] = i;
      rec(pos + 1, i + 1);
    }
  };
  rec(0, 0);
}

// gcd of all maximal minors of the rows (k vectors in Z^d, k <= d).
inline long long minor_gcd(const std::vector<Pt>& rows) {
  const int k = static_cast<int>(rows.size());
  const int d = k ? static_cast<int>(rows[0].size()) : 0;
  long long g = 0;
  combinations(d, k, [&](const std::vector<int>& cols) {
    std::vector<std::vector<long long>> m(k, std::vector<long long>(k));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) m[i][j] = rows[i][cols[j]];
    g = std::gcd(g, std::llabs(det(m)));
  });
  return g;
}

struct Halfspace {
  Pt normal;
  long long offset;  // normal . x >= offset
};

// Facets of conv(points) by checking every hyperplane through d of the points.
inline std::vector<Halfspace> brute_facets(const std::vector<Pt>& points) {
  const int n = static_cast<int>(points.size());
  const int d = static_cast<int>(points[0].size());
  std::set<std::pair<Pt, long long>> found;
  combinations(n, d, [&](const std::vector<int>& idx) {
    std::vector<Pt> diffs;
    for (int i = 1; i < d; ++i) {
      Pt v(d);
      for (int j = 0; j < d; ++j) v[j] = points[idx[i]][j] - points[idx[0]][j];
      diffs.push_back(v);
    }
    Pt normal(d);
    for (int c = 0; c < d; ++c) {
      std::vector<std::vector<long long>> m;
      for (const auto& v : diffs) {
        std::vector<long long> row;
        for (int j = 0; j < d; ++j)
          if (j != c) row.push_back(v[j]);
        m.push_back(row);
      }
      long long x = det(m);
      normal[c] = (c % 2 == 0) ? x : -x;
    }
    long long g = 0;
    for (long long x : normal) g = std::gcd(g, std::llabs(x));
    if (g == 0) return;
    for (auto& x : normal) x /= g;
    long long off = 0;
    for (int j = 0; j < d; ++j) off += normal[j] * points[idx[0]][j];
    bool pos = true, neg = true;
    for (const auto& p : points) {
      long long s = -off;
      for (int j = 0; j < d; ++j) s += normal[j] * p[j];
      if (s < 0) pos = false;
      if (s > 0) neg = false;
    }
    if (pos) found.insert({normal, off});
    if (neg) {
      for (auto& x : normal) x = -x;
      found.insert({normal, -off});
    }
  });
  std::vector<Halfspace> out;
  for (const auto& [n, o] : found) out.push_back({n, o});
  return out;
}

// Lattice points of k * conv(points), by scanning the bounding box.
inline std::vector<Pt> brute_lattice_points(const std::vector<Pt>& points, long long k = 1) {
  const int d = static_cast<int>(points[0].size());
  auto facets = brute_facets(points);
  Pt lo(d), hi(d);
  for (int j = 0; j < d; ++j) {
    lo[j] = hi[j] = points[0][j] * k;
    for (const auto& p : points) {
      lo[j] = std::min(lo[j], p[j] * k);
      hi[j] = std::max(hi[j], p[j] * k);
    }
  }
  std::vector<Pt> out;
  Pt x(d);
  std::function<void(int)> rec = [&](int j) {
    if (j == d) {
      for (const auto& f : facets) {
        long long s = 0;
        for (int i = 0; i < d; ++i) s += f.normal[i] * x[i];
        if (s < f.offset * k) return;
      }
      out.push_back(x);
      return;
    }
    for (long long v = lo[j]; v <= hi[j]; ++v) {
      x[j] = v;
      rec(j + 1);
    }
  };
  rec(0);
  return out;
}

// All sums of k points (with repetition), enumerated as multisets.
inline std::set<Pt> brute_monoid_slice(const std::vector<Pt>& gens, int k) {
  const int n = static_cast<int>(gens.size());
  const int d = n ? static_cast<int>(gens[0].size()) : 0;
  std::set<Pt> out;
  std::vector<int> counts(n, 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == n - 1) {
      counts[i] = left;
      Pt s(d, 0);
      for (int a = 0; a < n; ++a)
        for (int j = 0; j < d; ++j) s[j] += counts[a] * gens[a][j];
      out.insert(s);
      return;
    }
    for (int c = 0; c <= left; ++c) {
      counts[i] = c;
      rec(i + 1, left - c);
    }
  };
  if (k == 0) {
    out.insert(Pt(d, 0));
    return out;
  }
  rec(0, k);
  return out;
}

inline long long binom(long long n, long long k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Cone {x : A x >= 0} given by brute-force facets of the generators.
struct Cone {
  std::vector<Halfspace> facets;
  bool contains(const Pt& x) const {
    for (const auto& f : facets) {
      long long s = 0;
      for (std::size_t i = 0; i < x.size(); ++i) s += f.normal[i] * x[i];
      if (s < 0) return false;
    }
    return true;
  }
};

inline Cone brute_cone(const std::vector<Pt>& gens) {
  std::vector<Pt> pts = gens;
  pts.push_back(Pt(gens[0].size(), 0));
  Cone c;
  for (const auto& f : brute_facets(pts))
    if (f.offset == 0) c.facets.push_back(f);
  return c;
}

// Nonnegative lattice points with coordinate sum <= bound inside the cone.
inline std::vector<Pt> cone_points_up_to(const Cone& cone, int d, long long bound) {
  std::vector<Pt> out;
  Pt x(d, 0);
  std::function<void(int, long long)> rec = [&](int j, long long left) {
    if (j == d) {
      if (cone.contains(x)) out.push_back(x);
      return;
    }
    for (long long v = 0; v <= left; ++v) {
      x[j] = v;
      rec(j + 1, left - v);
    }
  };
  rec(0, bound);
  return out;
}

// Irreducible nonzero cone points among those with coordinate sum <= bound.
inline std::set<Pt> brute_hilbert_basis(const Cone& cone, int d, long long bound) {
  auto pts = cone_points_up_to(cone, d, bound);
  std::set<Pt> all(pts.begin(), pts.end());
  std::set<Pt> out;
  Pt zero(d, 0);
  for (const auto& p : pts) {
    if (p == zero) continue;
    bool reducible = false;
    for (const auto& q : pts) {
      if (q == zero || q == p) continue;
      Pt r(d);
      bool ok = true;
      for (int j = 0; j < d; ++j) {
        r[j] = p[j] - q[j];
        if (r[j] < 0) ok = false;
      }
      if (ok && r != zero && all.count(r)) {
        reducible = true;
        break;
      }
    }
    if (!reducible) out.insert(p);
  }
  return out;
}

// Membership in the monoid generated by nonzero nonnegative vectors, by
// exhaustive subtraction (coordinate sums strictly decrease).
inline bool in_monoid(const std::vector<Pt>& gens, const Pt& x, std::map<Pt, bool>& memo) {
  bool zero = true;
  for (long long v : x) {
    if (v < 0) return false;
    if (v != 0) zero = false;
  }
  if (zero) return true;
  auto it = memo.find(x);
  if (it != memo.end()) return it->second;
  bool found = false;
  for (const auto& g : gens) {
    Pt r(x.size());
    bool ok = true;
    for (std::size_t j = 0; j < x.size(); ++j) {
      r[j] = x[j] - g[j];
      if (r[j] < 0) ok = false;
    }
    if (ok && in_monoid(gens, r, memo)) {
      found = true;
      break;
    }
  }
  memo[x] = found;
  return found;
}

}  // namespace oracle
