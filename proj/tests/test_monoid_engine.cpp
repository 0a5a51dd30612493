#include "doctest.h"
#include "support.hpp"

#include "segfib/monoid.hpp"

#include <random>
#include <set>

using namespace segfib;
using testing_support::cube_points;
using testing_support::pm_points;
using testing_support::to_int_points;
using testing_support::to_pts;

namespace {

PointConfig pm_config(long long m) { return PointConfig(to_int_points(pm_points(m))); }

PointConfig cube_config(int d) { return PointConfig(to_int_points(cube_points(d))); }

std::vector<long long> as_longs(const std::vector<Integer>& v) {
  std::vector<long long> out;
  for (const auto& x : v) out.push_back(static_cast<long long>(x));
  return out;
}

std::vector<oracle::Pt> random_config(std::mt19937& rng, int d, int n, int lo, int hi) {
  std::uniform_int_distribution<int> coord(lo, hi);
  std::vector<oracle::Pt> pts;
  for (int i = 0; i < n; ++i) {
    oracle::Pt p(d);
    for (auto& x : p) x = coord(rng);
    pts.push_back(p);
  }
  return pts;
}

}  // namespace

TEST_CASE("generated slices examples") {
  PointConfig square({make_point({0, 0}), make_point({1, 0}), make_point({0, 1}), make_point({1, 1})});
  auto s = generated_slices(square, 2);
  CHECK(s.height_slices[0].size() == 1);
  CHECK(s.height_slices[2].size() == 9);

  auto p5 = generated_slices(pm_config(5), 3);
  CHECK(p5.height_slices[2].size() == 30);
  CHECK(p5.height_slices[3].size() == 80);
}

TEST_CASE("generated slices agree with the multiset oracle") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    auto pts = random_config(rng, 3, 5, -2, 2);
    PointConfig config(to_int_points(pts));
    auto slices = generated_slices(config, 3);
    for (int k = 0; k <= 3; ++k) {
      auto brute = oracle::brute_monoid_slice(to_pts(config.points()), k);
      auto mine = to_pts(slices.height_slices[k]);
      CHECK(std::set<oracle::Pt>(mine.begin(), mine.end()) == brute);
    }
  }
}

TEST_CASE("normalized slices examples") {
  auto p5 = normalized_slices(pm_config(5), 3);
  CHECK(p5.height_slices[1].size() == 8);
  CHECK(p5.height_slices[2].size() == 32);
  CHECK(p5.height_slices[3].size() == 84);

  // Height one is the set of lattice points of conv(A).
  PointConfig tri({make_point({0, 0}), make_point({3, 0}), make_point({0, 3}), make_point({1, 0}), make_point({0, 1})});
  auto t = normalized_slices(tri, 1);
  CHECK(t.height_slices[1].size() == 10);

  // Sublattice configs count only points of the affine lattice.
  PointConfig sparse({make_point({0, 0}), make_point({2, 0}), make_point({0, 2})});
  CHECK(normalized_slices(sparse, 1).height_slices[1].size() == 3);
  CHECK_THROWS_AS(normalized_slices(PointConfig({make_point({0, 0}), make_point({1, 1})}), 1), GeometryError);
}

TEST_CASE("gap_vector examples") {
  auto p5 = gap_vector(pm_config(5));
  CHECK(as_longs(p5.gap_vector) == std::vector<long long>{0, 2, 4});
  CHECK(p5.gamma == 3);
  CHECK(p5.stop_height == 4);
  REQUIRE(p5.witnesses.size() == 2);
  CHECK(p5.witnesses[0].height == 2);
  CHECK(p5.witnesses[1].height == 3);

  auto p6 = gap_vector(pm_config(6));
  CHECK(as_longs(p6.gap_vector) == std::vector<long long>{0, 3, 8, 10});
  CHECK(p6.gamma == 4);

  auto cube = gap_vector(cube_config(3));
  CHECK(cube.gap_vector.empty());
  CHECK(cube.gamma == 0);
  CHECK(cube.stop_height == 2);
}

TEST_CASE("gap witnesses are lexicographically smallest gaps") {
  auto config = pm_config(6);
  auto report = gap_vector(config);
  auto gen = generated_slices(config, report.gamma);
  auto nor = normalized_slices(config, report.gamma);
  for (const auto& w : report.witnesses) {
    const auto& g = gen.height_slices[w.height];
    const auto& n = nor.height_slices[w.height];
    CHECK(sorted_contains(n, w.point));
    CHECK_FALSE(sorted_contains(g, w.point));
    for (const auto& p : n) {
      if (!lex_less(p, w.point)) break;
      CHECK(sorted_contains(g, p));
    }
  }
}

TEST_CASE("gap vector of P_m matches the closed form") {
  for (long long m = 3; m <= 7; ++m) {
    auto report = gap_vector(pm_config(m));
    std::vector<long long> expected;
    for (long long k = 1; k <= m - 2; ++k) expected.push_back(oracle::binom(k + 1, 3) * (m - k - 1));
    while (!expected.empty() && expected.back() == 0) expected.pop_back();
    CHECK(as_longs(report.gap_vector) == expected);
    if (m >= 4) CHECK(report.gamma == m - 2);
  }
  // m = 3: the closed form vanishes identically.
  CHECK(gap_vector(pm_config(3)).gamma == 0);
}

TEST_CASE("slice containment and the stopping rule on random configs") {
  std::mt19937 rng(17);
  int checked = 0;
  while (checked < 25) {
    auto pts = random_config(rng, 3, 5, 0, 3);
    auto ipts = to_int_points(pts);
    if (lattice_span(ipts).rank() < 3) continue;
    ++checked;
    PointConfig normal = normalize_lattice(lattice_point_config(LatticePolytope::from_points(ipts)));
    GapOptions options;
    options.k_max = 20;
    auto report = gap_vector(normal, options);
    if (report.capped) {
      // Infinitely many gaps force a failure of very-ampleness.
      CHECK_FALSE(is_very_ample(normal).very_ample);
      continue;
    }
    CHECK(is_very_ample(normal).very_ample);
    const int top = report.stop_height + 3;
    auto gen = generated_slices(normal, top);
    auto nor = normalized_slices(normal, top);
    for (int k = 0; k <= top; ++k) {
      for (const auto& p : gen.height_slices[k]) CHECK(sorted_contains(nor.height_slices[k], p));
      Integer gaps = Integer(nor.height_slices[k].size()) - Integer(gen.height_slices[k].size());
      if (k > report.gamma) CHECK(gaps == 0);
      if (k >= 1 && k <= report.gamma) CHECK(gaps == report.gap_vector[k - 1]);
    }
  }
}

TEST_CASE("gap_vector respects k_max") {
  GapOptions options;
  options.k_max = 2;
  auto report = gap_vector(pm_config(6), options);
  CHECK(report.capped);
  CHECK(report.stop_height == 2);
  CHECK(report.gamma == 2);
}

TEST_CASE("hilbert_basis examples") {
  auto unimodular = hilbert_basis({make_point({1, 0}), make_point({0, 1})});
  CHECK(to_pts(unimodular.generators) == std::vector<oracle::Pt>{{0, 1}, {1, 0}});

  auto thin = hilbert_basis({make_point({1, 0}), make_point({1, 2})});
  CHECK(to_pts(thin.generators) == std::vector<oracle::Pt>{{1, 0}, {1, 1}, {1, 2}});
  oracle::Cone c{oracle::brute_cone({{1, 0}, {1, 2}}).facets};
  auto brute = oracle::brute_hilbert_basis(c, 2, 4);
  CHECK(std::vector<oracle::Pt>(brute.begin(), brute.end()) == to_pts(thin.generators));

  // Cone at the vertex 0 of P_m. For a_4 = m >= 0 the vector (1,1,m) is
  // e_1 + e_2 + m e_3, so the cone is the unimodular simplicial one and the
  // four generators generate exactly the same monoid as the Hilbert basis.
  for (long long m : {0, 1, 5}) {
    std::vector<oracle::Pt> gens{{1, 0, 0}, {0, 1, 0}, {1, 1, m}, {0, 0, 1}};
    auto hb = to_pts(hilbert_basis(to_int_points(gens)).generators);
    CHECK(hb == std::vector<oracle::Pt>{{0, 0, 1}, {0, 1, 0}, {1, 0, 0}});
    std::map<oracle::Pt, bool> memo;
    for (const auto& g : gens) CHECK(oracle::in_monoid(hb, g, memo));
  }
  // With a_4 < 0 the cone is the union of two unimodular cones and all four
  // generators are needed.
  {
    std::vector<IntPoint> gens{make_point({1, 0, 0}), make_point({0, 1, 0}), make_point({1, 1, -2}),
                               make_point({0, 0, 1})};
    auto hb = hilbert_basis(gens);
    sort_unique(gens);
    CHECK(to_pts(hb.generators) == to_pts(gens));
  }

  CHECK_THROWS_AS(hilbert_basis({make_point({1, 0}), make_point({-1, 0}), make_point({0, 1})}), GeometryError);
  CHECK_THROWS_AS(hilbert_basis({make_point({1, 0, 0}), make_point({0, 1, 0})}), GeometryError);
}

TEST_CASE("hilbert basis matches the brute-force oracle on random cones") {
  std::mt19937 rng(23);
  int checked = 0;
  while (checked < 40) {
    const int d = 2 + checked % 2;
    auto gens = random_config(rng, d, d + rng() % 3, 0, 3);
    auto igens = to_int_points(gens);
    std::vector<IntPoint> with_zero = igens;
    with_zero.push_back(IntPoint::Zero(d));
    if (lattice_span(with_zero).rank() < d) continue;
    bool has_zero = false;
    for (const auto& g : gens)
      if (std::all_of(g.begin(), g.end(), [](long long x) { return x == 0; })) has_zero = true;
    if (has_zero) continue;
    ++checked;
    auto hb = hilbert_basis(igens);
    auto cone = oracle::brute_cone(gens);
    const long long bound = 10;
    auto brute = oracle::brute_hilbert_basis(cone, d, bound);
    auto mine = to_pts(hb.generators);
    for (const auto& h : mine) {
      CHECK(cone.contains(h));
      long long s = 0;
      for (long long x : h) s += x;
      if (s <= bound) CHECK(brute.count(h) == 1);
    }
    for (const auto& b : brute) CHECK(std::find(mine.begin(), mine.end(), b) != mine.end());
    std::map<oracle::Pt, bool> memo;
    for (const auto& p : oracle::cone_points_up_to(cone, d, bound)) CHECK(oracle::in_monoid(mine, p, memo));
  }
}

TEST_CASE("is_very_ample examples") {
  auto p5 = is_very_ample(pm_config(5));
  CHECK(p5.very_ample);
  CHECK(p5.certificate.size() == 8);
  for (const auto& cert : p5.certificate)
    for (const auto& e : cert.expressions) {
      REQUIRE(e.representable);
      IntPoint sum = IntPoint::Zero(3);
      for (const auto& s : e.summands) sum += s;
      CHECK(sum == e.element);
    }

  CHECK(is_very_ample(cube_config(3)).very_ample);
  CHECK(is_very_ample(cube_config(4)).very_ample);

  PointConfig square({make_point({0, 0}), make_point({1, 0}), make_point({0, 1}), make_point({1, 1})});
  auto r3 = rarify(square, 3);
  CHECK(is_very_ample(r3).very_ample);
  auto hull = convex_hull(r3.points());
  CHECK(to_pts(hull.vertices) == std::vector<oracle::Pt>{{0, 0}, {0, 3}, {3, 0}, {3, 3}});
}

TEST_CASE("is_very_ample rejects configs with unreachable cone points") {
  // 1 lies in the cone at the vertex 0 but not in Z_{>=0}{2, 3}.
  PointConfig sparse({make_point({0}), make_point({2}), make_point({3})});
  auto r = is_very_ample(sparse);
  CHECK_FALSE(r.very_ample);
  bool found = false;
  for (const auto& cert : r.certificate)
    for (const auto& e : cert.expressions)
      if (!e.representable) {
        found = true;
        CHECK(e.element == make_point({1}));
      }
  CHECK(found);
  GapOptions options;
  options.k_max = 12;
  auto report = gap_vector(sparse, options);
  CHECK(report.capped);
  CHECK(report.gamma == 12);

  PointConfig plane({make_point({0, 0}), make_point({2, 0}), make_point({3, 0}), make_point({0, 1})});
  CHECK_FALSE(is_very_ample(plane).very_ample);
}

TEST_CASE("is_integrally_closed examples") {
  auto p5 = is_integrally_closed(pm_config(5));
  CHECK_FALSE(p5.integrally_closed);
  REQUIRE(p5.first_failure_height);
  CHECK(*p5.first_failure_height == 2);

  auto cube = is_integrally_closed(cube_config(3));
  CHECK(cube.integrally_closed);
  CHECK_FALSE(cube.first_failure_height);

  auto p0 = is_integrally_closed(pm_config(0));
  CHECK(p0.integrally_closed);
  // Oracle: brute slices of P_0 up to height 2 match the dilates.
  auto pts = pm_points(0);
  for (int k = 1; k <= 2; ++k)
    CHECK(oracle::brute_monoid_slice(pts, k).size() == oracle::brute_lattice_points(pts, k).size());

  // Normal in its own lattice but not a direct summand of Z^2.
  PointConfig sparse({make_point({0, 0}), make_point({2, 0}), make_point({0, 2}), make_point({2, 2})});
  auto s = is_integrally_closed(sparse);
  CHECK_FALSE(s.integrally_closed);
  REQUIRE(s.first_failure_height);
  CHECK(*s.first_failure_height == 1);
  CHECK(is_normal(sparse));

  // A lower-dimensional config is measured in its own saturated lattice.
  PointConfig line({make_point({0, 0, 0}), make_point({1, 1, 1}), make_point({2, 2, 2})});
  CHECK(is_integrally_closed(line).integrally_closed);
}

TEST_CASE("is_smooth examples") {
  auto poly = [](std::vector<oracle::Pt> pts) { return LatticePolytope::from_points(to_int_points(pts)); };
  CHECK(is_smooth(poly({{0, 0, 0}, {0, 0, 1}, {1, 0, 0}, {1, 0, 2}, {0, 1, 0}, {0, 1, 3}, {1, 1, 0}, {1, 1, 4}})));
  for (long long m = 1; m <= 4; ++m) CHECK_FALSE(is_smooth(poly(pm_points(m))));
  for (int d = 1; d <= 4; ++d) CHECK(is_smooth(poly(cube_points(d))));
  CHECK_FALSE(is_smooth(poly({{0, 0}, {2, 1}, {1, 2}})));
  CHECK(is_smooth(poly({{0, 0}, {1, 0}, {0, 1}})));
}

TEST_CASE("ehrhart_polynomial examples") {
  for (long long m = 0; m <= 8; ++m) {
    auto e = ehrhart_polynomial(LatticePolytope::from_points(to_int_points(pm_points(m))));
    REQUIRE(e.degree() == 3);
    CHECK(e.coefficients[3] == Rational(m, 6) + 1);
    CHECK(e.coefficients[2] == 3);
    CHECK(e.coefficients[1] == 3 - Rational(m, 6));
    CHECK(e.coefficients[0] == 1);
  }
  auto seg = ehrhart_polynomial(LatticePolytope::from_points({make_point({0}), make_point({1})}));
  CHECK(seg.coefficients == std::vector<Rational>{1, 1});
  auto cube = ehrhart_polynomial(LatticePolytope::from_points(to_int_points(cube_points(3))));
  CHECK(cube.coefficients == std::vector<Rational>{1, 3, 3, 1});
}

TEST_CASE("ehrhart polynomial agrees with oracle counts") {
  std::mt19937 rng(31);
  int checked = 0;
  while (checked < 10) {
    auto pts = random_config(rng, 3, 6, -1, 2);
    auto ipts = to_int_points(pts);
    if (lattice_span(ipts).rank() < 3) continue;
    ++checked;
    auto poly = LatticePolytope::from_points(ipts);
    auto e = ehrhart_polynomial(poly);
    for (int j = 1; j <= 3; ++j) CHECK(e(j) == Rational(oracle::brute_lattice_points(pts, j).size()));
    CHECK(e.coefficients[3] * 6 == Rational(poly.normalized_volume()));
  }
}

TEST_CASE("rarify examples") {
  PointConfig square({make_point({0, 0}), make_point({1, 0}), make_point({0, 1}), make_point({1, 1})});
  CHECK(rarify(square, 1).points() == square.points());

  // Oracle: the direct union of (c-1)v + A over the four corners.
  std::set<oracle::Pt> direct;
  for (const auto& v : to_pts(square.points()))
    for (const auto& a : to_pts(square.points())) direct.insert({v[0] + a[0], v[1] + a[1]});
  auto r2 = rarify(square, 2);
  CHECK(r2.size() == direct.size());
  CHECK(r2.size() == 9);

  // Hull of A_c is c * conv(A).
  auto p5 = pm_config(5);
  for (int c = 1; c <= 3; ++c) {
    auto hull = convex_hull(rarify(p5, c).points());
    auto scaled = LatticePolytope::from_points(to_int_points(pm_points(5))).dilate(c);
    CHECK(to_pts(hull.vertices) == to_pts(scaled.vertices()));
  }

  // gamma of the rarified unit cube. Up to c = 3 the union is all of
  // {0..c}^3; at c = 4 the coordinate value 2 is missing.
  auto cube = cube_config(3);
  for (int c = 1; c <= 4; ++c) {
    auto report = gap_vector(rarify(cube, c));
    MESSAGE("gamma(rarify(cube, " << c << ")) = " << report.gamma);
    if (c <= 3) CHECK(report.gamma == 0);
    if (c == 4) CHECK(report.gamma > 0);
  }
  // A triangle whose rarifications do develop gaps.
  PointConfig tri({make_point({0, 0}), make_point({1, 0}), make_point({0, 1})});
  std::vector<int> gammas;
  for (int c = 1; c <= 4; ++c) gammas.push_back(gap_vector(rarify(tri, c)).gamma);
  MESSAGE("gamma(rarify(unit triangle, c)) for c=1..4: " << gammas[0] << " " << gammas[1] << " " << gammas[2]
                                                         << " " << gammas[3]);
  CHECK(gammas[0] == 0);
}

TEST_CASE("is_unimodular_simplex examples") {
  for (int d = 1; d <= 4; ++d) {
    std::vector<IntPoint> s{IntPoint::Zero(d)};
    for (int i = 0; i < d; ++i) {
      IntPoint e = IntPoint::Zero(d);
      e[i] = 1;
      s.push_back(e);
    }
    CHECK(is_unimodular_simplex(s));
  }
  CHECK_FALSE(is_unimodular_simplex({make_point({0, 0}), make_point({2, 1}), make_point({1, 2})}));
  CHECK(oracle::det({{2, 1}, {1, 2}}) == 3);
  CHECK(is_unimodular_simplex({make_point({1, 1, 1}), make_point({3, 4, 6})}));
  CHECK_FALSE(is_unimodular_simplex({make_point({0, 0}), make_point({2, 2})}));
  CHECK_THROWS_AS(is_unimodular_simplex({make_point({0, 0}), make_point({1, 1}), make_point({2, 2})}), GeometryError);
}

TEST_CASE("product with a segment keeps gaps") {
  std::vector<IntPoint> prod;
  for (const auto& p : pm_points(5))
    for (long long t : {0, 1}) prod.push_back(make_point({p[0], p[1], p[2], t}));
  auto report = gap_vector(PointConfig(prod));
  MESSAGE("gap vector of P_5 x [0,1] has gamma " << report.gamma);
  CHECK(report.gamma >= 3);
}
