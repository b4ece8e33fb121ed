#include <doctest.h>

#include "tautweight/errors.hpp"
#include "tautweight/levelset.hpp"

#include <cmath>
#include <numbers>

using namespace tw;

TEST_SUITE("levelset") {

TEST_CASE("ball constants") {
  CHECK(unit_ball_volume(2) == doctest::Approx(std::numbers::pi));
  CHECK(unit_ball_volume(3) == doctest::Approx(4 * std::numbers::pi / 3));
  CHECK(isoperimetric_constant(2) == doctest::Approx(2 * std::sqrt(std::numbers::pi)));
}

TEST_CASE("superlevel sets of a decreasing profile are balls") {
  const ExplicitSolution ex = explicit_minimizer(0.3);
  const RadialField u = explicit_u_field(ex, radial_grid(1024));
  const double s = 1.5 * ex.flat_value();
  const RadialLevelSet ls = level_set(u, s);
  REQUIRE(ls.intervals.size() == 1);
  CHECK(ls.intervals[0].first == 0.0);
  CHECK(ls.intervals[0].second == doctest::Approx(ex.k() / s).epsilon(1e-12));
  CHECK(ls.measure() == doctest::Approx(unit_ball_volume(3) * std::pow(ex.k() / s, 3)).epsilon(1e-10));
}

TEST_CASE("levels at or above the flat value sit inside (0, c)") {
  const ExplicitSolution ex = explicit_minimizer(0.25);
  const RadialField u = explicit_u_field(ex, radial_grid(1024));
  const RadialLevelSet below = level_set(u, 0.5 * ex.flat_value());
  REQUIRE(below.intervals.size() == 1);
  CHECK(below.intervals[0].second == doctest::Approx(1.0));
}

TEST_CASE("balls attain the isoperimetric bound") {
  const ExplicitSolution ex = explicit_minimizer(0.3);
  const Grid g = radial_grid(1024);
  const RadialField u = explicit_u_field(ex, g), v = explicit_v_field(ex, g);
  const IsoperimetricReport iso = isoperimetric_report(v, level_set(u, 2 * ex.flat_value()));
  CHECK(iso.ratio == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("perimeter identity holds on the explicit solution") {
  for (double a : {0.25, 0.3, 0.4}) {
    const ExplicitSolution ex = explicit_minimizer(a);
    const Grid g = radial_grid(2048);
    const RadialField u = explicit_u_field(ex, g), f = explicit_f_field(ex, g);
    for (double s : auto_levels(u, 20, {0.5 * ex.flat_value(), 2 * ex.flat_value()}))
      CHECK(perimeter_identity_residual(u, f, a, s, PerimeterMode::relative) <= 1e-6);
  }
}

TEST_CASE("perimeter identity fails for a non-minimizer") {
  const ExplicitSolution ex = explicit_minimizer(0.3);
  const Grid g = radial_grid(1024);
  const RadialField f = explicit_f_field(ex, g);
  const ExplicitSolution wrong = explicit_candidate(0.3, 1.2 * ex.c);
  const RadialField bad = explicit_u_field(wrong, g);
  // Balls inside (0, c) satisfy the identity for any c; the full domain does not.
  CHECK(perimeter_identity_residual(bad, f, 0.3, 2 * wrong.flat_value(), PerimeterMode::relative) <= 1e-9);
  CHECK(perimeter_identity_residual(bad, f, 0.3, 0.5 * wrong.flat_value(), PerimeterMode::relative) > 1e-3);
}

TEST_CASE("perimeter identity on a numerical solution") {
  const double a = 0.3;
  const Grid g = radial_grid(512);
  const RofSolution sol = denoise(Data::power_law(1.0), radial_weights(3, a), g);
  const RadialField u = solution_field(sol, 3);
  const RadialField f = data_field(Data::power_law(1.0), sol.r_grid, 3);
  for (double s : auto_levels(u, 20)) CHECK(perimeter_identity_residual(u, f, a, s, PerimeterMode::relative) <= 1e-6);
}

TEST_CASE("relative perimeter drops the outer sphere") {
  RadialLevelSet ls;
  ls.d = 3;
  ls.intervals = {{0.0, 1.0}};
  CHECK(perimeter(ls, PerimeterMode::relative) == 0.0);
  CHECK(perimeter(ls, PerimeterMode::whole_space) == doctest::Approx(4 * std::numbers::pi));
  ls.intervals = {{0.2, 0.5}};
  CHECK(perimeter(ls, PerimeterMode::whole_space) == doctest::Approx(4 * std::numbers::pi * (0.04 + 0.25)));
}

TEST_CASE("layer cake on the explicit solution") {
  const ExplicitSolution ex = explicit_minimizer(0.3);
  const LayerCake lc = layer_cake(explicit_u_field(ex, radial_grid(2048)));
  CHECK(lc.rel_error <= 1e-2);
  CHECK(lc.lhs > 0);
}

TEST_CASE("cell fields integrate exactly") {
  Eigen::VectorXd edges(3), vals(2);
  edges << 0.0, 0.5, 1.0;
  vals << 2.0, 1.0;
  const RadialField c = cell_field(edges, vals, 3);
  CHECK(c.integrate(0, 1) == doctest::Approx(2 * 0.125 / 3 + (1 - 0.125) / 3));
  const RadialLevelSet ls = level_set(c, 1.5);
  REQUIRE(ls.intervals.size() == 1);
  CHECK(ls.intervals[0].second == 0.5);
}

TEST_CASE("Markov bound") {
  const ExplicitSolution ex = explicit_minimizer(0.3);
  const RadialField u = explicit_u_field(ex, radial_grid(256));
  const MarkovBound m = markov_sup_bound(u, 2, 1, 1e-3);
  CHECK(m.bound > 0);
  CHECK_FALSE(m.respects);  // u ~ 1/r is unbounded on the sampled range
  Eigen::VectorXd edges(3), vals(2);
  edges << 0.0, 0.5, 1.0;
  vals << 1.0, 1.0;
  CHECK(markov_sup_bound(cell_field(edges, vals, 3), 2, 1, 0.5).respects);
  CHECK_THROWS_AS(markov_sup_bound(u, 0.5, 1, 1), ParameterError);
  CHECK_THROWS_AS(markov_sup_bound(u, 2, 2, 1), ParameterError);
}

TEST_CASE("auto levels are sorted and skip zero") {
  const ExplicitSolution ex = explicit_minimizer(0.3);
  const auto lv = auto_levels(explicit_u_field(ex, radial_grid(256)), 10, {1.0});
  CHECK(std::is_sorted(lv.begin(), lv.end()));
  CHECK(std::find(lv.begin(), lv.end(), 0.0) == lv.end());
  CHECK(std::find(lv.begin(), lv.end(), 1.0) != lv.end());
}

}
