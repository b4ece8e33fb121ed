#include <doctest.h>

#include "tautweight/errors.hpp"
#include "tautweight/grid.hpp"

#include <cmath>
#include <sstream>

using namespace tw;

TEST_SUITE("grid") {

TEST_CASE("uniform grid hits both ends exactly") {
  const Grid g = make_grid(0, 1, 10);
  CHECK(g.size() == 11);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 1.0);
  CHECK(g.widths().maxCoeff() == doctest::Approx(0.1));
}

TEST_CASE("geometric grading has the requested ratio") {
  const Grid g = make_grid(0, 1, 8, Grading::geometric(1.5));
  const Eigen::VectorXd w = g.widths();
  for (Eigen::Index i = 1; i + 1 < w.size(); ++i) CHECK(w[i] / w[i - 1] == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(g.back() == 1.0);
}

TEST_CASE("log grid is geometric in r") {
  const Grid g = log_grid(1e-4, 1, 4);
  CHECK(g[1] == doctest::Approx(1e-3));
  CHECK(g[3] == doctest::Approx(1e-1));
}

TEST_CASE("invalid grids are rejected") {
  CHECK_THROWS_AS(make_grid(1, 0, 4), ParameterError);
  CHECK_THROWS_AS(make_grid(0, 1, 1), ParameterError);
  CHECK_THROWS_AS(log_grid(0, 1, 4), ParameterError);
  Eigen::VectorXd k(3);
  k << 0, 0.5, 0.5;
  CHECK_THROWS_AS(Grid{k}, ParameterError);
}

TEST_CASE("locate clamps to valid cells") {
  const Grid g = make_grid(0, 1, 4);
  CHECK(g.locate(-1) == 0);
  CHECK(g.locate(0.3) == 1);
  CHECK(g.locate(0.5) == 2);
  CHECK(g.locate(1.0) == 3);
  CHECK(g.locate(7) == 3);
}

TEST_CASE("trapezoid integrates linear functions exactly") {
  const Grid g = make_grid(0, 2, 7, Grading::geometric(1.3));
  const SampledFunction f = sample(g, [](double x) { return 3 * x - 1; });
  CHECK(integrate(f) == doctest::Approx(4.0).epsilon(1e-14));
  const Eigen::VectorXd c = cumulative_integral(f);
  CHECK(c[0] == 0.0);
  CHECK(c[c.size() - 1] == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("weighted Lp norm of a constant") {
  const Grid g = make_grid(0, 1, 16);
  const SampledFunction one = sample(g, [](double) { return 2.0; });
  const SampledFunction w = sample(g, [](double) { return 1.0; });
  CHECK(weighted_lp_norm(one, w, 2) == doctest::Approx(2.0));
}

TEST_CASE("Gauss-Legendre integrates degree 2n-1 exactly") {
  const auto [x, w] = gauss_legendre(5);
  double s = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], 8);
  CHECK(s == doctest::Approx(2.0 / 9).epsilon(1e-14));
  CHECK(w.sum() == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("CSV round trip is exact") {
  const Grid g = make_grid(0, 1, 5, Grading::geometric(1.7));
  const SampledFunction f = sample(g, [](double x) { return std::sin(7 * x) / 3; });
  std::stringstream ss;
  write_csv(ss, f);
  const SampledFunction back = read_csv(ss);
  CHECK(back.grid.knots() == f.grid.knots());
  CHECK(back.values == f.values);
}

TEST_CASE("format_double round trips") {
  for (double x : {0.1, 1.0 / 3, 1e-300, -2.5e17, 0.8}) CHECK(std::stod(format_double(x)) == x);
}

}
