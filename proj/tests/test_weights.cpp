#include <doctest.h>

#include "tautweight/errors.hpp"
#include "tautweight/weights.hpp"

#include <cmath>

using namespace tw;

TEST_SUITE("weights") {

TEST_CASE("power weight and its derivative") {
  const Weight w = Weight::power(3);
  CHECK(w(0.5) == doctest::Approx(0.25));
  CHECK(w.derivative(0.5) == doctest::Approx(1.0));
  CHECK(w.exponent() == 3);
  CHECK(Weight::unit()(0.3) == 1.0);
  CHECK(Weight::unit().exponent() == 1);
}

TEST_CASE("power-law moments in closed form") {
  const Data f = Data::power_law(1.0);
  CHECK(*f.moment(0.5, 1, 3) == doctest::Approx(0.125));
  CHECK(*f.moment(1.0, 2, 3) == doctest::Approx(1.0));
  CHECK_THROWS_AS(f.moment(1.0, 2, 2), DataError);
  CHECK_THROWS_AS(Data::power_law(1.5).moment(1.0, 2, 3), DataError);
}

TEST_CASE("piecewise moments match quadrature") {
  const Data f = Data::hat();
  const auto [x, w] = gauss_legendre(12);
  double s = 0;
  for (double lo : {0.0, 0.5}) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double r = lo + 0.25 * (x[i] + 1);
      s += 0.25 * w[i] * f(r) * f(r) * r * r;
    }
  }
  CHECK(*f.moment(1.0, 2, 3) == doctest::Approx(s).epsilon(1e-13));
  CHECK(f.breakpoints() == std::vector<double>{0.5});
}

TEST_CASE("weighted primitive with a head knot") {
  Eigen::VectorXd k(3);
  k << 0.0, 0.5, 1.0;
  const Eigen::VectorXd F = weighted_primitive(Data::constant(2.0), Weight::power(3), Grid(k));
  CHECK(F[0] == 0.0);
  CHECK(F[1] == doctest::Approx(2 * 0.125 / 3));
  CHECK(F[2] == doctest::Approx(2.0 / 3));
}

TEST_CASE("tabulated primitive is second order") {
  const Grid g = make_grid(0, 1, 200);
  const SampledFunction f = sample(g, [](double r) { return std::cos(r); });
  const SampledFunction F = antiderivative(f, Weight::power(2));
  const double exact = std::cos(1.0) + std::sin(1.0) - 1;
  CHECK(std::abs(F.values[F.size() - 1] - exact) < 1e-5);
}

TEST_CASE("transform map is monotone and invertible") {
  const Grid g = make_grid(0, 1, 32);
  const TransformMap tm = build_transform(Weight::power(3), g);
  for (double s : {0.01, 0.2, 0.77, 1.0}) {
    CHECK(tm.forward(s) == doctest::Approx(s * s * s / 3).epsilon(1e-12));
    CHECK(tm.inverse(tm.forward(s)) == doctest::Approx(s).epsilon(1e-10));
  }
}

TEST_CASE("tube width follows alpha rho") {
  const Grid g = make_grid(0, 1, 8);
  const WeightPair w(Weight::unit(), Weight::unit(), 0.1);
  const SampledFunction F = antiderivative(Data::step(), w.phi, g);
  const TubeProblem t = build_tube(F, w, build_transform(w.phi, g));
  CHECK((t.upper - t.lower).maxCoeff() == doctest::Approx(0.2));
  CHECK(t.left_value == F.values[0]);
  CHECK(t.right_value == F.values[8]);
}

TEST_CASE("tube rejects crossed bounds") {
  const Grid g = make_grid(0, 1, 2);
  Eigen::VectorXd lo(3), hi(3);
  lo << 0, 1, 0;
  hi << 0, 0, 0;
  CHECK_THROWS_AS(TubeProblem(g, lo, hi, 0, 0), WeightError);
}

}
