#include <doctest.h>

#include "tautweight/errors.hpp"
#include "tautweight/weighted_rof.hpp"

#include <cmath>
#include <random>
#include <sstream>

using namespace tw;

TEST_SUITE("weighted_rof") {

TEST_CASE("classical step: u = (0.8, 0.2)") {
  const WeightPair w = unit_weights(0.1);
  const RofSolution s = denoise(Data::step(), w, make_grid(0, 1, 64));
  for (Eigen::Index j = 0; j < s.u.size(); ++j) {
    const double expect = s.r_grid.midpoints()[j] < 0.5 ? 0.8 : 0.2;
    CHECK(std::abs(s.u[j] - expect) <= 1e-8);
  }
  CHECK(s.energy == doctest::Approx(0.08).epsilon(1e-12));
  CHECK(std::abs(s.gap()) <= 1e-12);
  CHECK(optimality_residuals(s, Data::step(), w).pass());
}

TEST_CASE("step solution survives a grid that straddles the jump") {
  const WeightPair w = unit_weights(0.1);
  const RofSolution s = denoise(Data::step(), w, make_grid(0, 1, 7));
  // Three full cells on each side share the jump reduction; the cell
  // containing 0.5 keeps its average.
  CHECK(s.u[0] == doctest::Approx(1 - 0.1 / (3.0 / 7)).epsilon(1e-10));
  CHECK(s.u[2] == doctest::Approx(s.u[0]).epsilon(1e-10));
  CHECK(s.u[3] == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(s.u[6] == doctest::Approx(0.1 / (3.0 / 7)).epsilon(1e-10));
  CHECK(optimality_residuals(s, Data::step(), w).pass());
}

TEST_CASE("large alpha flattens to the weighted mean") {
  const WeightPair w = radial_weights(3, 10.0);
  const Data f = Data::hat();
  const RofSolution s = denoise(f, w, make_grid(0, 1, 50));
  const double mean = *f.moment(1, 1, 3) * 3;
  CHECK(s.u.maxCoeff() == doctest::Approx(mean).epsilon(1e-10));
  CHECK(s.u.minCoeff() == doctest::Approx(mean).epsilon(1e-10));
}

TEST_CASE("energy is minimal under random perturbations") {
  const WeightPair w = radial_weights(3, 0.05);
  const Data f = Data::hat();
  const Grid g = make_grid(0, 1, 40);
  const RofSolution s = denoise(f, w, g);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n01(0, 1);
  const double e0 = rof_energy(s.u, f, w, s.r_grid);
  CHECK(e0 == doctest::Approx(s.energy).epsilon(1e-10));
  for (int k = 0; k < 50; ++k) {
    Eigen::VectorXd v = s.u;
    for (Eigen::Index j = 0; j < v.size(); ++j) v[j] += 1e-3 * n01(rng);
    CHECK(rof_energy(v, f, w, s.r_grid) >= e0 - 1e-14);
  }
}

TEST_CASE("duality gap closes on the radial problem") {
  const WeightPair w = radial_weights(3, 0.3);
  const RofSolution s = denoise(Data::power_law(1.0), w, make_grid(1e-3, 1, 200, Grading::geometric(1.03)));
  CHECK(s.has_head);
  CHECK(s.r_grid[0] == 0.0);
  CHECK(std::abs(s.gap()) <= 1e-10 * std::abs(s.energy));
  CHECK(optimality_residuals(s, Data::power_law(1.0), w).pass());
}

TEST_CASE("dual variable stays in the box") {
  const WeightPair w = unit_weights(0.02);
  const RofSolution s = denoise(Data::hat(), w, make_grid(0, 1, 100));
  CHECK(s.xi.cwiseAbs().maxCoeff() <= 1 + 1e-12);
}

TEST_CASE("tabulated data agrees with closed form") {
  const WeightPair w = unit_weights(0.05);
  const Grid g = make_grid(0, 1, 2000);
  const SampledFunction f = sample(g, [](double r) { return std::sin(6 * r); });
  const RofSolution s = denoise(f, w);
  const Eigen::VectorXd mid = s.r_grid.midpoints();
  // Compared against a much finer tabulated run.
  const Grid fine = make_grid(0, 1, 16000);
  const RofSolution t = denoise(sample(fine, [](double r) { return std::sin(6 * r); }), w);
  for (Eigen::Index j = 0; j < mid.size(); j += 97) {
    const Eigen::Index k = t.r_grid.locate(mid[j]);
    CHECK(std::abs(s.u[j] - t.u[k]) < 5e-3);
  }
}

TEST_CASE("switching decomposition on the step") {
  const WeightPair w = unit_weights(0.1);
  const RofSolution s = denoise(Data::step(), w, make_grid(0, 1, 64));
  const auto segs = switching_decomposition(s, Data::step(), w);
  REQUIRE(!segs.empty());
  for (const auto& seg : segs) CHECK(seg.pass);
}

TEST_CASE("perturbed solutions fail the certificate") {
  const WeightPair w = unit_weights(0.1);
  RofSolution s = denoise(Data::step(), w, make_grid(0, 1, 64));
  s.u[3] += 0.01;
  CHECK_FALSE(optimality_residuals(s, Data::step(), w).pass());
}

TEST_CASE("invalid inputs") {
  CHECK_THROWS(WeightPair(Weight::unit(), Weight::unit(), -1.0));
  CHECK_THROWS_AS(denoise(Data::power_law(1.5), radial_weights(3, 0.3), make_grid(0, 1, 10)), DataError);
}

TEST_CASE("profile CSV columns") {
  const RofSolution s = denoise(Data::step(), unit_weights(0.1), make_grid(0, 1, 4));
  std::ostringstream os;
  write_rof_csv(os, s, Data::step());
  CHECK(os.str().rfind("r,f,u,U,xi\n", 0) == 0);
}

}
