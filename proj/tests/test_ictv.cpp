#include <doctest.h>

#include "tautweight/errors.hpp"
#include "tautweight/ictv.hpp"

#include <cmath>
#include <random>

using namespace tw;

TEST_SUITE("ictv") {

TEST_CASE("step data is certified") {
  const IctvProblem p(ictv_step(256), 0.1, 1.0);
  const IctvSolution s = denoise_ictv(p);
  CHECK(s.certified);
  CHECK(s.gap <= 1e-6);
  CHECK(ictv_optimality(s, p).pass());
  CHECK(s.g.values.mean() == doctest::Approx(0.0).scale(1));
  CHECK(s.primal_energy == doctest::Approx(ictv_primal(s.u.values, s.g.values, p)).epsilon(1e-12));
  const IctvBounds b = boundedness_report(s);
  CHECK(b.sup_u_minus_g == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("weak duality for arbitrary candidates") {
  const IctvProblem p(ictv_hat(64), 0.05, 2.0);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n01(0, 1);
  for (int k = 0; k < 10; ++k) {
    Eigen::VectorXd u = p.f.values, g = Eigen::VectorXd::Zero(64);
    for (Eigen::Index i = 0; i < 64; ++i) u[i] += 0.1 * n01(rng), g[i] = 0.1 * n01(rng);
    CHECK(ictv_dual(u, p) <= ictv_primal(u, g, p) + 1e-12);
  }
}

TEST_CASE("spike data stays bounded across resolutions") {
  double ref = 0;
  for (int n : {256, 1024}) {
    const IctvProblem p(ictv_spike(n), 0.1, 1.0);
    const IctvSolution s = denoise_ictv(p);
    CHECK(s.certified);
    const double sup = boundedness_report(s).sup_u;
    if (ref > 0) CHECK(std::abs(sup / ref - 1) <= 0.02);
    ref = sup;
  }
}

TEST_CASE("large gamma reduces to TV with an affine part") {
  for (auto data : {ictv_hat(256), ictv_ramp_hat(256)}) {
    const IctvProblem p(data, 0.05, 1e3);
    IctvOptions opt;
    opt.gap_tol = 1e-8;
    const IctvSolution s = denoise_ictv(p, opt);
    const AffineTvLimit lim = affine_tv_limit(p);
    CHECK((s.u.values - lim.u).cwiseAbs().maxCoeff() <= 1e-4);
  }
}

TEST_CASE("ramp is absorbed by the second-order part") {
  const IctvProblem hat(ictv_hat(256), 0.05, 1e3), ramp(ictv_ramp_hat(256), 0.05, 1e3);
  const AffineTvLimit a = affine_tv_limit(hat), b = affine_tv_limit(ramp);
  CHECK(b.energy == doctest::Approx(a.energy).epsilon(1e-6));
  CHECK(b.slope == doctest::Approx(a.slope + 1).epsilon(1e-6));
}

TEST_CASE("tv_prox on a step") {
  Eigen::VectorXd y(4);
  y << 1, 1, 0, 0;
  const Eigen::VectorXd w = tv_prox(y, 0.25, 0.05);
  CHECK(w[0] == doctest::Approx(0.9));
  CHECK(w[3] == doctest::Approx(0.1));
  CHECK(tv_prox(y, 0.25, 10).cwiseAbs().maxCoeff() == doctest::Approx(0.5));
}

TEST_CASE("a perturbed solution fails the certificate") {
  const IctvProblem p(ictv_step(128), 0.1, 1.0);
  IctvSolution s = denoise_ictv(p);
  s.u.values[10] += 0.05;
  CHECK_FALSE(ictv_optimality(s, p).pass());
}

TEST_CASE("problem validation") {
  CHECK_THROWS_AS(IctvProblem(ictv_step(16), -1, 1), ParameterError);
  CHECK_THROWS_AS(IctvProblem(ictv_step(16), 0.1, 0), ParameterError);
  Eigen::VectorXd k(4);
  k << 0, 0.1, 0.5, 1;
  CHECK_THROWS(IctvProblem(SampledFunction(Grid(k), Eigen::VectorXd::Zero(4)), 0.1, 1));
}

}
