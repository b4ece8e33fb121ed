#include <doctest.h>

#include "tautweight/errors.hpp"
#include "tautweight/radial.hpp"

#include <cmath>

using namespace tw;

TEST_SUITE("radial") {

TEST_CASE("cubic breakpoint at alpha = 1/4") {
  const double c = solve_cubic_c(0.25);
  CHECK(std::abs(c - 0.34) <= 5e-3);
  CHECK(std::abs(cubic_residual(0.25, c)) <= 1e-12);
  CHECK(c > 0);
  CHECK(c < 1);
}

TEST_CASE("breakpoint decreases with alpha") {
  double prev = 1;
  for (int i = 0; i <= 20; ++i) {
    const double a = 0.25 + 0.2 * i / 20.0 - (i == 20 ? 1e-3 : 0.0);
    const double c = solve_cubic_c(a);
    CHECK(c < prev);
    CHECK(std::abs(cubic_residual(a, c)) <= 1e-12);
    prev = c;
  }
}

TEST_CASE("explicit minimizer is continuous at c") {
  const ExplicitSolution ex = explicit_minimizer(0.3);
  CHECK(ex.u(ex.c * (1 - 1e-12)) == doctest::Approx(ex.u(ex.c * (1 + 1e-12))).epsilon(1e-9));
  CHECK(ex.U(1.0) == doctest::Approx(0.0).scale(1));
  CHECK(std::abs(ex.U(1.0)) <= 1e-12);
}

TEST_CASE("explicit family is only certified on [1/4, 1/2)") {
  CHECK_THROWS_AS(explicit_minimizer(0.2), ParameterError);
  CHECK_THROWS_AS(explicit_minimizer(0.5), ParameterError);
}

TEST_CASE("dual field passes on the alpha sweep") {
  const Grid g = radial_grid(2048);
  for (int i = 0; i <= 20; ++i) {
    const double a = 0.25 + 0.2 * i / 20.0 - (i == 20 ? 1e-3 : 0.0);
    const CertificateReport rep = dual_field_z(explicit_minimizer(a), g);
    CHECK_MESSAGE(rep.pass(), "alpha = " << a);
  }
}

TEST_CASE("a wrong breakpoint breaks the dual field") {
  const ExplicitSolution ex = explicit_minimizer(0.3);
  const CertificateReport rep = dual_field_z(explicit_candidate(0.3, ex.c * 1.05), radial_grid(1024));
  CHECK_FALSE(rep.pass());
}

TEST_CASE("sampled explicit solution passes the optimality residuals") {
  for (double a : {0.25, 0.3, 0.4}) {
    const ExplicitSolution ex = explicit_minimizer(a);
    const RofSolution s = sample_explicit(ex, radial_grid(4096));
    CHECK(optimality_residuals(s, Data::power_law(1.0), radial_weights(3, a)).pass());
  }
}

TEST_CASE("numerical solution approaches the closed form at first order") {
  const ExplicitSolution ex = explicit_minimizer(0.25);
  const WeightPair w = radial_weights(3, 0.25);
  const double e1 = l2_phi_error(denoise(Data::power_law(1.0), w, radial_grid(256)), ex);
  const double e2 = l2_phi_error(denoise(Data::power_law(1.0), w, radial_grid(1024)), ex);
  CHECK(e2 < e1);
  CHECK(std::log(e1 / e2) / std::log(4.0) >= 0.99);
}

TEST_CASE("radial grid is power graded and ends at 1") {
  const Grid g = radial_grid(10, 2);
  CHECK(g.size() == 10);
  CHECK(g[0] == doctest::Approx(0.01));
  CHECK(g.back() == 1.0);
  CHECK_THROWS_AS(radial_grid(1), ParameterError);
}

TEST_CASE("power classifier") {
  CHECK(classify_power(1.2, 3).verdict == Verdict::unbounded);
  CHECK(classify_power(0.5, 3).verdict == Verdict::bounded);
  CHECK(classify_power(1.0, 3).verdict == Verdict::indeterminate);
  for (double b : {0.1, 0.5, 0.9, 0.99}) CHECK(classify_power(b, 2).verdict == Verdict::bounded);
  CHECK_THROWS_AS(classify_power(1.5, 3), DataError);
}

TEST_CASE("general classifier reads the growth exponent") {
  const Grid g = log_grid(1e-6, 1, 400);
  const SampledFunction f = sample(g, [](double r) { return std::pow(r, -1.2); });
  const BoundednessVerdict v = classify_general(f, 3);
  CHECK(v.verdict == Verdict::unbounded);
  CHECK(v.slope == doctest::Approx(1.2).epsilon(1e-6));
  const SampledFunction h = sample(g, [](double r) { return 2 + std::pow(r, -0.5); });
  CHECK(classify_general(h, 3).verdict == Verdict::bounded);
}

TEST_CASE("switching ratio decays as nu shrinks") {
  double prev = INFINITY;
  for (double nu : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
    const SwitchingIntegrals s = switching_inequality(1.45, 3, 0.1, nu);
    CHECK(s.ratio < prev);
    prev = s.ratio;
  }
  CHECK(prev < 1e-2);
}

TEST_CASE("switching integrals with divergent J") {
  const SwitchingIntegrals s = switching_inequality(1.5, 3, 0.1, 1e-3);
  CHECK(s.J_divergent);
  CHECK(s.ratio == 0.0);
}

}
