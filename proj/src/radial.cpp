#include "tautweight/radial.hpp"

#include "tautweight/errors.hpp"

#include <cmath>
#include <limits>

namespace tw {

double cubic_residual(double alpha, double c) { return c * c * c + 3 * c / (2 * alpha - 1) + 2; }

double solve_cubic_c(double alpha) {
  if (!(alpha > 0 && alpha < 0.5)) throw ParameterError("solve_cubic_c: alpha must lie in (0, 1/2)");
  // The cubic is decreasing on (0, 1) with p(0) = 2 > 0 > p(1).
  double lo = 0, hi = 1;
  for (int it = 0; it < 200 && hi - lo > 0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (cubic_residual(alpha, mid) > 0 ? lo : hi) = mid;
  }
  double c = 0.5 * (lo + hi);
  const double dp = 3 * c * c + 3 / (2 * alpha - 1);
  if (dp != 0) {
    const double cn = c - cubic_residual(alpha, c) / dp;
    if (cn > lo && cn < hi && std::abs(cubic_residual(alpha, cn)) < std::abs(cubic_residual(alpha, c))) c = cn;
  }
  return c;
}

double ExplicitSolution::u(double r) const { return r < c ? k() / r : k() / c; }

double ExplicitSolution::U(double r) const {
  if (r <= c) return -alpha * r * r;
  const double x = std::min(r, 1.0);
  return -(alpha * c * c + 0.5 * (x * x - c * c) - k() * (x * x * x - c * c * c) / (3 * c));
}

double ExplicitSolution::z(double r) const {
  if (r < c) return -1.0;
  if (r >= 1) return 0.0;
  return (1 / r / r - 1) / (2 * alpha) + k() / (3 * c * alpha) * (r - 1 / r / r);
}

double ExplicitSolution::dz(double r) const {
  if (r < c || r >= 1) return 0.0;
  return -1 / (alpha * r * r * r) + k() / (3 * c * alpha) * (1 + 2 / (r * r * r));
}

double ExplicitSolution::div_z(double r) const {
  if (r < c) return -2 / r;
  if (r >= 1) return 0.0;
  return k() / (alpha * c) - 1 / (alpha * r);
}

double ExplicitSolution::mass_u(double r0, double r1) const {
  double m = 0;
  const double a = std::min(r1, c);
  if (r0 < a) m += k() * (a * a - r0 * r0) / 2;
  const double b = std::max(r0, c);
  if (b < r1) m += flat_value() * (r1 * r1 * r1 - b * b * b) / 3;
  return m;
}

double ExplicitSolution::mass_v(double r0, double r1) const {
  return ((r1 * r1 - r0 * r0) / 2 - mass_u(r0, r1)) / alpha;
}

ExplicitSolution explicit_candidate(double alpha, double c) { return {alpha, c}; }

ExplicitSolution explicit_minimizer(double alpha) {
  if (!(alpha >= 0.25 && alpha < 0.5))
    throw ParameterError("explicit_minimizer: alpha outside [1/4, 1/2), where the closed form is not certified");
  ExplicitSolution s{alpha, solve_cubic_c(alpha)};
  if (1 / s.c > (1 + 2 * alpha) / (1 - 2 * alpha) * (1 + 1e-12))
    throw ParameterError("explicit_minimizer: r = 1 outside the verification window");
  return s;
}

Grid radial_grid(int n, double q) {
  if (n < 2 || !(q >= 1)) throw ParameterError("radial_grid: need n >= 2 and q >= 1");
  Eigen::VectorXd k(n);
  for (int i = 1; i <= n; ++i) k[i - 1] = std::pow(static_cast<double>(i) / n, q);
  k[n - 1] = 1.0;
  return Grid(k);
}

RofSolution sample_explicit(const ExplicitSolution& ex, const Grid& grid) {
  RofSolution sol;
  sol.alpha = ex.alpha;
  Eigen::VectorXd k(grid.size() + (grid[0] > 0 ? 1 : 0));
  if (grid[0] > 0) {
    k[0] = 0;
    k.tail(grid.size()) = grid.knots();
    sol.has_head = true;
  } else {
    k = grid.knots();
  }
  sol.r_grid = Grid(k);
  const Eigen::Index n = k.size();
  sol.u.resize(n - 1);
  for (Eigen::Index j = 0; j + 1 < n; ++j)
    sol.u[j] = ex.mass_u(k[j], k[j + 1]) / ((k[j + 1] * k[j + 1] * k[j + 1] - k[j] * k[j] * k[j]) / 3);
  sol.U.resize(n);
  sol.xi.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    sol.U[i] = ex.U(k[i]);
    sol.xi[i] = k[i] > 0 ? sol.U[i] / (ex.alpha * k[i] * k[i]) : -1.0;
  }
  sol.energy = rof_energy(sol.u, Data::power_law(1.0), radial_weights(3, ex.alpha), sol.r_grid);
  sol.dual_value = std::numeric_limits<double>::quiet_NaN();
  sol.head_residual = sol.has_head ? std::abs(sol.U[1]) : 0.0;
  return sol;
}

double l2_phi_error(const RofSolution& sol, const ExplicitSolution& ex) {
  const Grid& g = sol.r_grid;
  const double k = ex.k();
  const double q = 1 / std::sqrt(3.0);
  // (u_j r - k)^2 and (u_j - k/c)^2 r^2 are quadratics: two Gauss points are exact.
  auto piece = [&](double a, double b, double uj, bool inner) {
    if (!(b > a)) return 0.0;
    const double m = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0;
    for (double x : {m - h * q, m + h * q}) {
      const double e = inner ? uj * x - k : (uj - k / ex.c) * x;
      s += e * e;
    }
    return s * h;
  };
  double total = 0;
  for (Eigen::Index j = 0; j < g.cells(); ++j) {
    const double a = g[j], b = g[j + 1];
    total += piece(a, std::min(b, ex.c), sol.u[j], true);
    total += piece(std::max(a, ex.c), b, sol.u[j], false);
  }
  return std::sqrt(total);
}

CertificateReport dual_field_z(const ExplicitSolution& s, const Grid& grid) {
  double sup = 0, ident = 0, formula = 0;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double r = grid[i];
    if (!(r > 0)) continue;
    sup = std::max(sup, std::abs(s.z(r)));
    if (r >= 1) continue;
    const double div = s.dz(r) + 2 * s.z(r) / r;
    const double target = (s.u(r) - s.f(r)) / s.alpha;
    const double scale = std::max(1.0, std::abs(target));
    ident = std::max(ident, std::abs(div - target) / scale);
    formula = std::max(formula, std::abs(s.div_z(r) - target) / scale);
  }
  auto outer = [&](double r) { return (1 / r / r - 1) / (2 * s.alpha) + s.k() / (3 * s.c * s.alpha) * (r - 1 / r / r); };
  CertificateReport rep;
  rep.add("z_sup", sup, 1 + 1e-10, "max |z| on the grid");
  rep.add("continuity_c", std::abs(outer(s.c) + 1), 1e-10,
          std::abs(cubic_residual(s.alpha, s.c)) > 1e-12 ? "c does not solve the cubic" : "");
  rep.add("continuity_1", std::abs(outer(1.0)), 1e-10);
  rep.add("divergence_identity", ident, 1e-8, "max |z' + 2z/r - (u - f)/alpha|, relative above 1");
  rep.add("divergence_formula", formula, 1e-8, "max |div z (piecewise) - (u - f)/alpha|");
  return rep;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::bounded: return "bounded";
    case Verdict::unbounded: return "unbounded";
    case Verdict::indeterminate: return "indeterminate";
  }
  return "";
}

BoundednessVerdict classify_power(double beta, int d) {
  if (d < 2) throw ParameterError("classify_power: d >= 2");
  if (!(2 * beta < d)) throw DataError("classify_power: r^-beta is not in L2 with weight r^(d-1) (2 beta >= d)");
  if (d == 2) return {Verdict::bounded, "d = 2: the switching integral is infinite, minimizer always bounded", beta};
  if (beta < 1) return {Verdict::bounded, "beta < 1: growth slower than the critical 1/r", beta};
  if (beta > 1) return {Verdict::unbounded, "beta > 1, d >= 3: switching to u' = 0 is never advantageous near 0", beta};
  return {Verdict::indeterminate, "beta = 1: threshold case, decided only by the explicit family for alpha in [1/4, 1/2)", beta};
}

BoundednessVerdict classify_general(const SampledFunction& f, int d, double margin) {
  if (d < 2) throw ParameterError("classify_general: d >= 2");
  if ((f.values.array() < 0).any()) throw DataError("classify_general: negative samples");
  Eigen::Index first = 0;
  while (first < f.size() && !(f.grid[first] > 0)) ++first;
  if (first >= f.size()) throw DataError("classify_general: no positive radii");
  const double rmin = f.grid[first];
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (Eigen::Index i = first; i < f.size() && f.grid[i] <= 10 * rmin * (1 + 1e-12); ++i) {
    if (!(f.values[i] > 0)) continue;
    const double x = -std::log(f.grid[i]), y = std::log(f.values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 2) return {Verdict::bounded, "data vanishes near 0", 0.0};
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  if (d == 2) return {Verdict::bounded, "d = 2: minimizer always bounded", slope};
  if (slope > 1 + margin) return {Verdict::unbounded, "growth exponent above 1: r^beta f -> inf for some beta > 1", slope};
  if (slope < 1 - margin) return {Verdict::bounded, "growth exponent below 1: r^beta f -> 0 for some beta < 1", slope};
  return {Verdict::indeterminate, "growth exponent within the margin of the critical 1/r", slope};
}

SwitchingIntegrals switching_inequality(double beta, int d, double alpha, double nu) {
  if (!(beta > 1) || d < 3 || !(alpha > 0) || !(nu > 0))
    throw ParameterError("switching_inequality: need beta > 1, d >= 3, alpha > 0, nu > 0");
  SwitchingIntegrals out;
  const double A = alpha * (d - 1);
  const double inf = std::numeric_limits<double>::infinity();

  // |-beta r^(-beta-1) + A r^-2| changes sign at r* with beta r*^(1-beta) = A.
  const double e1 = d - beta - 1;
  const double rstar = std::pow(beta / A, 1 / (beta - 1));
  const double m = std::min(nu, rstar);
  auto G1 = [&](double x) { return beta * std::pow(x, e1) / e1; };
  auto G2 = [&](double x) { return A * std::pow(x, d - 2) / (d - 2); };
  if (!(e1 > 0)) {
    out.I = inf;
    out.I_divergent = true;
  } else {
    out.I = (G1(m) - G2(m)) + (G2(nu) - G2(m)) - (G1(nu) - G1(m)) + A * A * std::pow(nu, d - 2) / (d - 2);
  }

  const double e2 = d - 2 * beta;
  if (!(e2 > 0)) {
    out.J = inf;
    out.J_divergent = true;
  } else {
    const double c = std::pow(nu, -beta) - A / nu;
    out.J = c * c * std::pow(nu, d) / d - 2 * c * std::pow(nu, d - beta) / (d - beta) + std::pow(nu, e2) / e2;
  }
  if (out.I_divergent && out.J_divergent)
    out.ratio = std::numeric_limits<double>::quiet_NaN();
  else if (out.J_divergent)
    out.ratio = 0;
  else if (out.I_divergent)
    out.ratio = inf;
  else
    out.ratio = out.I / out.J;
  return out;
}

}  // namespace tw
