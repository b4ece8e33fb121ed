#include "tautweight/counterexample.hpp"

#include "tautweight/errors.hpp"

#include <cmath>
#include <ostream>

namespace tw {

namespace {

constexpr double kEps = 0.125;  // mollifier radius

double bump(double y) { return std::abs(y) < 1 ? std::exp(-1 / (1 - y * y)) : 0.0; }

// int_{-1}^{x} bump, composite Gauss-Legendre.
double bump_integral(double x) {
  static const auto gl = gauss_legendre(20);
  x = std::min(std::max(x, -1.0), 1.0);
  const int panels = 16;
  const double w = (x + 1) / panels;
  double s = 0;
  for (int k = 0; k < panels; ++k) {
    const double m = -1 + (k + 0.5) * w;
    for (Eigen::Index j = 0; j < gl.first.size(); ++j) s += 0.5 * w * gl.second[j] * bump(m + 0.5 * w * gl.first[j]);
  }
  return s;
}

double bump_mass() {
  static const double m = bump_integral(1.0);
  return m;
}

// Mollifier rho_eps and its distribution function.
double rho(double x) { return bump(x / kEps) / (kEps * bump_mass()); }
double rho_cdf(double x) { return bump_integral(x / kEps) / bump_mass(); }

double hat(double t) { return t <= 0 || t >= 1 ? 0.0 : 1 - std::abs(2 * t - 1); }

}  // namespace

const char* to_string(ProfileKind k) { return k == ProfileKind::hat ? "hat" : "mollified-step"; }

ProfileKind parse_profile(const std::string& s) {
  if (s == "hat") return ProfileKind::hat;
  if (s == "mollified-step") return ProfileKind::mollified_step;
  throw ParameterError("unknown profile '" + s + "' (hat | mollified-step)");
}

double OscillatoryProfile::S(double t) const {
  if (kind == ProfileKind::hat) return hat(t);
  if (t <= 0 || t >= 1) return 0.0;
  return rho_cdf(t - 0.25) - rho_cdf(t - 0.75);
}

double OscillatoryProfile::dS(double t) const {
  if (kind == ProfileKind::hat) return t <= 0 || t >= 1 ? 0.0 : (t < 0.5 ? 2.0 : -2.0);
  return rho(t - 0.25) - rho(t - 0.75);
}

double OscillatoryProfile::s_l1_derivative() const { return 2.0; }

double OscillatoryProfile::s_l2_norm() const {
  if (kind == ProfileKind::hat) return 1 / std::sqrt(3.0);
  static const auto gl = gauss_legendre(20);
  double s = 0;
  const int panels = 64;
  for (int k = 0; k < panels; ++k) {
    const double m = (k + 0.5) / panels, h = 0.5 / panels;
    for (Eigen::Index j = 0; j < gl.first.size(); ++j) {
      const double v = S(m + h * gl.first[j]);
      s += h * gl.second[j] * v * v;
    }
  }
  return std::sqrt(s);
}

double OscillatoryProfile::s_second_variation() const {
  if (kind == ProfileKind::hat) return 8.0;
  // Two disjoint copies of |rho'|, each of mass 2 max rho.
  return 4 * rho(0);
}

Eigen::VectorXd OscillatoryProfile::block(int n) const {
  const double scale = std::ldexp(1.0, n), shift = std::ldexp(2.0, n) - 2;
  Eigen::VectorXd v(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) v[i] = S(scale * grid[i] - shift);
  return v;
}

OscillatoryProfile make_profile(ProfileKind kind, int n_max, int cells_per_finest) {
  if (n_max < 0 || n_max > 20) throw ParameterError("make_profile: n_max in [0, 20]");
  if (cells_per_finest < 8) throw StructuralError("make_profile: grid too coarse, need 8 cells in the finest support");
  if (cells_per_finest & (cells_per_finest - 1)) throw StructuralError("make_profile: cells_per_finest must be a power of 2");
  const long cells = 2L * cells_per_finest << n_max;
  OscillatoryProfile p;
  p.kind = kind;
  p.n_max = n_max;
  Eigen::VectorXd k(cells + 1);
  for (long i = 0; i <= cells; ++i) k[i] = 2.0 * i / cells;  // exact dyadic values
  p.grid = Grid(k);
  return p;
}

double pl_total_variation(const Eigen::VectorXd& v) {
  return (v.tail(v.size() - 1) - v.head(v.size() - 1)).lpNorm<1>();
}

double pl_l2_norm(const Eigen::VectorXd& v, double h) {
  const auto a = v.head(v.size() - 1).array(), b = v.tail(v.size() - 1).array();
  return std::sqrt(h / 3 * (a * a + a * b + b * b).sum());
}

OscillatoryU build_u(const OscillatoryProfile& p) {
  Eigen::VectorXd u = Eigen::VectorXd::Zero(p.grid.size());
  OscillatoryU out;
  for (int n = 0; n <= p.n_max; ++n) {
    u += std::ldexp(1.0, -2 * n) * p.block(n);
    out.tv_expected += std::ldexp(1.0, -2 * n) * p.s_l1_derivative();
  }
  out.u = SampledFunction(p.grid, u);
  out.tv = pl_total_variation(u);
  return out;
}

DirectionStep direction_step(const OscillatoryProfile& p, int n) {
  if (n < 0 || n > p.n_max) throw ParameterError("direction_step: n outside [0, n_max]");
  const double h = p.grid[1] - p.grid[0];
  const OscillatoryU u = build_u(p);
  const Eigen::VectorXd un = p.block(n);
  const double norm = pl_l2_norm(un, h);
  DirectionStep d;
  d.n = n;
  d.t_n = std::ldexp(1.0, -2 * n) * norm;
  d.v_n = SampledFunction(p.grid, -un / norm);
  d.v_norm = pl_l2_norm(d.v_n.values, h);
  const double tv_shift = pl_total_variation(u.u.values + d.t_n * d.v_n.values);
  d.quotient = (tv_shift - u.tv) / d.t_n;
  d.expected = -std::pow(2.0, 0.5 * n) * p.s_l1_derivative() / p.s_l2_norm();
  d.cancellation_residual = std::abs(tv_shift - u.tv + d.t_n * pl_total_variation(d.v_n.values)) / u.tv;
  return d;
}

double witness_g(double t) {
  if (t <= 0.125) return 8 * t;
  if (t <= 0.375) return 1.0;
  if (t <= 0.625) return 4 - 8 * t;
  if (t <= 0.875) return -1.0;
  return 8 * t - 8;
}

CertificateReport dual_certificate_g(const OscillatoryProfile& p, int n_cut, const std::function<double(double)>& g) {
  if (p.kind != ProfileKind::mollified_step)
    throw ParameterError("dual_certificate_g: only the mollified-step profile is supported");
  if (n_cut < 1 || n_cut > p.n_max + 1) throw ParameterError("dual_certificate_g: n_cut in [1, n_max + 1]");
  const std::function<double(double)> gg = g ? g : std::function<double(double)>(witness_g);
  static const auto gl = gauss_legendre(20);

  // Each block is an affine copy of (0, 1): S_n' = 2^n S'(t) and dx = 2^-n dt, so
  // the pairing on block n is 4^-n int_0^1 g S'.
  double sup = 0, sign_err = 0, pair = 0, mass = 0;
  const double tol = 1e-8 * rho(0);
  const int panels = 256;
  for (int k = 0; k < panels; ++k) {
    const double m = (k + 0.5) / panels, h = 0.5 / panels;
    for (Eigen::Index j = 0; j < gl.first.size(); ++j) {
      const double t = m + h * gl.first[j];
      const double gt = gg(t), ds = p.dS(t);
      sup = std::max(sup, std::abs(gt));
      if (std::abs(ds) > tol) sign_err = std::max(sign_err, std::abs(gt - (ds > 0 ? 1.0 : -1.0)));
      pair += h * gl.second[j] * gt * ds;
      mass += h * gl.second[j] * std::abs(ds);
    }
  }
  double scale = 0;
  for (int n = 0; n < n_cut; ++n) scale += std::ldexp(1.0, -2 * n);

  CertificateReport rep;
  rep.add("g_sup", std::max(sup - 1, 0.0), 1e-12, "max(|g| - 1, 0)");
  rep.add("g_sign", sign_err, 1e-12, "|g - sign S'| where |S'| > tol");
  rep.add("pairing", scale * std::abs(pair - mass), 1e-8, "|int g (u - w)' - TV(u - w)|");
  rep.info("tv_u_minus_w", scale * mass);
  return rep;
}

W21Series w21_partial_sums(const OscillatoryProfile& p) {
  W21Series s;
  const double v = p.s_second_variation();
  double total = 0, prev = 0;
  for (int n = 0; n <= p.n_max; ++n) {
    const double term = std::ldexp(1.0, -n) * v;
    if (n > 0) s.max_term_ratio = std::max(s.max_term_ratio, term / prev);
    total += term;
    s.partial.push_back(total);
    prev = term;
  }
  s.limit = 2 * v;
  return s;
}

void write_counterexample_csv(std::ostream& os, const OscillatoryU& u) {
  os << "x,u\n";
  for (Eigen::Index i = 0; i < u.u.size(); ++i)
    os << format_double(u.u.grid[i]) << ',' << format_double(u.u.values[i]) << '\n';
}

}  // namespace tw
