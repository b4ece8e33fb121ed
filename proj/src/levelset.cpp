#include "tautweight/levelset.hpp"

#include "tautweight/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tw {

namespace {

double sphere_area(int d, double r) { return d * unit_ball_volume(d) * std::pow(r, d - 1); }

// Linear interpolation of the samples, constant below the first one.
double interp(const RadialField& g, double x) {
  const auto& r = g.r;
  const Eigen::Index n = r.size();
  if (x <= r[0]) return g.values[0];
  if (x >= r[n - 1]) return g.values[n - 1];
  const Eigen::Index i = std::upper_bound(r.data(), r.data() + n, x) - r.data() - 1;
  const double w = (x - r[i]) / (r[i + 1] - r[i]);
  return g.values[i] + w * (g.values[i + 1] - g.values[i]);
}

// int_lo^hi h(g(x)) x^(d-1) dx on the sample partition (Simpson per piece).
template <class H>
double sampled_quadrature(const RadialField& g, double lo, double hi, H&& h) {
  if (!(hi > lo)) return 0;
  std::vector<double> cuts{lo};
  for (Eigen::Index i = 0; i < g.r.size(); ++i)
    if (g.r[i] > lo && g.r[i] < hi) cuts.push_back(g.r[i]);
  cuts.push_back(hi);
  double total = 0;
  for (size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k], b = cuts[k + 1], m = 0.5 * (a + b);
    auto f = [&](double x) { return h(interp(g, x)) * std::pow(x, g.d - 1); };
    total += (b - a) / 6 * (f(a) + 4 * f(m) + f(b));
  }
  return total;
}

// Gauss-Legendre on geometrically graded panels between the kinks.
template <class H>
double exact_quadrature(const RadialField& g, double lo, double hi, H&& h) {
  if (!(hi > lo)) return 0;
  static const auto gl = gauss_legendre(10);
  std::vector<double> cuts{lo};
  for (double b : g.breaks)
    if (b > lo && b < hi) cuts.push_back(b);
  cuts.push_back(hi);
  double total = 0;
  for (size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k], b = cuts[k + 1];
    const int panels = std::max(1, static_cast<int>(std::ceil(std::log(b / a) / std::log(1.5))));
    const double q = std::pow(b / a, 1.0 / panels);
    double x0 = a;
    for (int p = 0; p < panels; ++p) {
      const double x1 = p + 1 == panels ? b : x0 * q;
      const double m = 0.5 * (x0 + x1), hw = 0.5 * (x1 - x0);
      for (Eigen::Index j = 0; j < gl.first.size(); ++j) {
        const double x = m + hw * gl.first[j];
        total += hw * gl.second[j] * h(g.value(x)) * std::pow(x, g.d - 1);
      }
      x0 = x1;
    }
  }
  return total;
}

template <class H>
double transformed_moment(const RadialField& g, double r0, double r1, H&& h) {
  if (g.edges.size()) {
    double total = 0;
    for (Eigen::Index j = 0; j < g.values.size(); ++j) {
      const double a = std::max(g.edges[j], r0), b = std::min(g.edges[j + 1], r1);
      if (b > a) total += h(g.values[j]) * (std::pow(b, g.d) - std::pow(a, g.d)) / g.d;
    }
    return total;
  }
  const double lo = std::max(r0, g.r[0]);
  if (!(r1 > lo)) return 0;
  return g.value ? exact_quadrature(g, lo, r1, h) : sampled_quadrature(g, lo, r1, h);
}

}  // namespace

double unit_ball_volume(int d) { return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1); }

double isoperimetric_constant(int d) { return d * std::pow(unit_ball_volume(d), 1.0 / d); }

double RadialField::integrate(double r0, double r1) const {
  if (!(r1 > r0)) return 0;
  if (integral) return integral(r0, r1);
  return sampled_quadrature(*this, r0, r1, [](double v) { return v; });
}

double RadialField::moment(double r0, double r1, double p) const {
  return transformed_moment(*this, r0, r1, [p](double v) { return std::pow(std::abs(v), p); });
}

RadialField sampled_field(const SampledFunction& g, int d) {
  std::vector<double> r, v;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (!(g.grid[i] > 0)) continue;
    r.push_back(g.grid[i]);
    v.push_back(g.values[i]);
  }
  if (r.size() < 2) throw DataError("sampled_field: need two positive radii");
  RadialField f;
  f.d = d;
  f.r = Eigen::Map<Eigen::VectorXd>(r.data(), r.size());
  f.values = Eigen::Map<Eigen::VectorXd>(v.data(), v.size());
  return f;
}

RadialField cell_field(const Eigen::VectorXd& edges, const Eigen::VectorXd& cell_values, int d) {
  if (edges.size() != cell_values.size() + 1 || cell_values.size() < 1)
    throw StructuralError("cell_field: need one more edge than cells");
  RadialField f;
  f.d = d;
  f.edges = edges;
  f.r = 0.5 * (edges.head(edges.size() - 1) + edges.tail(edges.size() - 1));
  f.values = cell_values;
  f.integral = [edges, cell_values, d](double r0, double r1) {
    double total = 0;
    for (Eigen::Index j = 0; j < cell_values.size(); ++j) {
      const double a = std::max(edges[j], r0), b = std::min(edges[j + 1], r1);
      if (b > a) total += cell_values[j] * (std::pow(b, d) - std::pow(a, d)) / d;
    }
    return total;
  };
  return f;
}

RadialField solution_field(const RofSolution& sol, int d) { return cell_field(sol.r_grid.knots(), sol.u, d); }

RadialField data_field(const Data& f, const Grid& grid, int d) {
  std::vector<double> r, v;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0)) continue;
    r.push_back(grid[i]);
    v.push_back(f(grid[i]));
  }
  if (r.size() < 2) throw DataError("data_field: need two positive radii");
  RadialField g;
  g.d = d;
  g.r = Eigen::Map<Eigen::VectorXd>(r.data(), r.size());
  g.values = Eigen::Map<Eigen::VectorXd>(v.data(), v.size());
  if (!f.tabulated()) {
    g.value = [f](double x) { return f(x); };
    g.integral = [f, d](double a, double b) { return *f.moment(b, 1, d) - *f.moment(a, 1, d); };
    g.breaks = f.breakpoints();
  }
  return g;
}

namespace {

RadialField explicit_field(const Grid& grid, std::function<double(double)> value,
                           std::function<double(double, double)> integral, double c) {
  if (!(grid[0] > 0)) throw ParameterError("explicit field: grid must start above 0");
  RadialField f;
  f.d = 3;
  f.r = grid.knots();
  f.values.resize(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) f.values[i] = value(grid[i]);
  f.value = std::move(value);
  f.integral = std::move(integral);
  f.breaks = {c};
  return f;
}

}  // namespace

RadialField explicit_u_field(const ExplicitSolution& ex, const Grid& grid) {
  return explicit_field(grid, [ex](double r) { return ex.u(r); },
                        [ex](double a, double b) { return ex.mass_u(a, b); }, ex.c);
}

RadialField explicit_f_field(const ExplicitSolution& ex, const Grid& grid) {
  return explicit_field(grid, [ex](double r) { return ex.f(r); },
                        [](double a, double b) { return 0.5 * (b * b - a * a); }, ex.c);
}

RadialField explicit_v_field(const ExplicitSolution& ex, const Grid& grid) {
  return explicit_field(grid, [ex](double r) { return ex.v(r); },
                        [ex](double a, double b) { return ex.mass_v(a, b); }, ex.c);
}

double RadialLevelSet::measure() const {
  double m = 0;
  for (const auto& [a, b] : intervals) m += std::pow(b, d) - std::pow(a, d);
  return unit_ball_volume(d) * m;
}

RadialLevelSet level_set(const RadialField& u, double s) {
  if (s == 0) throw ParameterError("level_set: s must be nonzero");
  RadialLevelSet ls;
  ls.s = s;
  ls.d = u.d;
  const double sg = s > 0 ? 1.0 : -1.0, thr = std::abs(s);
  const Eigen::Index n = u.r.size();
  auto g = [&](Eigen::Index i) { return sg * u.values[i] - thr; };
  auto crossing = [&](Eigen::Index i) {  // between i-1 and i
    if (u.edges.size()) return u.edges[i];
    const double g0 = g(i - 1), g1 = g(i);
    if (!u.value) return u.r[i - 1] + (u.r[i] - u.r[i - 1]) * (-g0) / (g1 - g0);
    double lo = u.r[i - 1], hi = u.r[i];
    const bool rising = g1 > g0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      ((sg * u.value(mid) - thr > 0) == rising ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
  };
  double start = u.edges.size() ? u.edges[0] : 0.0;
  bool inside = g(0) > 0;
  for (Eigen::Index i = 1; i < n; ++i) {
    const bool now = g(i) > 0;
    if (now && !inside) start = crossing(i);
    if (!now && inside) ls.intervals.emplace_back(start, crossing(i));
    inside = now;
  }
  if (inside) ls.intervals.emplace_back(start, u.edges.size() ? u.edges[n] : u.r[n - 1]);
  return ls;
}

double perimeter(const RadialLevelSet& ls, PerimeterMode mode) {
  double per = 0;
  for (const auto& [a, b] : ls.intervals) {
    if (a > 0) per += sphere_area(ls.d, a);
    if (!(mode == PerimeterMode::relative && b >= 1.0)) per += sphere_area(ls.d, b);
  }
  return per;
}

double perimeter_identity_residual(const RadialField& u, const RadialField& f, double alpha, double s,
                                   PerimeterMode mode) {
  const RadialLevelSet ls = level_set(u, s);
  const double per = perimeter(ls, mode);
  double mass = 0;
  for (const auto& [a, b] : ls.intervals) mass += f.integrate(a, b) - u.integrate(a, b);
  mass *= u.d * unit_ball_volume(u.d) / alpha;
  return std::abs(per - (s > 0 ? mass : -mass));
}

IsoperimetricReport isoperimetric_report(const RadialField& v, const RadialLevelSet& ls) {
  if (ls.empty()) throw ParameterError("isoperimetric_report: empty level set");
  IsoperimetricReport rep;
  const int d = ls.d;
  rep.theta_d = isoperimetric_constant(d);
  rep.per = perimeter(ls, PerimeterMode::whole_space);
  rep.measure = ls.measure();
  rep.ratio = rep.per / (rep.theta_d * std::pow(rep.measure, (d - 1.0) / d));
  double m = 0;
  for (const auto& [a, b] : ls.intervals) m += v.moment(a, b, d);
  rep.ld_norm_v_on_E = std::pow(d * unit_ball_volume(d) * m, 1.0 / d);
  rep.small_mass = rep.ld_norm_v_on_E < rep.theta_d;
  return rep;
}

MarkovBound markov_sup_bound(const RadialField& u, double p, double c_density, double r0) {
  if (!(p >= 1) || !(c_density > 0 && c_density <= 1) || !(r0 > 0))
    throw ParameterError("markov_sup_bound: need p >= 1, C in (0, 1], r0 > 0");
  const int d = u.d;
  const double norm = std::pow(d * unit_ball_volume(d) * u.moment(0, 1, p), 1 / p);
  MarkovBound b;
  b.bound = std::pow(c_density * unit_ball_volume(d) * std::pow(r0, d), -1 / p) * norm;
  b.sampled_sup = u.values.cwiseAbs().maxCoeff();
  b.respects = b.sampled_sup <= b.bound;
  return b;
}

LayerCake layer_cake(const RadialField& u) {
  const int d = u.d;
  const double q = d / (d - 1.0);
  LayerCake out;
  out.lhs = d * unit_ball_volume(d) *
            transformed_moment(u, 0, 1, [q](double v) { return v > 0 ? std::pow(v, q) : 0.0; });

  std::vector<double> levels{0.0};
  for (Eigen::Index i = 0; i < u.values.size(); ++i)
    if (u.values[i] > 0) levels.push_back(u.values[i]);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  static const auto gl = gauss_legendre(3);
  for (size_t k = 0; k + 1 < levels.size(); ++k) {
    // In w = s^q the weight q s^(1/(d-1)) ds becomes dw.
    const double a = std::pow(levels[k], q), b = std::pow(levels[k + 1], q);
    const double m = 0.5 * (a + b), h = 0.5 * (b - a);
    for (Eigen::Index j = 0; j < gl.first.size(); ++j)
      out.rhs += h * gl.second[j] * level_set(u, std::pow(m + h * gl.first[j], 1 / q)).measure();
  }
  out.rel_error = std::abs(out.lhs - out.rhs) / std::max(std::abs(out.lhs), 1e-300);
  return out;
}

std::vector<double> auto_levels(const RadialField& u, int count, const std::vector<double>& extra) {
  std::vector<double> v(u.values.data(), u.values.data() + u.values.size());
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  // Plateau values are skipped: there the level set jumps and the scan is ill-posed.
  auto plateau = [&](double x) {
    const double tol = 1e-9 * std::max(1.0, std::abs(x));
    auto lo = std::lower_bound(v.begin(), v.end(), x - tol);
    return std::upper_bound(lo, v.end(), x + tol) - lo > 1;
  };
  for (int i = 0; i < count; ++i) {
    const double p = (i + 0.5) / count;
    const double x = v[static_cast<size_t>(std::floor(p * (v.size() - 1)))];
    if (x != 0 && !plateau(x)) out.push_back(x);
  }
  for (double e : extra)
    if (e != 0) out.push_back(e);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace tw
