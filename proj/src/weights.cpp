#include "tautweight/weights.hpp"

#include "tautweight/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace tw {

namespace {

double interp_extrap(const SampledFunction& g, double x) {
  const Eigen::Index i = g.grid.locate(x);
  const double x0 = g.grid[i], x1 = g.grid[i + 1];
  return g.values[i] + (x - x0) / (x1 - x0) * (g.values[i + 1] - g.values[i]);
}

// int_0^{grid[0]} of a sampled integrand, extrapolating linearly to 0.
double extrapolated_head(const Grid& grid, double g0, double g1) {
  const double a = grid[0];
  if (a <= 0) return 0;
  const double slope = (g1 - g0) / (grid[1] - a);
  const double at_zero = g0 - a * slope;
  return 0.5 * a * (at_zero + g0);
}

std::vector<double> poly_pow(const std::vector<double>& c, int p) {
  std::vector<double> out{1.0};
  for (int k = 0; k < p; ++k) {
    std::vector<double> next(out.size() + c.size() - 1, 0.0);
    for (size_t i = 0; i < out.size(); ++i)
      for (size_t j = 0; j < c.size(); ++j) next[i + j] += out[i] * c[j];
    out = std::move(next);
  }
  return out;
}

}  // namespace

Weight Weight::unit() { return Weight{}; }

Weight Weight::power(int d) {
  if (d < 2) throw WeightError("power weight needs integer d >= 2");
  Weight w;
  w.kind_ = Kind::power;
  w.d_ = d;
  return w;
}

Weight Weight::tabulated(SampledFunction table) {
  for (Eigen::Index i = 0; i < table.size(); ++i) {
    if (table.grid[i] < 0) throw WeightError("tabulated weight: knots must be >= 0");
    if (table.grid[i] > 0 && !(table.values[i] > 0))
      throw WeightError("tabulated weight: non-positive sample at interior knot");
  }
  Weight w;
  w.kind_ = Kind::tabulated;
  w.table_ = std::move(table);
  return w;
}

double Weight::operator()(double r) const {
  switch (kind_) {
    case Kind::unit: return 1.0;
    case Kind::power: return std::pow(r, d_ - 1);
    case Kind::tabulated: return std::max(0.0, interp_extrap(table_, r));
  }
  return 0;
}

double Weight::derivative(double r) const {
  switch (kind_) {
    case Kind::unit: return 0.0;
    case Kind::power: return (d_ - 1) * std::pow(r, d_ - 2);
    case Kind::tabulated: {
      const Eigen::Index i = table_.grid.locate(r);
      return (table_.values[i + 1] - table_.values[i]) / (table_.grid[i + 1] - table_.grid[i]);
    }
  }
  return 0;
}

std::string Weight::describe() const {
  switch (kind_) {
    case Kind::unit: return "unit";
    case Kind::power: return "power:d=" + std::to_string(d_);
    case Kind::tabulated: return "table";
  }
  return "";
}

WeightPair::WeightPair(Weight phi_, Weight rho_, double alpha_)
    : phi(std::move(phi_)), rho(std::move(rho_)), alpha(alpha_) {
  if (!(alpha > 0) || !std::isfinite(alpha)) throw ParameterError("alpha must be positive");
}

WeightPair unit_weights(double alpha) { return {Weight::unit(), Weight::unit(), alpha}; }

WeightPair radial_weights(int d, double alpha) {
  return {Weight::power(d), Weight::power(d), alpha};
}

Data Data::power_law(double beta) {
  if (!std::isfinite(beta)) throw ParameterError("power data: beta must be finite");
  Data f;
  f.kind_ = Kind::power;
  f.beta_ = beta;
  f.name_ = "power:beta=" + format_double(beta);
  return f;
}

Data Data::step(double left, double right, double jump) {
  const double inf = std::numeric_limits<double>::infinity();
  Data f = piecewise({{0.0, jump, {left}}, {jump, inf, {right}}});
  f.name_ = "step";
  return f;
}

Data Data::constant(double value) {
  Data f = piecewise({{0.0, std::numeric_limits<double>::infinity(), {value}}});
  f.name_ = "constant:" + format_double(value);
  return f;
}

Data Data::hat() {
  Data f = piecewise({{0.0, 0.5, {0.0, 2.0}}, {0.5, 1.0, {2.0, -2.0}}});
  f.name_ = "hat";
  return f;
}

Data Data::piecewise(std::vector<Piece> pieces) {
  for (const auto& p : pieces)
    if (!(p.lo < p.hi) || p.c.empty()) throw ParameterError("piecewise data: bad piece");
  Data f;
  f.kind_ = Kind::pieces;
  f.pieces_ = std::move(pieces);
  f.name_ = "piecewise";
  return f;
}

Data Data::tabulated(SampledFunction table) {
  Data f;
  f.kind_ = Kind::table;
  f.table_ = std::move(table);
  f.name_ = "table";
  return f;
}

double Data::operator()(double r) const {
  switch (kind_) {
    case Kind::power: return std::pow(r, -beta_);
    case Kind::pieces:
      for (const auto& p : pieces_) {
        if (r >= p.lo && r < p.hi) {
          double v = 0;
          for (size_t k = p.c.size(); k-- > 0;) v = v * r + p.c[k];
          return v;
        }
      }
      return 0.0;
    case Kind::table: return interp_extrap(table_, r);
  }
  return 0;
}

std::vector<double> Data::breakpoints() const {
  std::vector<double> b;
  for (const auto& p : pieces_) {
    if (p.lo > 0 && (b.empty() || b.back() != p.lo)) b.push_back(p.lo);
    if (p.hi < 1 && (b.empty() || b.back() != p.hi)) b.push_back(p.hi);
  }
  return b;
}

std::optional<double> Data::moment(double s, int p, int m) const {
  switch (kind_) {
    case Kind::power: {
      const double e = m - p * beta_;
      if (!(e > 0)) throw DataError("data " + name_ + ": weighted moment diverges at 0");
      return std::pow(s, e) / e;
    }
    case Kind::pieces: {
      double total = 0;
      for (const auto& pc : pieces_) {
        if (pc.lo >= s) continue;
        const double lo = std::max(0.0, pc.lo), hi = std::min(pc.hi, s);
        const auto q = poly_pow(pc.c, p);
        for (size_t k = 0; k < q.size(); ++k) {
          if (q[k] == 0) continue;
          const double e = static_cast<double>(k) + m;
          total += q[k] * (std::pow(hi, e) - std::pow(lo, e)) / e;
        }
      }
      return total;
    }
    case Kind::table: return std::nullopt;
  }
  return std::nullopt;
}

std::optional<double> Data::beta() const {
  if (kind_ == Kind::power) return beta_;
  return std::nullopt;
}

std::string Data::describe() const { return name_; }

namespace {

// A knot at r = 0 is a prepended head knot: primitives vanish there and the
// rest is computed on the remaining knots.
template <class Fn>
Eigen::VectorXd with_head_knot(const Grid& grid, Fn&& fn) {
  const Eigen::Index n = grid.size();
  Eigen::VectorXd out(n);
  out[0] = 0;
  out.tail(n - 1) = fn(Grid(grid.knots().tail(n - 1)));
  return out;
}

}  // namespace

Eigen::VectorXd weighted_primitive(const Data& f, const Weight& phi, const Grid& grid, int p) {
  const Eigen::Index n = grid.size();
  if (grid[0] == 0 && n > 2)
    return with_head_knot(grid, [&](const Grid& g) { return weighted_primitive(f, phi, g, p); });
  Eigen::VectorXd out(n);
  if (phi.closed_form() && !f.tabulated()) {
    for (Eigen::Index i = 0; i < n; ++i) out[i] = *f.moment(grid[i], p, phi.exponent());
    return out;
  }
  Eigen::VectorXd g(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = grid[i];
    g[i] = std::pow(f(r), p) * phi(r);
  }
  if (!g.allFinite()) throw DataError("weighted primitive: non-finite integrand");
  out = cumulative_integral({grid, g});
  out.array() += extrapolated_head(grid, g[0], g[1]);
  return out;
}

Eigen::VectorXd weight_primitive(const Weight& phi, const Grid& grid) {
  const Eigen::Index n = grid.size();
  if (grid[0] == 0 && n > 2 && !phi.closed_form())
    return with_head_knot(grid, [&](const Grid& g) { return weight_primitive(phi, g); });
  Eigen::VectorXd out(n);
  if (phi.closed_form()) {
    const int m = phi.exponent();
    for (Eigen::Index i = 0; i < n; ++i) out[i] = std::pow(grid[i], m) / m;
    return out;
  }
  Eigen::VectorXd g(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    g[i] = phi(grid[i]);
    if (grid[i] > 0 && !(g[i] > 0)) throw WeightError("weight: non-positive sample");
  }
  out = cumulative_integral({grid, g});
  out.array() += std::max(0.0, extrapolated_head(grid, g[0], g[1]));
  return out;
}

SampledFunction antiderivative(const Data& f, const Weight& phi, const Grid& grid) {
  return {grid, weighted_primitive(f, phi, grid, 1)};
}

SampledFunction antiderivative(const SampledFunction& f, const Weight& phi) {
  return antiderivative(Data::tabulated(f), phi, f.grid);
}

double TransformMap::forward(double s) const {
  if (phi.closed_form()) {
    const int m = phi.exponent();
    return std::pow(s, m) / m;
  }
  if (s <= s_grid[0]) return s_grid[0] > 0 ? t[0] * (s / s_grid[0]) : t[0];
  const Eigen::Index i = s_grid.locate(s);
  const double w = (s - s_grid[i]) / (s_grid[i + 1] - s_grid[i]);
  return t[i] + w * (t[i + 1] - t[i]);
}

double TransformMap::inverse(double tv) const {
  if (phi.closed_form()) {
    const int m = phi.exponent();
    return std::pow(m * tv, 1.0 / m);
  }
  if (tv <= t[0]) return t[0] > 0 ? s_grid[0] * (tv / t[0]) : s_grid[0];
  const double* b = t.data();
  const double* e = b + t.size();
  Eigen::Index i = static_cast<Eigen::Index>(std::upper_bound(b, e, tv) - b) - 1;
  i = std::clamp<Eigen::Index>(i, 0, t.size() - 2);
  const double w = (tv - t[i]) / (t[i + 1] - t[i]);
  return s_grid[i] + w * (s_grid[i + 1] - s_grid[i]);
}

TransformMap build_transform(const Weight& phi, const Grid& grid) {
  if (grid[0] < 0 || grid.back() > 1.0 + 1e-12)
    throw ParameterError("build_transform: grid must lie in [0, 1]");
  Eigen::VectorXd t = weight_primitive(phi, grid);
  for (Eigen::Index i = 1; i < t.size(); ++i)
    if (!(t[i] > t[i - 1])) throw WeightError("build_transform: Phi is not strictly increasing");
  return {grid, std::move(t), phi};
}

TubeProblem::TubeProblem(Grid t, Eigen::VectorXd lo, Eigen::VectorXd hi, double left, double right)
    : t_grid(std::move(t)), lower(std::move(lo)), upper(std::move(hi)), left_value(left), right_value(right) {
  if (lower.size() != t_grid.size() || upper.size() != t_grid.size())
    throw StructuralError("tube: length mismatch");
  if ((lower.array() > upper.array()).any()) throw WeightError("tube: lower above upper");
}

TubeProblem build_tube(const SampledFunction& F, const WeightPair& w, const TransformMap& tm) {
  if (F.grid.knots() != tm.s_grid.knots()) throw StructuralError("build_tube: grids differ");
  const Eigen::Index n = F.size();
  Eigen::VectorXd width(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    width[i] = w.alpha * w.rho(F.grid[i]);
    if (!(width[i] >= 0)) throw WeightError("build_tube: negative rho");
  }
  Eigen::VectorXd lo = F.values - width, hi = F.values + width;
  const double left = F.values[0], right = F.values[n - 1];
  lo[0] = hi[0] = left;
  lo[n - 1] = hi[n - 1] = right;
  return {Grid(tm.t), std::move(lo), std::move(hi), left, right};
}

void write_tube_csv(std::ostream& os, const TubeProblem& p) {
  os << "t,lower,upper\n";
  for (Eigen::Index i = 0; i < p.t_grid.size(); ++i)
    os << format_double(p.t_grid[i]) << ',' << format_double(p.lower[i]) << ','
       << format_double(p.upper[i]) << '\n';
}

}  // namespace tw
