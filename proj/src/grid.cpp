#include "tautweight/grid.hpp"

#include "tautweight/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <vector>

namespace tw {

Grid::Grid(Eigen::VectorXd knots) : knots_(std::move(knots)) {
  if (knots_.size() < 2) throw ParameterError("grid needs at least two knots");
  for (Eigen::Index i = 0; i < knots_.size(); ++i) {
    if (!std::isfinite(knots_[i])) throw ParameterError("grid knots must be finite");
    if (i > 0 && !(knots_[i] > knots_[i - 1]))
      throw ParameterError("grid knots must be strictly increasing");
  }
}

Eigen::VectorXd Grid::widths() const {
  return knots_.tail(cells()) - knots_.head(cells());
}

Eigen::VectorXd Grid::midpoints() const {
  return 0.5 * (knots_.tail(cells()) + knots_.head(cells()));
}

Eigen::Index Grid::locate(double x) const {
  const double* b = knots_.data();
  const double* e = b + knots_.size();
  auto it = std::upper_bound(b, e, x);
  Eigen::Index i = static_cast<Eigen::Index>(it - b) - 1;
  return std::clamp<Eigen::Index>(i, 0, cells() - 1);
}

Grid make_grid(double a, double b, int n, Grading grading) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
    throw ParameterError("make_grid: need finite a < b");
  if (n < 2) throw ParameterError("make_grid: need n >= 2 cells");
  Eigen::VectorXd k(n + 1);
  const double q = grading.ratio;
  if (grading.kind == Grading::Kind::uniform || q == 1.0) {
    for (int i = 0; i <= n; ++i) k[i] = a + (b - a) * (static_cast<double>(i) / n);
  } else {
    if (!(q > 0) || !std::isfinite(q)) throw ParameterError("make_grid: ratio must be positive");
    // w_i = w0 q^i with sum (b - a)
    const double w0 = (b - a) * std::expm1(std::log(q)) / std::expm1(n * std::log(q));
    k[0] = a;
    double w = w0;
    for (int i = 1; i < n; ++i) {
      k[i] = k[i - 1] + w;
      w *= q;
    }
  }
  k[n] = b;
  return Grid(std::move(k));
}

Grid log_grid(double a, double b, int n) {
  if (!(a > 0) || !(a < b)) throw ParameterError("log_grid: need 0 < a < b");
  if (n < 2) throw ParameterError("log_grid: need n >= 2 cells");
  Eigen::VectorXd k(n + 1);
  const double l = std::log(b / a);
  for (int i = 0; i <= n; ++i) k[i] = a * std::exp(l * (static_cast<double>(i) / n));
  k[0] = a;
  k[n] = b;
  return Grid(std::move(k));
}

SampledFunction::SampledFunction(Grid g, Eigen::VectorXd v) : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid.size()) throw StructuralError("sampled function: length mismatch");
  if (!values.allFinite()) throw DataError("sampled function: values must be finite");
}

double SampledFunction::operator()(double x) const {
  const Eigen::Index i = grid.locate(x);
  const double x0 = grid[i], x1 = grid[i + 1];
  const double s = (x - x0) / (x1 - x0);
  return values[i] + s * (values[i + 1] - values[i]);
}

double integrate(const SampledFunction& g) {
  const Eigen::VectorXd h = g.grid.widths();
  const Eigen::Index n = h.size();
  return 0.5 * h.dot(g.values.head(n) + g.values.tail(n));
}

Eigen::VectorXd cumulative_integral(const SampledFunction& g) {
  const Eigen::VectorXd h = g.grid.widths();
  Eigen::VectorXd out(g.size());
  out[0] = 0;
  for (Eigen::Index i = 0; i < h.size(); ++i)
    out[i + 1] = out[i] + 0.5 * h[i] * (g.values[i] + g.values[i + 1]);
  return out;
}

double weighted_lp_norm(const SampledFunction& g, const SampledFunction& w, double p) {
  if (g.grid.knots() != w.grid.knots()) throw StructuralError("weighted_lp_norm: grids differ");
  if (!(p >= 1)) throw ParameterError("weighted_lp_norm: p must be >= 1");
  if ((w.values.array() < 0).any()) throw WeightError("weighted_lp_norm: negative weight");
  Eigen::VectorXd integrand = g.values.array().abs().pow(p) * w.values.array();
  return std::pow(integrate({g.grid, std::move(integrand)}), 1.0 / p);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int n) {
  if (n < 1) throw ParameterError("gauss_legendre: n >= 1");
  Eigen::VectorXd x(n), w(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = 0;
      for (int j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (z * p0 - p1) / (z * z - 1);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2 / ((1 - z * z) * dp * dp);
  }
  return {x, w};
}

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& os, const SampledFunction& g) {
  os << "t,value\n";
  for (Eigen::Index i = 0; i < g.size(); ++i)
    os << format_double(g.grid[i]) << ',' << format_double(g.values[i]) << '\n';
}

SampledFunction read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw DataError("csv: empty input");
  std::vector<double> t, v;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string a, b;
    if (!std::getline(ls, a, ',') || !std::getline(ls, b, ','))
      throw DataError("csv: expected two columns: " + line);
    try {
      t.push_back(std::stod(a));
      v.push_back(std::stod(b));
    } catch (const std::exception&) {
      throw DataError("csv: bad number in line: " + line);
    }
  }
  if (t.size() < 2) throw DataError("csv: need at least two rows");
  return {Grid(Eigen::Map<Eigen::VectorXd>(t.data(), t.size())),
          Eigen::Map<Eigen::VectorXd>(v.data(), v.size())};
}

}  // namespace tw
