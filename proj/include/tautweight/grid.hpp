#pragma once

#include <Eigen/Core>

#include <iosfwd>
#include <string>
#include <utility>

namespace tw {

class Grid {
 public:
  Grid() = default;
  explicit Grid(Eigen::VectorXd knots);

  Eigen::Index size() const { return knots_.size(); }
  Eigen::Index cells() const { return knots_.size() - 1; }
  const Eigen::VectorXd& knots() const { return knots_; }
  double operator[](Eigen::Index i) const { return knots_[i]; }
  double front() const { return knots_[0]; }
  double back() const { return knots_[knots_.size() - 1]; }

  Eigen::VectorXd widths() const;
  Eigen::VectorXd midpoints() const;

  // Index i with knots[i] <= x < knots[i+1], clamped to a valid cell.
  Eigen::Index locate(double x) const;

 private:
  Eigen::VectorXd knots_;
};

struct Grading {
  enum class Kind { uniform, geometric };
  Kind kind = Kind::uniform;
  double ratio = 1.0;  // width of cell i+1 over width of cell i

  static Grading uniform() { return {}; }
  static Grading geometric(double ratio) { return {Kind::geometric, ratio}; }
};

Grid make_grid(double a, double b, int n, Grading grading = Grading::uniform());

// Knots a*q^i with q = (b/a)^(1/n).
Grid log_grid(double a, double b, int n);

struct SampledFunction {
  Grid grid;
  Eigen::VectorXd values;

  SampledFunction() = default;
  SampledFunction(Grid g, Eigen::VectorXd v);

  Eigen::Index size() const { return values.size(); }
  double operator()(double x) const;  // piecewise-linear interpolation
};

template <class F>
SampledFunction sample(const Grid& grid, F&& f) {
  Eigen::VectorXd v(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) v[i] = f(grid[i]);
  return {grid, std::move(v)};
}

double integrate(const SampledFunction& g);
Eigen::VectorXd cumulative_integral(const SampledFunction& g);
double weighted_lp_norm(const SampledFunction& g, const SampledFunction& w, double p);

// Gauss-Legendre nodes and weights on [-1, 1].
std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int n);

// Shortest round-trip decimal.
std::string format_double(double x);

void write_csv(std::ostream& os, const SampledFunction& g);
SampledFunction read_csv(std::istream& is);

}  // namespace tw
