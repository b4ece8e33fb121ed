#include "tautweight/weighted_rof.hpp"

#include "tautweight/errors.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace tw {

namespace {

Grid with_head(const Grid& grid) {
  Eigen::VectorXd k(grid.size() + 1);
  k[0] = 0;
  k.tail(grid.size()) = grid.knots();
  return Grid(std::move(k));
}

double sign(double x) { return (x > 0) - (x < 0); }

double default_jump_tol(const Eigen::VectorXd& u) {
  return 1e-6 * (u.maxCoeff() - u.minCoeff());
}

// Cell-wise fidelity 1/2 int (u - f)^2 phi, split into the discrete part and
// the within-cell variance of f.
struct Fidelity {
  double discrete = 0, variance = 0;
};

Fidelity fidelity(const Eigen::VectorXd& u, const KnotPrimitives& kp) {
  Fidelity out;
  for (Eigen::Index j = 0; j < u.size(); ++j) {
    const double dt = kp.t[j + 1] - kp.t[j];
    const double dF = kp.F[j + 1] - kp.F[j];
    const double dF2 = kp.F2[j + 1] - kp.F2[j];
    const double fbar = dF / dt;
    out.discrete += 0.5 * (u[j] - fbar) * (u[j] - fbar) * dt;
    out.variance += 0.5 * std::max(0.0, dF2 - dF * fbar);
  }
  return out;
}

double weighted_tv(const Eigen::VectorXd& u, const Weight& rho, const Grid& r_grid) {
  double tv = 0;
  for (Eigen::Index k = 1; k < u.size(); ++k) tv += rho(r_grid[k]) * std::abs(u[k] - u[k - 1]);
  return tv;
}

}  // namespace

Eigen::VectorXd RofSolution::u_at_knots() const {
  const Eigen::Index n = r_grid.size();
  Eigen::VectorXd out(n);
  out.head(n - 1) = u;
  out[n - 1] = u[u.size() - 1];
  return out;
}

KnotPrimitives knot_primitives(const Data& f, const Weight& phi, const Grid& r_grid, bool with_f2) {
  KnotPrimitives kp;
  kp.t = weight_primitive(phi, r_grid);
  kp.F = weighted_primitive(f, phi, r_grid, 1);
  kp.F2 = with_f2 ? weighted_primitive(f, phi, r_grid, 2) : Eigen::VectorXd::Zero(r_grid.size());
  return kp;
}

RofSolution denoise(const Data& f, const WeightPair& w, const Grid& grid, const RofOptions& opt) {
  if (grid[0] < 0 || grid.back() > 1.0 + 1e-12) throw ParameterError("denoise: grid must lie in [0, 1]");
  RofSolution sol;
  sol.alpha = w.alpha;
  sol.has_head = opt.head_cell && grid[0] > 0;
  sol.r_grid = sol.has_head ? with_head(grid) : grid;
  const KnotPrimitives kp = knot_primitives(f, w.phi, sol.r_grid);

  const TransformMap tm = build_transform(w.phi, sol.r_grid);
  sol.tube = build_tube(SampledFunction(sol.r_grid, kp.F), w, tm);
  sol.taut = solve_tube(sol.tube);

  const Eigen::Index n = sol.r_grid.size();
  sol.u = sol.taut.slopes;
  sol.U = sol.taut.values - kp.F;

  Eigen::VectorXd rho(n);
  for (Eigen::Index i = 0; i < n; ++i) rho[i] = w.rho(sol.r_grid[i]);
  const double degenerate = 1e-12 * rho.maxCoeff();
  sol.xi.resize(n);
  for (Eigen::Index i = 0; i < n; ++i)
    sol.xi[i] = rho[i] > degenerate ? sol.U[i] / (w.alpha * rho[i]) : std::nan("");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::isnan(sol.xi[i])) continue;
    const Eigen::Index j = i + 1 < n && !std::isnan(sol.xi[i + 1]) ? i + 1 : (i > 0 ? i - 1 : i);
    sol.xi[i] = std::isnan(sol.xi[j]) ? 0.0 : std::clamp(sol.xi[j], -1.0, 1.0);
  }

  const Fidelity fid = fidelity(sol.u, kp);
  sol.energy = fid.discrete + fid.variance + w.alpha * weighted_tv(sol.u, w.rho, sol.r_grid);
  double dual = 0;
  for (Eigen::Index j = 0; j + 1 < n; ++j) {
    const double dt = kp.t[j + 1] - kp.t[j];
    const double dU = sol.U[j + 1] - sol.U[j];
    const double fbar = (kp.F[j + 1] - kp.F[j]) / dt;
    dual -= 0.5 * dU * dU / dt + fbar * dU;
  }
  sol.dual_value = dual + fid.variance;
  sol.head_residual = sol.has_head ? std::abs(sol.U[1]) : 0.0;
  return sol;
}

RofSolution denoise(const SampledFunction& f, const WeightPair& w, const RofOptions& opt) {
  return denoise(Data::tabulated(f), w, f.grid, opt);
}

double rof_energy(const Eigen::VectorXd& u, const Data& f, const WeightPair& w, const Grid& r_grid) {
  if (u.size() != r_grid.cells()) throw StructuralError("rof_energy: one value per cell expected");
  const KnotPrimitives kp = knot_primitives(f, w.phi, r_grid);
  const Fidelity fid = fidelity(u, kp);
  return fid.discrete + fid.variance + w.alpha * weighted_tv(u, w.rho, r_grid);
}

CertificateReport optimality_residuals(const RofSolution& sol, const Data& f, const WeightPair& w,
                                       double jump_tol, double tol) {
  const Grid& g = sol.r_grid;
  const Eigen::Index n = g.size();
  if (sol.u.size() != n - 1 || sol.U.size() != n) throw StructuralError("optimality_residuals: sizes");
  if (jump_tol < 0) jump_tol = default_jump_tol(sol.u);
  const KnotPrimitives kp = knot_primitives(f, w.phi, g, false);

  // int_0^{r_i} (f - u) phi; a grid not starting at 0 extends u_0 down to 0.
  double primitive = 0, mass_u = sol.u[0] * kp.t[0];
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i > 0) mass_u += sol.u[i - 1] * (kp.t[i] - kp.t[i - 1]);
    const double P = kp.F[i] - mass_u;
    primitive = std::max(primitive, std::abs(sol.U[i] + P));
  }

  double feas = 0, align = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double bound = w.alpha * w.rho(g[i]);
    feas = std::max(feas, std::abs(sol.U[i]) - bound);
    if (i > 0 && i < n - 1) {
      const double du = sol.u[i] - sol.u[i - 1];
      if (std::abs(du) > jump_tol) align = std::max(align, std::abs(sol.U[i] - bound * sign(du)));
    }
  }

  CertificateReport rep;
  rep.add("primitive", primitive, tol, "max |U + int_0^x (f - u) phi|");
  rep.add("feasibility", std::max(feas, 0.0), tol, "max(|U| - alpha rho, 0)");
  rep.add("alignment", align, tol, "|U - alpha rho sign(du)| on jumps");
  rep.add("endpoint_left", std::abs(sol.U[0]), tol);
  rep.add("endpoint_right", std::abs(sol.U[n - 1]), tol);
  if (sol.has_head) rep.info("head_residual", std::abs(sol.U[1]), "|U| at the first data knot");
  return rep;
}

const char* to_string(Behavior b) {
  switch (b) {
    case Behavior::minus: return "minus";
    case Behavior::flat: return "flat";
    case Behavior::plus: return "plus";
  }
  return "";
}

std::vector<SwitchSegment> switching_decomposition(const RofSolution& sol, const Data& f, const WeightPair& w,
                                                   double jump_tol, double seg_tol) {
  const Grid& g = sol.r_grid;
  const Eigen::Index cells = g.cells();
  const auto& contact = sol.taut.contact;
  if (static_cast<Eigen::Index>(contact.size()) != g.size())
    throw StructuralError("switching_decomposition: solution without contact labels");
  if (jump_tol < 0) jump_tol = default_jump_tol(sol.u);
  const KnotPrimitives kp = knot_primitives(f, w.phi, g, false);

  std::vector<Behavior> beh(cells, Behavior::flat);
  for (Eigen::Index j = 0; j < cells; ++j) {
    if (contact[j] == Contact::lower && contact[j + 1] == Contact::lower) beh[j] = Behavior::minus;
    if (contact[j] == Contact::upper && contact[j + 1] == Contact::upper) beh[j] = Behavior::plus;
  }

  // Runs of equal behavior, split at jumps between flat cells.
  std::vector<std::pair<Eigen::Index, Eigen::Index>> runs;
  Eigen::Index start = 0;
  for (Eigen::Index j = 1; j <= cells; ++j) {
    const bool boundary = j == cells || beh[j] != beh[j - 1] ||
                          (beh[j] == Behavior::flat && std::abs(sol.u[j] - sol.u[j - 1]) > jump_tol);
    if (boundary) {
      runs.emplace_back(start, j - 1);
      start = j;
    }
  }
  // Short runs are absorbed by a neighbor.
  std::vector<std::pair<Eigen::Index, Eigen::Index>> merged;
  for (const auto& r : runs) {
    const bool short_run = r.second - r.first + 1 < 2;
    if (short_run && !merged.empty()) {
      merged.back().second = r.second;
    } else if (!merged.empty() && merged.back().second - merged.back().first + 1 < 2) {
      merged.back().second = r.second;
    } else {
      merged.push_back(r);
    }
  }

  // phi-average of rho'/phi over a cell: closed form for power weights,
  // finite differences of rho otherwise.
  auto drift = [&](Eigen::Index j) {
    const double dt = kp.t[j + 1] - kp.t[j];
    return (w.rho(g[j + 1]) - w.rho(g[j])) / dt;
  };

  std::vector<SwitchSegment> out;
  for (const auto& [a, b] : merged) {
    int votes[3] = {0, 0, 0};
    for (Eigen::Index j = a; j <= b; ++j) ++votes[static_cast<int>(beh[j])];
    Behavior bh = Behavior::flat;
    if (votes[0] > votes[1] && votes[0] >= votes[2]) bh = Behavior::minus;
    if (votes[2] > votes[1] && votes[2] > votes[0]) bh = Behavior::plus;

    SwitchSegment s;
    s.r_lo = g[a];
    s.r_hi = g[b + 1];
    s.behavior = bh;
    s.first_cell = a;
    s.last_cell = b;
    for (Eigen::Index j = a; j <= b; ++j) {
      double m = 0;
      if (bh == Behavior::flat) {
        if (j > a) m = std::abs(sol.u[j] - sol.u[j - 1]) > jump_tol ? std::abs(sol.u[j] - sol.u[j - 1]) : 0.0;
      } else {
        const double fbar = (kp.F[j + 1] - kp.F[j]) / (kp.t[j + 1] - kp.t[j]);
        const double sgn = bh == Behavior::minus ? -1.0 : 1.0;
        m = std::abs(sol.u[j] - (fbar + sgn * w.alpha * drift(j)));
      }
      s.mismatch = std::max(s.mismatch, m / std::max(1.0, std::abs(sol.u[j])));
    }
    s.pass = s.mismatch <= seg_tol;
    if (!out.empty() && out.back().behavior == s.behavior && bh != Behavior::flat) {
      out.back().r_hi = s.r_hi;
      out.back().last_cell = s.last_cell;
      out.back().mismatch = std::max(out.back().mismatch, s.mismatch);
      out.back().pass = out.back().pass && s.pass;
    } else {
      out.push_back(s);
    }
  }
  return out;
}

void write_rof_csv(std::ostream& os, const RofSolution& sol, const Data& f) {
  os << "r,f,u,U,xi\n";
  const Eigen::VectorXd uk = sol.u_at_knots();
  for (Eigen::Index i = 0; i < sol.r_grid.size(); ++i) {
    const double r = sol.r_grid[i];
    const double fv = r > 0 ? f(r) : f(sol.r_grid[1]);
    os << format_double(r) << ',' << format_double(fv) << ',' << format_double(uk[i]) << ','
       << format_double(sol.U[i]) << ',' << format_double(sol.xi[i]) << '\n';
  }
}

}  // namespace tw
