#include "tautweight/ictv.hpp"

#include "tautweight/errors.hpp"
#include "tautweight/taut_string.hpp"

#include <Eigen/QR>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <cmath>
#include <limits>
#include <ostream>

namespace tw {

namespace {

using Vec = Eigen::VectorXd;
using Sparse = Eigen::SparseMatrix<double>;

Vec diff(const Vec& x) { return x.tail(x.size() - 1) - x.head(x.size() - 1); }

Vec diff_t(const Vec& p) {
  Vec r = Vec::Zero(p.size() + 1);
  r.head(p.size()) -= p;
  r.tail(p.size()) += p;
  return r;
}

Vec diff2(const Vec& x) {
  const Eigen::Index n = x.size();
  return x.tail(n - 2) - 2 * x.segment(1, n - 2) + x.head(n - 2);
}

Vec diff2_t(const Vec& q) {
  Vec r = Vec::Zero(q.size() + 2);
  r.head(q.size()) += q;
  r.segment(1, q.size()) -= 2 * q;
  r.tail(q.size()) += q;
  return r;
}

Vec soft(const Vec& x, double t) {
  return x.unaryExpr([t](double v) { return v > t ? v - t : (v < -t ? v + t : 0.0); });
}

// -cumsum(h x), dropping the last entry.
Vec neg_cumsum(const Vec& x, double h) {
  Vec r(x.size() - 1);
  double s = 0;
  for (Eigen::Index i = 0; i + 1 < x.size(); ++i) r[i] = -(s += h * x[i]);
  return r;
}

Vec remove_affine(const Vec& v) {
  const Eigen::Index n = v.size();
  Eigen::MatrixXd A(n, 2);
  A.col(0).setOnes();
  A.col(1) = Vec::LinSpaced(n, 0, static_cast<double>(n - 1));
  const Vec c = A.colPivHouseholderQr().solve(v);
  return v - A * c;
}

struct DualPoint {
  Vec v, p, q;  // scaled into the boxes
};

DualPoint dual_point(const Vec& u, const IctvProblem& pr) {
  const double h = pr.h(), a = pr.alpha, ag = pr.alpha * pr.gamma;
  DualPoint d;
  d.v = remove_affine(pr.f.values - u);
  d.p = neg_cumsum(d.v, h);
  d.q = neg_cumsum(d.p, h);
  double th = 1;
  if (d.p.size() && d.p.cwiseAbs().maxCoeff() > 0) th = std::min(th, a / d.p.cwiseAbs().maxCoeff());
  if (d.q.size() && d.q.cwiseAbs().maxCoeff() > 0) th = std::min(th, ag / d.q.cwiseAbs().maxCoeff());
  d.v *= th;
  d.p *= th;
  d.q *= th;
  return d;
}

bool is_uniform(const Grid& g) {
  const Vec w = g.widths();
  return (w.array() - w.mean()).abs().maxCoeff() <= 1e-9 * w.mean();
}

}  // namespace

IctvProblem::IctvProblem(SampledFunction f_, double alpha_, double gamma_)
    : f(std::move(f_)), alpha(alpha_), gamma(gamma_) {
  if (!(alpha > 0) || !(gamma > 0)) throw ParameterError("ictv: alpha and gamma must be positive");
  if (f.size() < 3) throw StructuralError("ictv: need at least 3 samples");
  if (!is_uniform(f.grid)) throw StructuralError("ictv: grid must be uniform");
}

double IctvProblem::h() const { return f.grid[1] - f.grid[0]; }

double ictv_primal(const Vec& u, const Vec& g, const IctvProblem& p) {
  const double h = p.h();
  return 0.5 * h * (u - p.f.values).squaredNorm() + p.alpha * diff(u - g).lpNorm<1>() +
         p.alpha * p.gamma / h * diff2(g).lpNorm<1>();
}

double ictv_dual(const Vec& u, const IctvProblem& p) {
  const DualPoint d = dual_point(u, p);
  const double h = p.h();
  return h * d.v.dot(p.f.values) - 0.5 * h * d.v.squaredNorm();
}

IctvSolution denoise_ictv(const IctvProblem& p, const IctvOptions& opt) {
  if (!(opt.gap_tol > 0) || opt.max_iter < 1 || !(opt.rho_tv > 0) || !(opt.rho_tv2 > 0) || opt.check_every < 1)
    throw ParameterError("denoise_ictv: invalid options");
  const Eigen::Index n = p.f.size();
  const double h = p.h(), ra = opt.rho_tv, rb = opt.rho_tv2;
  const double ta = p.alpha / ra, tb = p.alpha * p.gamma / rb;
  const Vec& f = p.f.values;

  // Unknowns (u_0..u_{n-1}, g_1..g_{n-1}); g_0 = 0 removes the constant null vector.
  std::vector<Eigen::Triplet<double>> trip;
  auto put = [&](Eigen::Index i, Eigen::Index j, double v) {
    if (i >= 0 && j >= 0) trip.emplace_back(i, j, v);
  };
  auto gi = [n](Eigen::Index j) { return j == 0 ? Eigen::Index(-1) : n + j - 1; };
  const Eigen::Index m = 2 * n - 1;
  for (Eigen::Index i = 0; i < n; ++i) put(i, i, h);
  for (Eigen::Index k = 0; k + 1 < n; ++k) {  // ra (e_{k+1} - e_k)(...)^T on w = u - g
    const Eigen::Index us[2] = {k, k + 1};
    const double sg[2] = {-1, 1};
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        const double v = ra * sg[a] * sg[b];
        put(us[a], us[b], v);
        put(gi(us[a]), gi(us[b]), v);
        put(us[a], gi(us[b]), -v);
        put(gi(us[a]), us[b], -v);
      }
  }
  for (Eigen::Index k = 0; k + 2 < n; ++k) {
    const double c[3] = {1, -2, 1};
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) put(gi(k + a), gi(k + b), rb * c[a] * c[b] / (h * h));
  }
  Sparse M(m, m);
  M.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<Sparse> ldlt(M);
  if (ldlt.info() != Eigen::Success) throw InfeasibleError("denoise_ictv: factorization failed");

  Vec u = f, g = Vec::Zero(n);
  Vec A = diff(u - g), B = diff2(g) / h;
  Vec ya = Vec::Zero(n - 1), yb = Vec::Zero(n - 2);
  Vec rhs(m), x(m);
  IctvSolution sol;
  sol.gap_tol = opt.gap_tol;
  sol.gap = std::numeric_limits<double>::infinity();
  int it = 0;
  for (; it < opt.max_iter; ++it) {
    const Vec ra_part = ra * diff_t(A - ya);
    const Vec g_part = -ra_part + rb * diff2_t(B - yb) / h;
    rhs.head(n) = h * f + ra_part;
    rhs.tail(n - 1) = g_part.tail(n - 1);
    x = ldlt.solve(rhs);
    u = x.head(n);
    g[0] = 0;
    g.tail(n - 1) = x.tail(n - 1);
    const Vec dw = diff(u - g), d2 = diff2(g) / h;
    A = soft(dw + ya, ta);
    B = soft(d2 + yb, tb);
    ya += dw - A;
    yb += d2 - B;
    if ((it + 1) % opt.check_every == 0) {
      sol.primal_energy = ictv_primal(u, g, p);
      sol.dual_value = ictv_dual(u, p);
      sol.gap = (sol.primal_energy - sol.dual_value) / std::max(std::abs(sol.primal_energy), 1e-12);
      sol.energy_history.push_back(sol.primal_energy);
      if (sol.gap <= opt.gap_tol) {
        ++it;
        sol.certified = true;
        break;
      }
    }
  }
  if (!sol.certified) {
    sol.primal_energy = ictv_primal(u, g, p);
    sol.dual_value = ictv_dual(u, p);
    sol.gap = (sol.primal_energy - sol.dual_value) / std::max(std::abs(sol.primal_energy), 1e-12);
    sol.certified = sol.gap <= opt.gap_tol;
  }
  sol.iterations = it;
  g.array() -= g.mean();
  sol.u = SampledFunction(p.f.grid, u);
  sol.g = SampledFunction(p.f.grid, g);
  return sol;
}

CertificateReport ictv_optimality(const IctvSolution& sol, const IctvProblem& p, double tol) {
  if (tol < 0) tol = 10 * (sol.gap_tol > 0 ? sol.gap_tol : 1e-6);
  const double h = p.h(), a = p.alpha, ag = p.alpha * p.gamma;
  const Vec& u = sol.u.values;
  const Vec& g = sol.g.values;
  const Vec v = p.f.values - u;

  // Raw v: h v = D^T p and h p = D^T q need v orthogonal to affine functions.
  const Vec p_raw = neg_cumsum(v, h), q_raw = neg_cumsum(p_raw, h);
  const double tail_p = std::abs(p_raw.size() ? h * v[v.size() - 1] - p_raw[p_raw.size() - 1] : 0.0);
  const double tail_q = std::abs(q_raw.size() ? q_raw[q_raw.size() - 1] - h * p_raw[p_raw.size() - 1] : 0.0);

  const DualPoint d = dual_point(u, p);
  const Vec w = u - g, dw = diff(w), d2 = diff2(g);
  const double P = std::max(std::abs(ictv_primal(u, g, p)), 1e-12);
  const double t1 = a * dw.lpNorm<1>() - d.p.dot(dw);
  const double t2 = (ag * d2.lpNorm<1>() - d.q.dot(d2)) / h;
  const double t3 = 0.5 * h * (v - d.v).squaredNorm();

  CertificateReport rep;
  rep.add("tv_feasibility", std::max(p_raw.cwiseAbs().maxCoeff() - a, 0.0) / a, tol, "max(|xi| - alpha, 0)/alpha");
  rep.add("tv2_feasibility", std::max(q_raw.cwiseAbs().maxCoeff() - ag, 0.0) / ag, tol,
          "max(|eta| - alpha gamma, 0)/(alpha gamma)");
  rep.add("mean_zero", tail_p / a, tol, "|sum h v|/alpha");
  rep.add("first_moment_zero", tail_q / ag, tol, "|sum h xi|/(alpha gamma)");
  rep.add("tv_alignment", t1 / P, tol, "alpha TV(u - g) - <xi, D(u - g)>, relative");
  rep.add("tv2_alignment", t2 / P, tol, "alpha gamma TV2(g) - <eta, D2 g>/h, relative");
  rep.add("fidelity", t3 / P, tol, "1/2 h |v - v_feasible|^2, relative");
  rep.info("gap", sol.gap);
  return rep;
}

IctvBounds boundedness_report(const IctvSolution& sol) {
  return {(sol.u.values - sol.g.values).cwiseAbs().maxCoeff(), sol.g.values.cwiseAbs().maxCoeff(),
          sol.u.values.cwiseAbs().maxCoeff()};
}

namespace {

Grid midpoint_grid(int n) {
  if (n < 3) throw ParameterError("ictv data: need n >= 3");
  Vec x(n);
  for (int i = 0; i < n; ++i) x[i] = (i + 0.5) / n;
  return Grid(x);
}

template <class F>
SampledFunction cell_data(int n, F&& f) {
  const Grid g = midpoint_grid(n);
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = f(static_cast<double>(i) / n, static_cast<double>(i + 1) / n);
  return {g, v};
}

}  // namespace

SampledFunction ictv_step(int n) {
  return cell_data(n, [](double a, double b) { return 0.5 * (a + b) < 0.5 ? 1.0 : 0.0; });
}

SampledFunction ictv_spike(int n, double exponent) {
  if (!(exponent > 0 && exponent < 1)) throw ParameterError("ictv_spike: exponent in (0, 1)");
  const double e = 1 - exponent;
  auto F = [e](double s) { return (s < 0 ? -1.0 : 1.0) * std::pow(std::abs(s), e) / e; };
  return cell_data(n, [&](double a, double b) { return (F(b - 0.5) - F(a - 0.5)) / (b - a); });
}

namespace {

// Exact cell average of max(0, 1 - |4x - 2|).
double hat_average(double a, double b) {
  auto H = [](double x) {  // antiderivative
    if (x <= 0.25) return 0.0;
    if (x <= 0.5) return 2 * (x - 0.25) * (x - 0.25);
    if (x <= 0.75) return 0.25 - 2 * (0.75 - x) * (0.75 - x);
    return 0.25;
  };
  return (H(b) - H(a)) / (b - a);
}

}  // namespace

SampledFunction ictv_ramp_hat(int n) {
  return cell_data(n, [](double a, double b) { return 0.5 * (a + b) + hat_average(a, b); });
}

SampledFunction ictv_hat(int n) { return cell_data(n, hat_average); }

Vec tv_prox(const Vec& y, double h, double alpha) {
  const Eigen::Index n = y.size();
  Vec t(n + 1), F(n + 1);
  t[0] = 0;
  F[0] = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    t[i + 1] = (i + 1) * h;
    F[i + 1] = F[i] + h * y[i];
  }
  Vec lo = F.array() - alpha, hi = F.array() + alpha;
  lo[0] = hi[0] = F[0];
  lo[n] = hi[n] = F[n];
  const TautString s = solve_tube(TubeProblem(Grid(t), lo, hi, F[0], F[n]));
  return s.slopes;
}

AffineTvLimit affine_tv_limit(const IctvProblem& p) {
  const Vec& f = p.f.values;
  const Vec& x = p.f.grid.knots();
  const double h = p.h();
  auto solve = [&](double s) {
    const Vec w = tv_prox(f - s * x, h, p.alpha);
    const Vec u = s * x + w;
    const double e = 0.5 * h * (u - f).squaredNorm() + p.alpha * diff(w).lpNorm<1>();
    return std::pair{u, e};
  };
  // Energy is convex in s; bracket with the least-squares slope of f.
  const double xm = x.mean();
  const double ls = (x.array() - xm).matrix().dot(f) / (x.array() - xm).matrix().squaredNorm();
  double lo = std::min(0.0, ls) - 1 - std::abs(ls), hi = std::max(0.0, ls) + 1 + std::abs(ls);
  const double ratio = (std::sqrt(5.0) - 1) / 2;
  double c = hi - ratio * (hi - lo), d = lo + ratio * (hi - lo);
  double fc = solve(c).second, fd = solve(d).second;
  for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(hi)); ++it) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - ratio * (hi - lo);
      fc = solve(c).second;
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + ratio * (hi - lo);
      fd = solve(d).second;
    }
  }
  AffineTvLimit out;
  out.slope = 0.5 * (lo + hi);
  std::tie(out.u, out.energy) = solve(out.slope);
  return out;
}

void write_ictv_csv(std::ostream& os, const IctvSolution& sol, const IctvProblem& p) {
  os << "x,f,u,g,u_minus_g\n";
  for (Eigen::Index i = 0; i < p.f.size(); ++i)
    os << format_double(p.f.grid[i]) << ',' << format_double(p.f.values[i]) << ','
       << format_double(sol.u.values[i]) << ',' << format_double(sol.g.values[i]) << ','
       << format_double(sol.u.values[i] - sol.g.values[i]) << '\n';
}

}  // namespace tw
