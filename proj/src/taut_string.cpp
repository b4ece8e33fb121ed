#include "tautweight/taut_string.hpp"

#include "tautweight/errors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <ostream>

namespace tw {

namespace {

struct Pt {
  Eigen::Index i;
  double t, y;
};

// slope(p, a) < slope(p, b), both to the right of p
bool slope_less(const Pt& p, const Pt& a, const Pt& b) {
  return (a.y - p.y) * (b.t - p.t) < (b.y - p.y) * (a.t - p.t);
}

// slope(a, b) >= slope(b, c) for a.t < b.t < c.t
bool turns_down(const Pt& a, const Pt& b, const Pt& c) {
  return (b.y - a.y) * (c.t - b.t) >= (c.y - b.y) * (b.t - a.t);
}

}  // namespace

const char* to_string(Contact c) {
  switch (c) {
    case Contact::lower: return "lower";
    case Contact::upper: return "upper";
    case Contact::free: return "free";
  }
  return "";
}

TautString solve_tube(const TubeProblem& p) {
  const Grid& g = p.t_grid;
  const Eigen::Index n = g.size();
  const double slack = 1e-12 * (1.0 + p.upper.cwiseAbs().maxCoeff());
  if (p.left_value < p.lower[0] - slack || p.left_value > p.upper[0] + slack ||
      p.right_value < p.lower[n - 1] - slack || p.right_value > p.upper[n - 1] + slack)
    throw InfeasibleError("solve_tube: pinned value outside the tube");

  auto lo = [&](Eigen::Index i) {
    if (i == 0) return Pt{i, g[i], p.left_value};
    if (i == n - 1) return Pt{i, g[i], p.right_value};
    return Pt{i, g[i], p.lower[i]};
  };
  auto hi = [&](Eigen::Index i) {
    if (i == 0) return Pt{i, g[i], p.left_value};
    if (i == n - 1) return Pt{i, g[i], p.right_value};
    return Pt{i, g[i], p.upper[i]};
  };

  std::vector<Pt> path;
  Pt apex = lo(0);
  path.push_back(apex);
  std::deque<Pt> uc{apex}, lc{apex};

  for (Eigen::Index i = 1; i < n; ++i) {
    const Pt h = hi(i);
    while (lc.size() >= 2 && slope_less(apex, h, lc[1])) {
      apex = lc[1];
      path.push_back(apex);
      lc.pop_front();
      uc.assign(1, apex);
    }
    while (uc.size() >= 2 && turns_down(uc[uc.size() - 2], uc.back(), h)) uc.pop_back();
    uc.push_back(h);

    const Pt l = lo(i);
    while (uc.size() >= 2 && slope_less(apex, uc[1], l)) {
      apex = uc[1];
      path.push_back(apex);
      uc.pop_front();
      lc.assign(1, apex);
    }
    while (lc.size() >= 2 && !turns_down(lc[lc.size() - 2], lc.back(), l)) lc.pop_back();
    lc.push_back(l);
  }
  if (path.back().i != n - 1) path.push_back(lo(n - 1));

  TautString s;
  s.t_grid = g;
  s.values.resize(n);
  for (size_t k = 0; k + 1 < path.size(); ++k) {
    const Pt& a = path[k];
    const Pt& b = path[k + 1];
    s.values[a.i] = a.y;
    const double slope = (b.y - a.y) / (b.t - a.t);
    for (Eigen::Index j = a.i + 1; j < b.i; ++j) s.values[j] = a.y + slope * (g[j] - a.t);
  }
  s.values[n - 1] = p.right_value;
  s.values[0] = p.left_value;
  s.slopes = (s.values.tail(n - 1) - s.values.head(n - 1)).cwiseQuotient(g.widths());
  s.contact = classify_contacts(s.values, p);
  return s;
}

std::vector<Contact> classify_contacts(const Eigen::VectorXd& v, const TubeProblem& p) {
  const Eigen::Index n = v.size();
  const Grid& g = p.t_grid;
  double scale = (p.upper - p.lower).maxCoeff();
  if (!(scale > 0)) scale = std::max(1.0, v.cwiseAbs().maxCoeff());
  const double ctol = 1e-9 * scale;
  std::vector<Contact> c(n, Contact::free);
  std::vector<bool> tie(n, false);
  for (Eigen::Index i = 0; i < n; ++i) {
    const bool on_lo = std::abs(v[i] - p.lower[i]) <= ctol;
    const bool on_hi = std::abs(v[i] - p.upper[i]) <= ctol;
    if (on_lo && on_hi) {
      tie[i] = true;
      if (i > 0 && i < n - 1) {
        const double d = (v[i + 1] - v[i]) / (g[i + 1] - g[i]) - (v[i] - v[i - 1]) / (g[i] - g[i - 1]);
        c[i] = d < 0 ? Contact::lower : (d > 0 ? Contact::upper : Contact::free);
      }
    } else if (on_lo) {
      c[i] = Contact::lower;
    } else if (on_hi) {
      c[i] = Contact::upper;
    }
  }
  if (n > 2) {
    if (tie[0]) c[0] = c[1];
    if (tie[n - 1]) c[n - 1] = c[n - 2];
  }
  return c;
}

KktReport kkt_certificate(const TautString& s, const TubeProblem& p, double kink_tol, double feas_tol) {
  KktReport r;
  const Eigen::Index n = s.values.size();
  if (n != p.t_grid.size() || s.t_grid.knots() != p.t_grid.knots())
    throw StructuralError("kkt_certificate: grid mismatch");
  const Eigen::VectorXd slopes =
      (s.values.tail(n - 1) - s.values.head(n - 1)).cwiseQuotient(p.t_grid.widths());
  const auto contact = classify_contacts(s.values, p);
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    const double d = slopes[i] - slopes[i - 1];
    double v = 0;
    switch (contact[i]) {
      case Contact::free: v = std::abs(d); break;
      case Contact::lower: v = std::max(d, 0.0); break;
      case Contact::upper: v = std::max(-d, 0.0); break;
    }
    r.max_kink_violation = std::max(r.max_kink_violation, v);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const double v = std::max({p.lower[i] - s.values[i], s.values[i] - p.upper[i], 0.0});
    r.max_feasibility_violation = std::max(r.max_feasibility_violation, v);
  }
  r.max_feasibility_violation = std::max({r.max_feasibility_violation,
                                          std::abs(s.values[0] - p.left_value),
                                          std::abs(s.values[n - 1] - p.right_value)});
  r.n_segments = 1;
  for (Eigen::Index i = 1; i < n; ++i)
    if (contact[i] != contact[i - 1]) ++r.n_segments;
  r.pass = r.max_kink_violation <= kink_tol && r.max_feasibility_violation <= feas_tol;
  return r;
}

SampledFunction derivative_signal(const TautString& s) {
  return {Grid(s.t_grid.midpoints()), s.slopes};
}

double string_energy(const Eigen::VectorXd& v, const Grid& g) {
  const Eigen::Index n = v.size();
  const Eigen::VectorXd d = v.tail(n - 1) - v.head(n - 1);
  return (d.array().square() / g.widths().array()).sum();
}

void write_taut_csv(std::ostream& os, const TautString& s, const TubeProblem& p) {
  os << "t,value,lower,upper,contact\n";
  for (Eigen::Index i = 0; i < s.values.size(); ++i)
    os << format_double(s.t_grid[i]) << ',' << format_double(s.values[i]) << ','
       << format_double(p.lower[i]) << ',' << format_double(p.upper[i]) << ','
       << to_string(s.contact[i]) << '\n';
}

}  // namespace tw
