#include "tautweight/cli.hpp"

#include "tautweight/counterexample.hpp"
#include "tautweight/errors.hpp"
#include "tautweight/ictv.hpp"
#include "tautweight/levelset.hpp"
#include "tautweight/radial.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace tw::cli {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string fnv1a_hex(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::logic_error&) {
    throw ParameterError("cannot parse " + what + " from '" + s + "'");
  }
}

// "name:key=value:key=value" -> key/value pairs after the name.
std::map<std::string, std::string> spec_args(const std::vector<std::string>& parts, size_t from) {
  std::map<std::string, std::string> kv;
  for (size_t i = from; i < parts.size(); ++i) {
    const auto eq = parts[i].find('=');
    if (eq == std::string::npos) throw ParameterError("expected key=value in '" + parts[i] + "'");
    kv[parts[i].substr(0, eq)] = parts[i].substr(eq + 1);
  }
  return kv;
}

SampledFunction read_table(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot read '" + path + "'");
  return read_csv(is);
}

double num(double x) { return x; }

json to_json(const CertificateReport& rep) {
  json j = json::object();
  j["pass"] = rep.pass();
  json checks = json::array();
  for (const auto& c : rep.checks) {
    json e = {{"name", c.name}, {"value", num(c.value)}, {"pass", c.pass}};
    if (std::isfinite(c.tolerance)) e["tolerance"] = c.tolerance;
    if (!c.note.empty()) e["note"] = c.note;
    checks.push_back(e);
  }
  j["checks"] = checks;
  return j;
}

json to_json(const BoundednessVerdict& v) {
  return {{"verdict", to_string(v.verdict)}, {"reason", v.reason}, {"slope", v.slope}};
}

json to_json(const KktReport& k) {
  return {{"pass", k.pass},
          {"max_kink_violation", k.max_kink_violation},
          {"max_feasibility_violation", k.max_feasibility_violation},
          {"segments", k.n_segments}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

template <class F>
std::string to_text(F&& write) {
  std::ostringstream os;
  write(os);
  return os.str();
}

std::string fmt(double x) { return format_double(x); }

std::string csv_row(std::initializer_list<double> xs) {
  std::string s;
  for (double x : xs) s += (s.empty() ? "" : ",") + fmt(x);
  return s + "\n";
}

// Shared state of one command invocation.
struct Run {
  std::ostream& out;
  std::ostream& err;
  std::string out_flag;
};

Grid denoise_grid(const std::string& spec, int n, const Weight& phi) {
  if (spec == "auto") return phi.kind() == Weight::Kind::power ? radial_grid(n) : make_grid(0, 1, n);
  if (spec == "uniform") return make_grid(0, 1, n);
  if (spec == "radial") return radial_grid(n);
  const auto parts = split(spec, ':');
  if (parts.size() == 2 && parts[0] == "geometric")
    return make_grid(1e-6, 1, n, Grading::geometric(to_double(parts[1], "grid ratio")));
  if (parts.size() == 2 && parts[0] == "log") return log_grid(to_double(parts[1], "grid start"), 1, n);
  throw ParameterError("unknown grid '" + spec + "' (auto | uniform | radial | geometric:<ratio> | log:<a>)");
}

struct DenoiseArgs {
  std::string data, weight = "unit", grid = "auto", out;
  double alpha = 0, kink_tol = 1e-7, feas_tol = 1e-9, tol = 1e-6;
  int n = 256;
};

int cmd_denoise(const DenoiseArgs& a, Run& run) {
  const Data f = parse_data(a.data);
  const WeightPair w(parse_weight(a.weight), parse_weight(a.weight), a.alpha);
  const RofSolution sol = f.tabulated() ? denoise(f.table(), w) : denoise(f, w, denoise_grid(a.grid, a.n, w.phi));
  const CertificateReport rep = optimality_residuals(sol, f, w, -1, a.tol);
  const KktReport kkt = kkt_certificate(sol.taut, sol.tube, a.kink_tol, a.feas_tol);
  const auto segs = switching_decomposition(sol, f, w);

  OutputSet os(output_dir(a.out), "denoise",
               {{"data", a.data}, {"weight", a.weight}, {"grid", a.grid}, {"alpha", fmt(a.alpha)}, {"n", std::to_string(a.n)},
                {"kink_tol", fmt(a.kink_tol)}, {"feas_tol", fmt(a.feas_tol)}, {"tol", fmt(a.tol)}});
  const std::string profile = os.write("", "csv", to_text([&](std::ostream& o) { write_rof_csv(o, sol, f); }));
  const std::string tube = os.write("tube", "csv", to_text([&](std::ostream& o) { write_tube_csv(o, sol.tube); }));
  const std::string taut =
      os.write("taut", "csv", to_text([&](std::ostream& o) { write_taut_csv(o, sol.taut, sol.tube); }));
  json segments = json::array();
  for (const auto& s : segs)
    segments.push_back({{"r_lo", s.r_lo}, {"r_hi", s.r_hi}, {"behavior", to_string(s.behavior)}, {"mismatch", s.mismatch},
                        {"pass", s.pass}});
  const bool pass = rep.pass() && kkt.pass;
  json j = {{"command", "denoise"},
            {"kind", "sampled"},
            {"alpha", a.alpha},
            {"d", w.phi.exponent()},
            {"data", a.data},
            {"weight", a.weight},
            {"cells", sol.r_grid.cells()},
            {"energy", sol.energy},
            {"dual_value", sol.dual_value},
            {"gap", sol.gap()},
            {"head_residual", sol.head_residual},
            {"profile_csv", profile},
            {"tube_csv", tube},
            {"taut_csv", taut},
            {"certificates", {{"optimality", to_json(rep)}, {"kkt", to_json(kkt)}}},
            {"segments", segments},
            {"pass", pass}};
  os.write("", "json", dump(j));
  const int code = pass ? ok : certificate_failure;
  os.write_manifest(code, {{"tol", a.tol}, {"kink_tol", a.kink_tol}, {"feas_tol", a.feas_tol}});
  run.out << dump(j);
  return code;
}

struct RadialArgs {
  int d = 3, n = 4096;
  double alpha = 0, beta = 1.0, tol = 1e-6;
  std::string data, out;
};

int cmd_radial(const RadialArgs& a, Run& run) {
  if (!(a.alpha > 0 && a.alpha < 0.5)) throw ParameterError("radial: alpha must lie in (0, 1/2)");
  if (a.d < 2) throw ParameterError("radial: d >= 2");
  const bool tabulated = !a.data.empty();
  const Data f = tabulated ? Data::tabulated(read_table(a.data)) : Data::power_law(a.beta);
  const BoundednessVerdict verdict = tabulated ? classify_general(f.table(), a.d) : classify_power(a.beta, a.d);
  const WeightPair w = radial_weights(a.d, a.alpha);
  const Grid grid = tabulated ? f.table().grid : radial_grid(a.n);
  const RofSolution sol = tabulated ? denoise(f.table(), w) : denoise(f, w, grid);
  const CertificateReport numeric = optimality_residuals(sol, f, w, -1, a.tol);
  const bool explicit_case = !tabulated && a.d == 3 && a.beta == 1.0 && a.alpha >= 0.25;

  std::map<std::string, std::string> params{{"d", std::to_string(a.d)}, {"alpha", fmt(a.alpha)}, {"n", std::to_string(a.n)},
                                            {"tol", fmt(a.tol)}};
  if (tabulated)
    params["data"] = a.data;
  else
    params["beta"] = fmt(a.beta);
  OutputSet os(output_dir(a.out), "radial", params);
  json j = {{"command", "radial"}, {"alpha", a.alpha}, {"d", a.d}};
  if (tabulated)
    j["data"] = a.data;
  else
    j["beta"] = a.beta;
  j["verdict"] = to_json(verdict);
  j["numeric"] = {{"energy", sol.energy}, {"gap", sol.gap()}, {"head_residual", sol.head_residual},
                  {"optimality", to_json(numeric)}};
  bool pass = numeric.pass();

  std::string profile;
  if (explicit_case) {
    const ExplicitSolution ex = explicit_minimizer(a.alpha);
    const CertificateReport z = dual_field_z(ex, grid);
    const CertificateReport sampled = optimality_residuals(sample_explicit(ex, grid), f, w, -1, a.tol);
    pass = pass && z.pass() && sampled.pass();
    j["kind"] = "explicit";
    j["n"] = a.n;
    j["c"] = ex.c;
    j["flat_value"] = ex.flat_value();
    j["cubic_residual"] = cubic_residual(a.alpha, ex.c);
    j["numeric"]["l2_phi_error"] = l2_phi_error(sol, ex);
    j["certificates"] = {{"dual_field_z", to_json(z)}, {"explicit_optimality", to_json(sampled)}};
    profile = os.write("", "csv", to_text([&](std::ostream& o) {
                         o << "r,u,f\n";
                         for (Eigen::Index i = 0; i < grid.size(); ++i) o << csv_row({grid[i], ex.u(grid[i]), ex.f(grid[i])});
                       }));
  } else {
    j["kind"] = "sampled";
    if (!tabulated) j["data"] = "builtin:power:beta=" + fmt(a.beta);
    const Eigen::VectorXd uk = sol.u_at_knots();
    profile = os.write("", "csv", to_text([&](std::ostream& o) {
                         o << "r,u,f\n";
                         for (Eigen::Index i = 0; i < sol.r_grid.size(); ++i)
                           if (sol.r_grid[i] > 0) o << csv_row({sol.r_grid[i], uk[i], f(sol.r_grid[i])});
                       }));
  }
  j["profile_csv"] = os.write("solution", "csv", to_text([&](std::ostream& o) { write_rof_csv(o, sol, f); }));
  j["plot_csv"] = profile;
  j["pass"] = pass;
  os.write("", "json", dump(j));
  const int code = pass ? ok : certificate_failure;
  os.write_manifest(code, {{"tol", a.tol}});
  run.out << dump(j);
  return code;
}

struct ClassifyArgs {
  double beta = std::nan(""), alpha = 0.1, margin = 0.05;
  int d = 3;
  std::string data, nu = "1e-1,1e-2,1e-3,1e-4,1e-5,1e-6", out;
};

int cmd_classify(const ClassifyArgs& a, Run& run) {
  const bool tabulated = !a.data.empty();
  if (tabulated == !std::isnan(a.beta)) throw ParameterError("classify: give exactly one of --beta and --data");
  std::map<std::string, std::string> params{{"d", std::to_string(a.d)}, {"margin", fmt(a.margin)}};
  json j = {{"command", "classify"}, {"d", a.d}};
  if (tabulated) {
    params["data"] = a.data;
    j["data"] = a.data;
    j["verdict"] = to_json(classify_general(read_table(a.data), a.d, a.margin));
  } else {
    params["beta"] = fmt(a.beta);
    j["beta"] = a.beta;
    j["verdict"] = to_json(classify_power(a.beta, a.d));
    if (a.beta > 1 && a.d >= 3) {
      params["alpha"] = fmt(a.alpha);
      params["nu"] = a.nu;
      json rows = json::array();
      for (double nu : parse_list(a.nu)) {
        const SwitchingIntegrals s = switching_inequality(a.beta, a.d, a.alpha, nu);
        json r = {{"nu", nu}};
        r["I"] = s.I_divergent ? json("inf") : json(s.I);
        r["J"] = s.J_divergent ? json("inf") : json(s.J);
        r["ratio"] = std::isnan(s.ratio) ? json(nullptr) : (std::isinf(s.ratio) ? json("inf") : json(s.ratio));
        rows.push_back(r);
      }
      j["alpha"] = a.alpha;
      j["switching"] = rows;
    }
  }
  OutputSet os(output_dir(a.out), "classify", params);
  os.write("", "json", dump(j));
  os.write_manifest(ok, {{"margin", a.margin}});
  run.out << dump(j);
  return ok;
}

struct DiagnoseArgs {
  std::string solution, levels = "auto", out;
  int count = 20;
  double tol = 1e-6;
};

struct Profile {
  Eigen::VectorXd r, u;
};

Profile read_profile(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot read profile '" + path + "'");
  std::string line;
  std::getline(is, line);
  const auto head = split(line, ',');
  const auto col = [&](const std::string& name) {
    for (size_t i = 0; i < head.size(); ++i)
      if (head[i] == name) return i;
    throw DataError("profile '" + path + "' lacks column " + name);
  };
  const size_t ir = col("r"), iu = col("u");
  std::vector<double> r, u;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != head.size()) throw DataError("profile '" + path + "': ragged row");
    r.push_back(to_double(cells[ir], "r"));
    u.push_back(to_double(cells[iu], "u"));
  }
  return {Eigen::Map<Eigen::VectorXd>(r.data(), r.size()), Eigen::Map<Eigen::VectorXd>(u.data(), u.size())};
}

int cmd_diagnose(const DiagnoseArgs& a, Run& run) {
  std::ifstream is(a.solution);
  if (!is) throw DataError("cannot read solution '" + a.solution + "'");
  json sol;
  try {
    sol = json::parse(is);
  } catch (const json::exception& e) {
    throw DataError(std::string("solution: ") + e.what());
  }
  for (const char* key : {"kind", "alpha", "d"})
    if (!sol.contains(key)) throw DataError(std::string("solution lacks '") + key + "'");
  const double alpha = sol["alpha"].get<double>();
  const int d = sol["d"].get<int>();
  if (d < 2) throw ParameterError("diagnose: radial solutions need d >= 2");
  const std::string kind = sol["kind"].get<std::string>();

  RadialField u, f, v;
  std::vector<double> extra;
  if (kind == "explicit") {
    const ExplicitSolution ex = explicit_minimizer(alpha);
    const Grid grid = radial_grid(sol.value("n", 4096));
    u = explicit_u_field(ex, grid);
    f = explicit_f_field(ex, grid);
    v = explicit_v_field(ex, grid);
    extra = {0.5 * ex.flat_value(), 2 * ex.flat_value()};
  } else if (kind == "sampled") {
    if (!sol.contains("profile_csv") || !sol.contains("data")) throw DataError("sampled solution lacks profile_csv/data");
    fs::path csv = sol["profile_csv"].get<std::string>();
    if (csv.is_relative()) csv = fs::path(a.solution).parent_path() / csv;
    const Profile pr = read_profile(csv.string());
    const Eigen::VectorXd cells = pr.u.head(pr.u.size() - 1);
    u = cell_field(pr.r, cells, d);
    const Data data = parse_data(sol["data"].get<std::string>());
    const Grid grid(pr.r);
    f = data_field(data, grid, d);
    Eigen::VectorXd vc(cells.size());
    for (Eigen::Index j = 0; j < cells.size(); ++j) {
      const double lo = pr.r[j], hi = pr.r[j + 1], vol = (std::pow(hi, d) - std::pow(lo, d)) / d;
      vc[j] = (f.integrate(lo, hi) / vol - cells[j]) / alpha;
    }
    v = cell_field(pr.r, vc, d);
  } else {
    throw DataError("solution kind must be explicit or sampled");
  }

  const std::vector<double> levels = a.levels == "auto" ? auto_levels(u, a.count, extra) : parse_list(a.levels);
  json arr = json::array();
  bool pass = true;
  for (double s : levels) {
    const RadialLevelSet ls = level_set(u, s);
    json e = {{"s", s}};
    json iv = json::array();
    for (const auto& [lo, hi] : ls.intervals) iv.push_back({lo, hi});
    e["intervals"] = iv;
    e["measure"] = ls.measure();
    e["perimeter_whole_space"] = perimeter(ls, PerimeterMode::whole_space);
    e["perimeter_relative"] = perimeter(ls, PerimeterMode::relative);
    const double res = perimeter_identity_residual(u, f, alpha, s, PerimeterMode::relative);
    e["identity_residual"] = res;
    bool ok_level = res <= a.tol;
    if (!ls.empty()) {
      const IsoperimetricReport iso = isoperimetric_report(v, ls);
      e["isoperimetric"] = {{"theta_d", iso.theta_d}, {"ratio", iso.ratio}, {"ld_norm_v_on_E", iso.ld_norm_v_on_E},
                            {"small_mass", iso.small_mass}};
      ok_level = ok_level && iso.ratio >= 1 - 1e-9;
    }
    e["pass"] = ok_level;
    pass = pass && ok_level;
    arr.push_back(e);
  }
  OutputSet os(output_dir(a.out), "diagnose",
               {{"solution", a.solution}, {"levels", a.levels}, {"count", std::to_string(a.count)}, {"tol", fmt(a.tol)}});
  os.write("", "json", dump(arr));
  const int code = pass ? ok : certificate_failure;
  os.write_manifest(code, {{"tol", a.tol}, {"isoperimetric_tol", 1e-9}});
  run.out << dump(arr);
  return code;
}

struct IctvArgs {
  double alpha = 0.1, gamma = 1.0, gap_tol = 1e-6;
  int n = 1024, max_iter = 200000;
  std::string data = "builtin:step", out;
};

int cmd_ictv(const IctvArgs& a, Run& run) {
  const IctvProblem p(parse_ictv_data(a.data, a.n), a.alpha, a.gamma);
  IctvOptions opt;
  opt.gap_tol = a.gap_tol;
  opt.max_iter = a.max_iter;
  const IctvSolution sol = denoise_ictv(p, opt);
  const CertificateReport rep = ictv_optimality(sol, p);
  const IctvBounds b = boundedness_report(sol);
  OutputSet os(output_dir(a.out), "ictv",
               {{"alpha", fmt(a.alpha)}, {"gamma", fmt(a.gamma)}, {"data", a.data}, {"n", std::to_string(a.n)},
                {"gap_tol", fmt(a.gap_tol)}, {"max_iter", std::to_string(a.max_iter)}});
  const std::string csv = os.write("", "csv", to_text([&](std::ostream& o) { write_ictv_csv(o, sol, p); }));
  const bool pass = sol.certified && rep.pass();
  json j = {{"command", "ictv"},
            {"alpha", a.alpha},
            {"gamma", a.gamma},
            {"data", a.data},
            {"n", p.f.size()},
            {"iterations", sol.iterations},
            {"certified", sol.certified},
            {"primal_energy", sol.primal_energy},
            {"dual_value", sol.dual_value},
            {"gap", sol.gap},
            {"bounds", {{"sup_u_minus_g", b.sup_u_minus_g}, {"sup_g", b.sup_g}, {"sup_u", b.sup_u}}},
            {"certificates", to_json(rep)},
            {"profile_csv", csv},
            {"pass", pass}};
  os.write("", "json", dump(j));
  const int code = pass ? ok : certificate_failure;
  os.write_manifest(code, {{"gap_tol", a.gap_tol}, {"certificate_tol", 10 * a.gap_tol}});
  run.out << dump(j);
  return code;
}

struct CounterArgs {
  std::string profile = "hat", out;
  int n_max = 8, cells_per_finest = 8;
};

int cmd_counterexample(const CounterArgs& a, Run& run) {
  const OscillatoryProfile p = make_profile(parse_profile(a.profile), a.n_max, a.cells_per_finest);
  const OscillatoryU u = build_u(p);
  OutputSet os(output_dir(a.out), "counterexample",
               {{"profile", a.profile}, {"n_max", std::to_string(a.n_max)},
                {"cells_per_finest", std::to_string(a.cells_per_finest)}});
  const std::string csv = os.write("", "csv", to_text([&](std::ostream& o) { write_counterexample_csv(o, u); }));
  json steps = json::array();
  bool pass = std::abs(u.tv - u.tv_expected) <= 1e-12 * u.tv_expected;
  double prev = 0;
  for (int n = 0; n <= a.n_max; ++n) {
    const DirectionStep s = direction_step(p, n);
    const double rel = std::abs(s.quotient / s.expected - 1);
    steps.push_back({{"n", n}, {"t_n", s.t_n}, {"quotient", s.quotient}, {"expected", s.expected},
                     {"relative_error", rel}, {"v_norm", s.v_norm}, {"cancellation_residual", s.cancellation_residual}});
    pass = pass && s.cancellation_residual <= 1e-12 && std::abs(s.v_norm - 1) <= 1e-10;
    if (p.kind == ProfileKind::hat) pass = pass && rel <= 1e-6;
    if (n > 0) pass = pass && s.quotient < prev;
    prev = s.quotient;
  }
  const W21Series w21 = w21_partial_sums(p);
  json j = {{"command", "counterexample"},
            {"profile", a.profile},
            {"n_max", a.n_max},
            {"reduction", "Omega = (0,2) x (0,1); u constant in x2, all quantities computed on (0,2)"},
            {"tv", u.tv},
            {"tv_expected", u.tv_expected},
            {"steps", steps},
            {"w21", {{"partial_sums", w21.partial}, {"limit", w21.limit}, {"max_term_ratio", w21.max_term_ratio}}},
            {"profile_csv", csv}};
  if (p.kind == ProfileKind::mollified_step) {
    const CertificateReport rep = dual_certificate_g(p);
    j["dual_certificate_g"] = to_json(rep);
    pass = pass && rep.pass();
  }
  j["pass"] = pass;
  os.write("", "json", dump(j));
  const int code = pass ? ok : certificate_failure;
  os.write_manifest(code, {{"quotient_rel_tol", 1e-6}, {"cancellation_tol", 1e-12}});
  run.out << dump(j);
  return code;
}

struct SweepArgs {
  std::string what = "alpha", alphas, ns, out;
  double alpha = 0.25, min_slope = 0.99;
};

double loglog_slope(const std::vector<double>& n, const std::vector<double>& e) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(n.size());
  for (size_t i = 0; i < n.size(); ++i) {
    const double x = std::log(n[i]), y = std::log(e[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return -(m * sxy - sx * sy) / (m * sxx - sx * sx);
}

int cmd_sweep(const SweepArgs& a, Run& run) {
  if (a.what != "alpha" && a.what != "n") throw ParameterError("sweep: --what alpha | n");
  const std::vector<double> grid = parse_list(a.what == "alpha" ? a.alphas : a.ns);
  if (grid.empty()) {
    run.out << "sweep: empty parameter grid, nothing to do\n";
    return ok;
  }
  std::map<std::string, std::string> params{{"what", a.what}};
  json rows = json::array();
  bool pass = true;
  std::string csv;
  json j = {{"command", "sweep"}, {"what", a.what}};
  if (a.what == "alpha") {
    params["alphas"] = a.alphas;
    csv = "alpha,c,flat_value,dual_field_z\n";
    double prev_c = std::nan("");
    bool monotone = true;
    for (double al : grid) {
      json r = {{"alpha", al}};
      try {
        const ExplicitSolution ex = explicit_minimizer(al);
        const CertificateReport z = dual_field_z(ex, radial_grid(4096));
        r["c"] = ex.c;
        r["flat_value"] = ex.flat_value();
        r["dual_field_z"] = z.pass();
        pass = pass && z.pass();
        if (!std::isnan(prev_c) && !(ex.c < prev_c)) monotone = false;
        prev_c = ex.c;
        csv += fmt(al) + "," + fmt(ex.c) + "," + fmt(ex.flat_value()) + "," + (z.pass() ? "1" : "0") + "\n";
      } catch (const std::exception& e) {
        r["error"] = e.what();
        pass = false;
      }
      rows.push_back(r);
    }
    j["c_decreasing_in_alpha"] = monotone;
    pass = pass && monotone;
  } else {
    params["ns"] = a.ns;
    params["alpha"] = fmt(a.alpha);
    params["min_slope"] = fmt(a.min_slope);
    csv = "n,l2_phi_error,gap\n";
    std::vector<double> ns, errs;
    for (double nd : grid) {
      const int n = static_cast<int>(nd);
      json r = {{"n", n}};
      try {
        const ExplicitSolution ex = explicit_minimizer(a.alpha);
        const RofSolution sol = denoise(Data::power_law(1.0), radial_weights(3, a.alpha), radial_grid(n));
        const double e = l2_phi_error(sol, ex);
        r["l2_phi_error"] = e;
        r["gap"] = sol.gap();
        ns.push_back(n);
        errs.push_back(e);
        csv += std::to_string(n) + "," + fmt(e) + "," + fmt(sol.gap()) + "\n";
      } catch (const std::exception& e) {
        r["error"] = e.what();
        pass = false;
      }
      rows.push_back(r);
    }
    if (ns.size() >= 2) {
      const double slope = loglog_slope(ns, errs);
      j["regression"] = {{"slope", slope}, {"min_slope", a.min_slope}};
      pass = pass && slope >= a.min_slope;
    }
  }
  j["rows"] = rows;
  j["pass"] = pass;
  OutputSet os(output_dir(a.out), "sweep", params);
  os.write("", "csv", csv);
  os.write("", "json", dump(j));
  const int code = pass ? ok : certificate_failure;
  os.write_manifest(code, {{"min_slope", a.min_slope}});
  run.out << dump(j);
  return code;
}

void report_error(std::ostream& err, const std::string& kind, const std::string& message) {
  err << json{{"error", kind}, {"message", message}}.dump() << "\n";
}

}  // namespace

Data parse_data(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.empty()) throw ParameterError("empty data argument");
  if (parts[0] != "builtin") return Data::tabulated(read_table(spec));
  if (parts.size() < 2) throw ParameterError("builtin data needs a name");
  const auto kv = spec_args(parts, 2);
  auto arg = [&](const std::string& k) {
    const auto it = kv.find(k);
    if (it == kv.end()) throw ParameterError("builtin:" + parts[1] + " needs " + k + "=..");
    return to_double(it->second, k);
  };
  if (parts[1] == "step") return Data::step();
  if (parts[1] == "hat") return Data::hat();
  if (parts[1] == "constant") return Data::constant(arg("value"));
  if (parts[1] == "power") return Data::power_law(arg("beta"));
  throw ParameterError("unknown builtin data '" + parts[1] + "'");
}

Weight parse_weight(const std::string& spec) {
  if (spec == "unit") return Weight::unit();
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  if (kind == "table" && colon != std::string::npos) return Weight::tabulated(read_table(spec.substr(colon + 1)));
  if (kind == "power" && colon != std::string::npos) {
    const auto kv = spec_args(split(spec, ':'), 1);
    const auto it = kv.find("d");
    if (it == kv.end()) throw ParameterError("power weight needs d=..");
    return Weight::power(static_cast<int>(to_double(it->second, "d")));
  }
  throw ParameterError("unknown weight '" + spec + "' (unit | power:d=.. | table:<csv>)");
}

SampledFunction parse_ictv_data(const std::string& spec, int n) {
  const auto parts = split(spec, ':');
  if (parts.empty()) throw ParameterError("empty data argument");
  if (parts[0] != "builtin") return read_table(spec);
  if (parts.size() < 2) throw ParameterError("builtin data needs a name");
  const auto kv = spec_args(parts, 2);
  if (parts[1] == "step") return ictv_step(n);
  if (parts[1] == "hat") return ictv_hat(n);
  if (parts[1] == "ramp-hat") return ictv_ramp_hat(n);
  if (parts[1] == "spike") {
    const auto it = kv.find("exponent");
    return ictv_spike(n, it == kv.end() ? 0.4 : to_double(it->second, "exponent"));
  }
  throw ParameterError("unknown builtin ictv data '" + parts[1] + "'");
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  if (s.empty()) return out;
  const auto range = split(s, ':');
  if (range.size() == 3) {
    const double lo = to_double(range[0], "range start"), hi = to_double(range[1], "range end");
    const int count = static_cast<int>(to_double(range[2], "range count"));
    if (count < 1) throw ParameterError("range count must be positive");
    for (int i = 0; i < count; ++i) out.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
    return out;
  }
  for (const auto& item : split(s, ','))
    if (!item.empty()) out.push_back(to_double(item, "list entry"));
  return out;
}

std::string output_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("TAUTWEIGHT_OUT"); env && *env) return env;
  return "tautweight-out";
}

OutputSet::OutputSet(std::string dir, std::string command, std::map<std::string, std::string> params)
    : dir_(std::move(dir)), command_(std::move(command)), params_(std::move(params)) {
  std::string canon = command_ + "\n";
  for (const auto& [k, v] : params_) canon += k + "=" + v + "\n";
  hash_ = fnv1a_hex(canon);
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir_ + "': " + ec.message());
}

std::string OutputSet::path(const std::string& name) const { return (fs::path(dir_) / name).string(); }

std::string OutputSet::write(const std::string& suffix, const std::string& ext, const std::string& content) {
  const std::string name = command_ + "-" + hash_ + (suffix.empty() ? "" : "-" + suffix) + "." + ext;
  std::ofstream os(path(name), std::ios::binary);
  if (!os) throw std::runtime_error("cannot write '" + path(name) + "'");
  os << content;
  if (!os) throw std::runtime_error("write failed for '" + path(name) + "'");
  files_.push_back(name);
  return name;
}

void OutputSet::write_manifest(int exit_code, const std::map<std::string, double>& tolerances) {
  json j = {{"schema_version", kSchemaVersion}, {"tool", "tautweight"}, {"version", kVersion}, {"command", command_},
            {"hash", hash_}};
  json p = json::object();
  for (const auto& [k, v] : params_) p[k] = v;
  j["parameters"] = p;
  json t = json::object();
  for (const auto& [k, v] : tolerances) t[k] = v;
  j["tolerances"] = t;
  j["files"] = files_;
  j["exit_code"] = exit_code;
  const std::string name = command_ + "-" + hash_ + ".manifest.json";
  std::ofstream os(path(name), std::ios::binary);
  if (!os) throw std::runtime_error("cannot write '" + path(name) + "'");
  os << j.dump(2) << "\n";
}

int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weighted taut-string ROF solver, radial certificates, ICTV and TV counterexample checks", "tautweight"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  DenoiseArgs da;
  auto* den = app.add_subcommand("denoise", "Weighted ROF denoising by the taut string");
  den->add_option("--data", da.data, "builtin:step|hat|constant:value=..|power:beta=.. or a CSV t,value")->required();
  den->add_option("--weight", da.weight, "unit | power:d=.. | table:<csv>")->capture_default_str();
  den->add_option("--alpha", da.alpha, "Regularization weight")->required();
  den->add_option("--n", da.n, "Number of cells")->capture_default_str()->check(CLI::Range(2, 1 << 24));
  den->add_option("--grid", da.grid, "auto | uniform | radial | geometric:<ratio> | log:<a>")->capture_default_str();
  den->add_option("--kink-tol", da.kink_tol, "KKT kink tolerance")->capture_default_str();
  den->add_option("--feas-tol", da.feas_tol, "KKT feasibility tolerance")->capture_default_str();
  den->add_option("--tol", da.tol, "Optimality residual tolerance")->capture_default_str();
  den->add_option("--out", da.out, "Output directory (default $TAUTWEIGHT_OUT)");

  RadialArgs ra;
  auto* rad = app.add_subcommand("radial", "Radial problem with data r^-beta; explicit solution for d=3, beta=1");
  rad->add_option("--d", ra.d, "Dimension")->capture_default_str();
  rad->add_option("--alpha", ra.alpha, "Regularization weight in (0, 1/2)")->required();
  auto* beta_opt = rad->add_option("--beta", ra.beta, "Power of the data")->capture_default_str();
  rad->add_option("--data", ra.data, "CSV t,value instead of a power law")->excludes(beta_opt);
  rad->add_option("--n", ra.n, "Number of radial knots")->capture_default_str()->check(CLI::Range(2, 1 << 24));
  rad->add_option("--tol", ra.tol, "Optimality residual tolerance")->capture_default_str();
  rad->add_option("--out", ra.out, "Output directory");

  ClassifyArgs ca;
  auto* cls = app.add_subcommand("classify", "Boundedness verdict for radial data");
  cls->add_option("--beta", ca.beta, "Power of the data");
  cls->add_option("--data", ca.data, "CSV t,value");
  cls->add_option("--d", ca.d, "Dimension")->capture_default_str();
  cls->add_option("--margin", ca.margin, "Slope margin around 1")->capture_default_str();
  cls->add_option("--alpha", ca.alpha, "alpha for the switching integrals")->capture_default_str();
  cls->add_option("--nu", ca.nu, "nu values: list or lo:hi:count")->capture_default_str();
  cls->add_option("--out", ca.out, "Output directory");

  DiagnoseArgs ga;
  auto* dia = app.add_subcommand("diagnose", "Level-set diagnostics of a radial solution");
  dia->add_option("--solution", ga.solution, "Solution JSON from radial or denoise")->required();
  dia->add_option("--levels", ga.levels, "auto or a list of levels")->capture_default_str();
  dia->add_option("--count", ga.count, "Number of quantile levels for auto")->capture_default_str();
  dia->add_option("--tol", ga.tol, "Identity residual tolerance")->capture_default_str();
  dia->add_option("--out", ga.out, "Output directory");

  IctvArgs ia;
  auto* ict = app.add_subcommand("ictv", "1D TV / TV2 infimal-convolution denoising");
  ict->add_option("--alpha", ia.alpha, "First-order weight")->capture_default_str();
  ict->add_option("--gamma", ia.gamma, "Second- to first-order weight ratio")->capture_default_str();
  ict->add_option("--data", ia.data, "builtin:step|spike[:exponent=..]|ramp-hat|hat or CSV")->capture_default_str();
  ict->add_option("--n", ia.n, "Number of cells")->capture_default_str()->check(CLI::Range(3, 1 << 22));
  ict->add_option("--gap-tol", ia.gap_tol, "Relative duality gap target")->capture_default_str();
  ict->add_option("--max-iter", ia.max_iter, "Iteration cap")->capture_default_str();
  ict->add_option("--out", ia.out, "Output directory");

  CounterArgs xa;
  auto* cex = app.add_subcommand("counterexample", "Oscillatory u with empty TV subdifferential");
  cex->add_option("--profile", xa.profile, "hat | mollified-step")->capture_default_str();
  cex->add_option("--n-max", xa.n_max, "Number of dyadic blocks minus one")->capture_default_str();
  cex->add_option("--cells-per-finest", xa.cells_per_finest, "Cells in the finest support")->capture_default_str();
  cex->add_option("--out", xa.out, "Output directory");

  SweepArgs sa;
  auto* swp = app.add_subcommand("sweep", "Parameter sweeps over alpha or N");
  swp->add_option("--what", sa.what, "alpha | n")->capture_default_str();
  swp->add_option("--alphas", sa.alphas, "alpha values: list or lo:hi:count");
  swp->add_option("--ns", sa.ns, "grid sizes: list");
  swp->add_option("--alpha", sa.alpha, "alpha for the N sweep")->capture_default_str();
  swp->add_option("--min-slope", sa.min_slope, "Required log-log slope")->capture_default_str();
  swp->add_option("--out", sa.out, "Output directory");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    report_error(err, "usage", e.what());
    err << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return usage_error;
  }

  Run run{out, err, {}};
  try {
    if (*den) return cmd_denoise(da, run);
    if (*rad) return cmd_radial(ra, run);
    if (*cls) return cmd_classify(ca, run);
    if (*dia) return cmd_diagnose(ga, run);
    if (*ict) return cmd_ictv(ia, run);
    if (*cex) return cmd_counterexample(xa, run);
    if (*swp) return cmd_sweep(sa, run);
  } catch (const std::invalid_argument& e) {
    report_error(err, "parameter", e.what());
    return usage_error;
  } catch (const std::domain_error& e) {
    report_error(err, "data", e.what());
    return usage_error;
  } catch (const std::exception& e) {
    report_error(err, "runtime", e.what());
    return usage_error;
  }
  return usage_error;
}

int main_entry(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return parse_and_dispatch(args, std::cout, std::cerr);
}

}  // namespace tw::cli
