#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "slcone/acfamily.hpp"
#include "slcone/elliptic.hpp"
#include "slcone/errors.hpp"
#include "slcone/family.hpp"
#include "slcone/grid.hpp"
#include "slcone/io.hpp"
#include "slcone/neumann.hpp"
#include "slcone/periods.hpp"
#include "slcone/rational.hpp"
#include "slcone/verify.hpp"

namespace {

using namespace slcone;
using nlohmann::json;
constexpr double kPi = std::numbers::pi;

enum Exit { kOk = 0, kViolation = 1, kInput = 2 };

struct AlphaArg {
  std::optional<Rational> exact;
  double value = 0.0;
};

AlphaArg parse_alpha(const std::string& text, std::optional<double> real) {
  AlphaArg a;
  if (real) {
    a.value = *real;
    return a;
  }
  if (text.find_first_of(".eE") != std::string::npos) {
    try {
      std::size_t used = 0;
      a.value = std::stod(text, &used);
      if (used != text.size()) throw InputError("");
    } catch (const std::exception&) {
      throw InputError("cannot parse alpha '" + text + "'");
    }
    return a;
  }
  a.exact = parse_rational(text);
  a.value = a.exact->value();
  return a;
}

std::pair<int, int> parse_grid(const std::string& text) {
  int ns = 0, nt = 0;
  char x = 0;
  std::istringstream is(text);
  if (!(is >> ns >> x >> nt) || (x != 'x' && x != 'X') || !is.eof() || ns < 5 || nt < 5)
    throw InputError("grid must look like NSxNT with both sizes >= 5, got '" + text + "'");
  return {ns, nt};
}

json num(double v) { return std::isfinite(v) ? json(v) : json(); }

// Collected per run and written next to every artifact.
struct Manifest {
  std::string subcommand;
  std::vector<std::string> argv;
  json parameters = json::object();
  json tolerances = json::object();
  json outputs = json::array();
  json metrics = json::object();
  std::string prefix;

  std::string output(const std::string& suffix) {
    const std::string path = prefix + suffix;
    outputs.push_back(path);
    return path;
  }

  void write(int exit_code) const {
    json j;
    j["schema"] = std::string(kManifestSchema);
    j["tool_version"] = std::string(kToolVersion);
    j["subcommand"] = subcommand;
    j["argv"] = argv;
    j["parameters"] = parameters;
    j["tolerances"] = tolerances;
    j["outputs"] = outputs;
    j["metrics"] = metrics;
    j["exit_code"] = exit_code;
    std::ofstream os(prefix + ".manifest.json");
    if (!os) throw InputError("cannot write " + prefix + ".manifest.json");
    os << j.dump(2) << '\n';
  }
};

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw InputError("cannot open '" + path + "' for writing");
  os.precision(17);
  return os;
}

void write_json(const std::string& path, const json& j) { open_out(path) << j.dump(2) << '\n'; }

// Residual checks pass when they converge at second order or sit at rounding level.
struct CheckPolicy {
  double min_order = 1.9;
  double max_residual = 1e-2;
};

bool passes(const ResidualReport& r, const CheckPolicy& pol) {
  if (r.at_roundoff) return true;
  const bool order_ok = r.convergence_order && *r.convergence_order >= pol.min_order;
  return order_ok && r.max_abs <= pol.max_residual;
}

// Runs the surface checks on g and records them. Returns true if all pass.
bool run_surface_checks(const SurfaceGrid& g, double theta, const CheckPolicy& pol,
                        json& report) {
  bool ok = true;
  auto record = [&](const ResidualReport& r) {
    json j = to_json(r);
    j["pass"] = passes(r, pol);
    ok = ok && j["pass"].get<bool>();
    report["checks"].push_back(j);
  };
  auto named = [](ResidualReport r, const char* name) {
    r.name = name;
    return r;
  };
  record(measure_order([&](const FdOptions& o) { return harmonic_residual(g, o); }));
  record(measure_order([&](const FdOptions& o) { return hopf_differential(g, o); }));
  record(measure_order([&](const FdOptions& o) { return legendrian_residual(g, o); }));
  record(measure_order(
      [&](const FdOptions& o) { return named(calibration_defect(g, theta, o).im_part, "calibration_im"); }));
  record(measure_order([&](const FdOptions& o) {
    return named(calibration_defect(g, theta, o).volume_part, "calibration_volume");
  }));
  if (g.params) record(measure_order([&](const FdOptions& o) { return curvature_fd_check(g, o); }));
  report["orientation"] = calibration_defect(g, theta).orientation;
  report["pass"] = ok;
  return ok;
}

struct Window {
  Interval s;
  Interval t;
  bool periodic = false;
  std::string kind;
};

Window default_window(const ConeImmersion& im) {
  const double T = im.basic_period();
  if (!std::isfinite(T)) return {{0, 2 * kPi}, {-5, 5}, false, "window"};
  return {{0, 2 * kPi}, {-T / 2, T / 2}, false, "window"};
}

void add_cone_params(Manifest& m, const AlphaArg& a, double J, double theta) {
  m.parameters["alpha"] = a.value;
  m.parameters["alpha_exact"] = a.exact ? json(a.exact->str()) : json();
  m.parameters["J"] = J;
  m.parameters["theta"] = theta;
}

json grid_summary(const SurfaceGrid& g) {
  double kmin = std::numeric_limits<double>::infinity(), kmax = -kmin;
  double ymin = kmin, ymax = -kmin;
  for (const auto& p : g.samples) {
    kmin = std::min(kmin, p.K);
    kmax = std::max(kmax, p.K);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  return {{"ns", g.ns},        {"nt", g.nt},       {"s_range", {g.s_range.lo, g.s_range.hi}},
          {"t_range", {g.t_range.lo, g.t_range.hi}}, {"periodic", g.periodic},
          {"K_min", kmin},     {"K_max", kmax},    {"y_min", ymin}, {"y_max", ymax}};
}

void write_mesh(Manifest& m, const SurfaceGrid& g, const std::vector<std::string>& formats,
                const Projection& proj) {
  for (const std::string& f : formats) {
    if (f == "obj") {
      auto os = open_out(m.output(".obj"));
      write_obj(os, g, proj);
    } else if (f == "csv") {
      auto os = open_out(m.output(".csv"));
      write_grid_csv(os, g);
    }
  }
}

struct CommonOpts {
  std::string out;
  std::string alpha = "1/2";
  std::optional<double> alpha_real;
  double J = 0.0;
  double theta = 0.0;
  std::string grid = "200x200";
  std::vector<std::string> formats{"obj"};
  std::string projection = "0,1,2";
  double min_order = 1.9;
  double max_residual = 1e-2;
};

void add_cone_flags(CLI::App* sub, CommonOpts& o) {
  sub->add_option("--alpha", o.alpha, "alpha as p/q (exact) or a decimal");
  sub->add_option("--alpha-real", o.alpha_real, "alpha as a real number");
  sub->add_option("--J", o.J, "angular momentum constant, 0 <= J <= 1/(3 sqrt 3)");
  sub->add_option("--theta", o.theta, "calibration phase");
}

void add_grid_flags(CLI::App* sub, CommonOpts& o) {
  sub->add_option("--grid", o.grid, "grid size NSxNT");
  sub->add_option("--format", o.formats, "mesh formats: obj, csv, json")
      ->check(CLI::IsMember({"obj", "csv", "json"}));
  sub->add_option("--projection", o.projection, "R^6 -> R^3 projection for OBJ output");
  sub->add_option("--min-order", o.min_order, "required convergence order");
  sub->add_option("--max-residual", o.max_residual, "largest accepted residual");
}

int cmd_elliptic(Manifest& m, const std::string& op, std::optional<double> ksq, double u,
                 const CommonOpts& o) {
  json result;
  if (op == "K") {
    if (!ksq) throw InputError("elliptic K needs --ksq");
    m.parameters["ksq"] = *ksq;
    result["K"] = num(complete_K(EllipticModulus::from_ksq(*ksq)));
  } else if (op == "sncndn") {
    if (!ksq) throw InputError("elliptic sncndn needs --ksq");
    m.parameters["ksq"] = *ksq;
    m.parameters["u"] = u;
    const JacobiTriple j = jacobi_sn_cn_dn(u, EllipticModulus::from_ksq(*ksq));
    result = {{"sn", j.sn}, {"cn", j.cn}, {"dn", j.dn}};
  } else {
    const AlphaArg a = parse_alpha(o.alpha, o.alpha_real);
    add_cone_params(m, a, o.J, 0.0);
    const GammaSolution gs = solve_gamma(ConeParameters::make(a.value, o.J));
    result = to_json(gs.elliptic);
    result["basic_period"] = num(gs.basic_period_T);
    result["degeneracy"] = to_string(gs.degeneracy);
  }
  m.metrics = result;
  std::cout << result.dump(2) << '\n';
  return kOk;
}

int cmd_neumann(Manifest& m, const CommonOpts& o, double t_end, double tol, int samples,
                double drift_tol) {
  const AlphaArg a = parse_alpha(o.alpha, o.alpha_real);
  add_cone_params(m, a, o.J, o.theta);
  m.parameters["t_end"] = t_end;
  m.parameters["samples"] = samples;
  m.tolerances["integrator"] = tol;
  m.tolerances["drift"] = drift_tol;
  if (!(t_end > 0.0) || samples < 2) throw InputError("need --t-end > 0 and --samples >= 2");

  const ConeImmersion im(ConeParameters::make(a.value, o.J, o.theta));
  IntegrateOptions opts;
  opts.tol = tol;
  for (int i = 0; i < samples; ++i) opts.output_times.push_back(t_end * i / (samples - 1));
  opts.output_times.back() = t_end;
  const NeumannState s0 = im.state(0.0);
  const Trajectory traj = integrate(s0, im.params().axis, t_end, opts);

  const ConservedSet q0 = conserved(s0, im.params().axis);
  double dH = 0.0, dJ = 0.0, dclosed = 0.0;
  for (const NeumannState& s : traj.states) {
    const ConservedSet q = conserved(s, im.params().axis);
    dH = std::max(dH, std::abs(q.H - q0.H));
    for (int j = 0; j < 3; ++j) dJ = std::max(dJ, std::abs(q.J[j] - q0.J[j]));
    dclosed = std::max(dclosed, norm(s.z - im.state(s.t).z));
  }
  auto os = open_out(m.output(".csv"));
  write_trajectory_csv(os, traj, im.params().axis);

  m.metrics = {{"drift_H", dH},
               {"drift_J", dJ},
               {"closed_form_distance", dclosed},
               {"accepted_steps", traj.stats.accepted},
               {"rejected_steps", traj.stats.rejected},
               {"max_sphere_drift", traj.stats.max_sphere_drift}};
  std::cout << m.metrics.dump(2) << '\n';
  return std::max(dH, dJ) <= drift_tol ? kOk : kViolation;
}

int cmd_torus(Manifest& m, const CommonOpts& o, double closure_tol, bool scan) {
  const AlphaArg a = parse_alpha(o.alpha, o.alpha_real);
  add_cone_params(m, a, o.J, o.theta);
  const auto [ns, nt] = parse_grid(o.grid);
  m.parameters["grid"] = {ns, nt};
  m.parameters["formats"] = o.formats;
  m.tolerances["closure"] = closure_tol;
  m.tolerances["min_order"] = o.min_order;
  m.tolerances["max_residual"] = o.max_residual;
  const Projection proj = Projection::parse(o.projection);

  const ConeImmersion im(ConeParameters::make(a.value, o.J, o.theta));
  const GammaSolution& gs = im.gamma_solution();
  json report;
  report["degeneracy"] = to_string(gs.degeneracy);
  report["elliptic"] = to_json(gs.elliptic);
  report["curvature_expected"] = to_json(curvature_extremes(im.params()));

  Window w = default_window(im);
  std::optional<TorusSpec> spec;
  if (std::isfinite(im.basic_period())) {
    const ClosureResult c = closure_test(im, closure_tol, a.exact);
    report["closure"] = to_json(c);
    if (c.kind == ClosureKind::two_periods) {
      const auto& b = c.lattice.basis;
      w = {{0, b[0].sigma}, {0, b[1].tau}, true, "fundamental_domain"};
      if (o.J == 0.0 && a.exact) {
        spec = torus_lattice(static_cast<int>(a.exact->num), static_cast<int>(a.exact->den));
        report["torus"] = {{"m", spec->m}, {"n", spec->n}, {"mn_even", spec->mn_even}};
      }
    }
  } else {
    report["note"] = "alpha = 0, J = 0: totally geodesic sphere, the intersection of S^5 with a real 3-plane";
  }
  report["domain"] = w.kind;

  const SurfaceGrid g = make_grid(im, w.s, w.t, ns, nt, w.periodic);
  const json summary = grid_summary(g);
  report["grid"] = summary;
  const bool flat = std::max(std::abs(summary["K_min"].get<double>()),
                             std::abs(summary["K_max"].get<double>())) <= 1e-8;
  report["flat"] = flat;

  const CheckPolicy pol{o.min_order, o.max_residual};
  bool ok = run_surface_checks(g, o.theta, pol, report);

  if (scan && spec) {
    const EmbeddednessReport e = embeddedness_scan(*spec, g);
    report["embeddedness"] = to_json(e);
    ok = ok && e.pairs.empty();
  }
  write_mesh(m, g, o.formats, proj);
  write_json(m.output(".report.json"), report);

  m.metrics = {{"K_min", summary["K_min"]}, {"K_max", summary["K_max"]}, {"flat", flat},
               {"degeneracy", report["degeneracy"]}, {"domain", w.kind}, {"pass", ok}};
  if (report.contains("closure")) m.metrics["lattice"] = report["closure"]["lattice"];
  if (report.contains("embeddedness"))
    m.metrics["proximity_pairs"] = report["embeddedness"]["pair_count"];
  std::cout << m.metrics.dump(2) << '\n';
  return ok ? kOk : kViolation;
}

int cmd_periods(Manifest& m, const CommonOpts& o, double tol) {
  const AlphaArg a = parse_alpha(o.alpha, o.alpha_real);
  add_cone_params(m, a, o.J, o.theta);
  m.tolerances["closure"] = tol;
  const ConeImmersion im(ConeParameters::make(a.value, o.J, o.theta));
  const ClosureResult c = closure_test(im, tol, a.exact);
  json r = to_json(c);
  for (const PeriodVector& v : c.lattice.basis) r["basis_defects"].push_back(period_defect(im, v));
  if (c.kind == ClosureKind::two_periods) {
    const MinimalityReport mr = check_minimality(c.lattice, im.params().axis);
    r["minimal"] = mr.minimal;
    r["minimality_margin"] = num(mr.min_defect);
  }
  write_json(m.output(".json"), r);
  m.metrics = r;
  std::cout << r.dump(2) << '\n';
  return kOk;
}

int cmd_search(Manifest& m, const CommonOpts& o, const std::string& target, double tol,
               double closure_tol) {
  const AlphaArg a = parse_alpha(o.alpha, o.alpha_real);
  if (a.value != 0.0) throw InputError("search is defined at alpha = 0 only");
  const Rational q = parse_rational(target);
  m.parameters["alpha"] = 0;
  m.parameters["target"] = q.str();
  m.tolerances["bisection"] = tol;
  m.tolerances["closure"] = closure_tol;

  SearchResult sr;
  try {
    sr = search_closing_J(q, tol);
  } catch (const DomainError& e) {
    throw InputError(e.what());
  }
  const ConeImmersion im(ConeParameters::make(0.0, sr.J, o.theta));
  const ClosureResult c = closure_test(im, closure_tol, make_rational(0, 1));
  json r = {{"J", sr.J},
            {"value", sr.value},
            {"residual", sr.residual},
            {"iterations", sr.iterations},
            {"closure", to_json(c)}};
  bool ok = c.kind == ClosureKind::two_periods;
  if (ok) {
    double worst = 0.0;
    for (const PeriodVector& v : c.lattice.basis) worst = std::max(worst, period_defect(im, v));
    r["basis_defect"] = worst;
    ok = worst <= 1e-6;
  }
  r["confirmed"] = ok;
  write_json(m.output(".json"), r);
  m.metrics = r;
  std::cout << r.dump(2) << '\n';
  return ok ? kOk : kViolation;
}

int cmd_verify(Manifest& m, const CommonOpts& o, std::vector<double> s_range,
               std::vector<double> t_range, double perturb) {
  const AlphaArg a = parse_alpha(o.alpha, o.alpha_real);
  add_cone_params(m, a, o.J, o.theta);
  const auto [ns, nt] = parse_grid(o.grid);
  m.parameters["grid"] = {ns, nt};
  m.parameters["perturb"] = perturb;
  m.tolerances["min_order"] = o.min_order;
  m.tolerances["max_residual"] = o.max_residual;

  const ConeImmersion im(ConeParameters::make(a.value, o.J, o.theta));
  Window w = default_window(im);
  if (!s_range.empty()) w.s = {s_range.at(0), s_range.at(1)};
  if (!t_range.empty()) w.t = {t_range.at(0), t_range.at(1)};
  m.parameters["s_range"] = {w.s.lo, w.s.hi};
  m.parameters["t_range"] = {w.t.lo, w.t.hi};

  SurfaceGrid g;
  if (perturb == 0.0) {
    g = make_grid(im, w.s, w.t, ns, nt);
  } else {
    // Control surface: a smooth bump normalized back onto the sphere.
    g = make_grid_from(
        [&](double s, double t) {
          C3 u = im.point(s, t);
          u[0] += perturb * std::sin(s) * std::cos(t);
          return (1.0 / norm(u)) * u;
        },
        w.s, w.t, ns, nt);
  }
  json report;
  const bool ok = run_surface_checks(g, o.theta, {o.min_order, o.max_residual}, report);
  write_json(m.output(".report.json"), report);
  m.metrics = report;
  std::cout << report.dump(2) << '\n';
  return ok ? kOk : kViolation;
}

int cmd_ac(Manifest& m, const CommonOpts& o, double d, const std::string& link, int profile_m,
           double rho_max, double min_abs_f) {
  const auto [ns, nt] = parse_grid(o.grid);
  m.parameters["d"] = d;
  m.parameters["link"] = link;
  m.parameters["grid"] = {ns, nt};
  m.parameters["profile_samples"] = profile_m;
  m.parameters["rho_max"] = rho_max;
  m.parameters["min_abs_f"] = min_abs_f;
  m.parameters["theta"] = o.theta;
  m.parameters["formats"] = o.formats;
  m.tolerances["min_order"] = o.min_order;
  m.tolerances["invariant"] = 1e-12;

  SurfaceGrid L;
  if (link == "clifford") {
    L = clifford_link(ns, nt);
  } else if (link == "sphere") {
    L = real_sphere_link(ns, nt);
  } else {
    const AlphaArg a = parse_alpha(o.alpha, o.alpha_real);
    m.parameters["alpha"] = a.value;
    m.parameters["J"] = o.J;
    L = immersion_link(ConeParameters::make(a.value, o.J), ns, nt);
  }
  const ACGrid g = build_ac_surface(profile_curve(3, d, profile_m, rho_max), L, o.theta);

  json report;
  const double inv = profile_invariant_defect(g.profile);
  report["invariant_defect"] = inv;
  bool ok = inv <= 1e-12;

  const ACResiduals fine = ac_residuals(g, 1, 2);
  const ACResiduals coarse = ac_residuals(g, 2, 2);
  auto order_entry = [&](const ResidualReport& f, const ResidualReport& c) {
    json j = to_json(f);
    j["coarse_max_abs"] = c.max_abs;
    const bool roundoff = f.max_abs <= 1e-11 && c.max_abs <= 1e-11;
    const double order = roundoff ? 0.0 : std::log2(c.max_abs / f.max_abs);
    j["convergence_order"] = roundoff ? json() : json(order);
    j["at_roundoff"] = roundoff;
    j["pass"] = roundoff || order >= o.min_order;
    ok = ok && j["pass"].get<bool>();
    return j;
  };
  report["lagrangian"] = order_entry(fine.lagrangian, coarse.lagrangian);
  report["special"] = order_entry(fine.special, coarse.special);

  const HarveyLawsonDefect hl = harvey_lawson_defect(g);
  if (link == "sphere") report["harvey_lawson"] = {{"parallel", hl.parallel}, {"cubic", hl.cubic}};

  if (d == 0.0) {
    const double dist = cone_union_distance(g, rho_max);
    report["cone_union_distance"] = dist;
    ok = ok && dist <= 1e-10;
  } else {
    const EndDecay ends = asymptotic_ends(g, min_abs_f);
    report["end_decay"] = to_json(ends);
    const bool mono = EndDecay::decreasing(ends.end0, false) && EndDecay::decreasing(ends.end1, true);
    report["end_decay_monotone"] = mono;
    ok = ok && mono;
  }
  report["pass"] = ok;

  const Projection proj = Projection::parse(o.projection);
  for (const std::string& f : o.formats) {
    if (f == "obj") {
      auto os = open_out(m.output(".obj"));
      write_obj(os, g, proj);
    } else if (f == "csv") {
      auto os = open_out(m.output(".csv"));
      write_acgrid_csv(os, g);
    }
  }
  write_json(m.output(".report.json"), report);
  m.metrics = report;
  m.metrics.erase("end_decay");
  std::cout << m.metrics.dump(2) << '\n';
  return ok ? kOk : kViolation;
}

int run(const std::vector<std::string>& args);

int cmd_replay(const std::string& path, const std::string& out_override) {
  std::ifstream is(path);
  if (!is) throw InputError("cannot read manifest '" + path + "'");
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed manifest: ") + e.what());
  }
  if (j.value("schema", "") != kManifestSchema)
    throw InputError("unsupported manifest schema '" + j.value("schema", "") + "'");
  std::vector<std::string> argv = j.at("argv").get<std::vector<std::string>>();
  if (!argv.empty() && argv.front() == "replay") throw InputError("refusing to replay a replay");
  if (!out_override.empty()) {
    bool replaced = false;
    for (std::size_t i = 0; i + 1 < argv.size(); ++i)
      if (argv[i] == "--out") {
        argv[i + 1] = out_override;
        replaced = true;
      }
    if (!replaced) {
      argv.push_back("--out");
      argv.push_back(out_override);
    }
  }
  return run(argv);
}

int run(const std::vector<std::string>& args) {
  CLI::App app{"Special Legendrian cones in S^5: construction, closure and verification"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  CommonOpts o;
  auto out_flag = [&](CLI::App* sub) {
    o.out = "slcone-" + sub->get_name();
    sub->add_option("--out", o.out, "output prefix");
  };

  auto* el = app.add_subcommand("elliptic", "complete K, Jacobi functions or cubic data");
  std::string el_op = "K";
  std::optional<double> ksq;
  double el_u = 0.0;
  el->add_option("op", el_op, "K | sncndn | cubic")->check(CLI::IsMember({"K", "sncndn", "cubic"}));
  el->add_option("--ksq", ksq, "parameter k^2");
  el->add_option("--u", el_u, "argument of sn, cn, dn");
  add_cone_flags(el, o);
  out_flag(el);

  auto* ne = app.add_subcommand("neumann", "integrate the Neumann system from closed-form data");
  double t_end = 50.0, ne_tol = 1e-10, drift_tol = 1e-8;
  int ne_samples = 1001;
  add_cone_flags(ne, o);
  ne->add_option("--t-end", t_end, "final time");
  ne->add_option("--tol", ne_tol, "integrator tolerance");
  ne->add_option("--samples", ne_samples, "number of output times");
  ne->add_option("--drift-tol", drift_tol, "largest accepted conserved-quantity drift");
  out_flag(ne);

  auto* to = app.add_subcommand("torus", "build, verify and export one member of the family");
  double to_closure_tol = 1e-9;
  bool no_scan = false;
  add_cone_flags(to, o);
  add_grid_flags(to, o);
  to->add_option("--closure-tol", to_closure_tol, "rationality tolerance");
  to->add_flag("--no-scan", no_scan, "skip the embeddedness scan");
  out_flag(to);

  auto* pe = app.add_subcommand("periods", "closure test and period lattice");
  double pe_tol = 1e-9;
  add_cone_flags(pe, o);
  pe->add_option("--tol", pe_tol, "rationality tolerance");
  out_flag(pe);

  auto* se = app.add_subcommand("search", "find J at alpha = 0 with theta_2(T)/2pi = target");
  std::string target;
  double se_tol = 1e-10, se_closure_tol = 1e-8;
  se->add_option("--alpha", o.alpha, "must be 0")->default_str("0");
  se->add_option("--target", target, "rational target p/q")->required();
  se->add_option("--tol", se_tol, "bisection tolerance on the target");
  se->add_option("--closure-tol", se_closure_tol, "rationality tolerance of the confirmation");
  se->add_option("--theta", o.theta, "calibration phase");
  out_flag(se);

  auto* ve = app.add_subcommand("verify", "finite-difference residuals on a window");
  std::vector<double> s_range, t_range;
  double perturb = 0.0;
  add_cone_flags(ve, o);
  add_grid_flags(ve, o);
  ve->add_option("--s-range", s_range, "s0,s1")->expected(2)->delimiter(',');
  ve->add_option("--t-range", t_range, "t0,t1")->expected(2)->delimiter(',');
  ve->add_option("--perturb", perturb, "amplitude of a control perturbation");
  out_flag(ve);

  auto* ac = app.add_subcommand("ac", "asymptotically conical special Lagrangian Sigma_d");
  double d = 1.0, rho_max = 50.0, min_abs_f = 2.0;
  std::string link = "clifford";
  int profile_m = 200;
  ac->add_option("--d", d, "level of Im(f^3)");
  ac->add_option("--link", link, "clifford | sphere | family")
      ->check(CLI::IsMember({"clifford", "sphere", "family"}));
  add_cone_flags(ac, o);
  add_grid_flags(ac, o);
  ac->add_option("--profile-samples", profile_m, "samples along the profile curve");
  ac->add_option("--rho-max", rho_max, "largest |f|");
  ac->add_option("--min-abs-f", min_abs_f, "smallest |f| in the end-decay tables");
  out_flag(ac);

  auto* re = app.add_subcommand("replay", "rerun the command recorded in a manifest");
  std::string manifest_path, replay_out;
  re->add_option("manifest", manifest_path, "manifest JSON")->required();
  re->add_option("--out", replay_out, "new output prefix");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInput;
  }

  if (re->parsed()) return cmd_replay(manifest_path, replay_out);

  CLI::App* sub = app.get_subcommands().front();
  Manifest m;
  m.subcommand = sub->get_name();
  m.argv = args;
  m.prefix = o.out;
  int code = kOk;
  try {
    if (sub == el) code = cmd_elliptic(m, el_op, ksq, el_u, o);
    else if (sub == ne) code = cmd_neumann(m, o, t_end, ne_tol, ne_samples, drift_tol);
    else if (sub == to) code = cmd_torus(m, o, to_closure_tol, !no_scan);
    else if (sub == pe) code = cmd_periods(m, o, pe_tol);
    else if (sub == se) code = cmd_search(m, o, target, se_tol, se_closure_tol);
    else if (sub == ve) code = cmd_verify(m, o, s_range, t_range, perturb);
    else if (sub == ac) code = cmd_ac(m, o, d, link, profile_m, rho_max, min_abs_f);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    code = kInput;
  } catch (const DomainError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    code = kInput;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    m.metrics["error"] = e.what();
    code = kViolation;
  }
  m.write(code);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(std::vector<std::string>(argv + 1, argv + argc));
  } catch (const slcone::InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kViolation;
  }
}
