#include "slcone/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "slcone/errors.hpp"

namespace slcone {
namespace {

struct Derivs {
  C3 u, us, ut, uss, utt;
};

void check_grid(const SurfaceGrid& g, const FdOptions& o) {
  if (g.ns < 5 || g.nt < 5) {
    std::ostringstream os;
    os << "grid too coarse for finite differences: " << g.ns << "x" << g.nt;
    throw InputError(os.str());
  }
  if (o.stencil < 1) throw InputError("stencil must be >= 1");
  const int margin = std::max(o.margin, o.stencil);
  if (g.ns <= 2 * margin || g.nt <= 2 * margin)
    throw InputError("grid has no interior nodes for this stencil");
}

Derivs derivs_at(const SurfaceGrid& g, int i, int j, int k) {
  const double hs = k * g.hs();
  const double ht = k * g.ht();
  const C3& u = g.at(i, j).u;
  const C3& sp = g.at(i + k, j).u;
  const C3& sm = g.at(i - k, j).u;
  const C3& tp = g.at(i, j + k).u;
  const C3& tm = g.at(i, j - k).u;
  Derivs d;
  d.u = u;
  d.us = (0.5 / hs) * (sp - sm);
  d.ut = (0.5 / ht) * (tp - tm);
  d.uss = (1.0 / (hs * hs)) * (sp - 2.0 * u + sm);
  d.utt = (1.0 / (ht * ht)) * (tp - 2.0 * u + tm);
  return d;
}

// Max over interior nodes of a pointwise residual.
template <class F>
ResidualReport node_max(const std::string& name, const SurfaceGrid& g, const FdOptions& o, F f) {
  check_grid(g, o);
  const int k = o.stencil;
  const int margin = std::max(o.margin, k);
  double worst = 0.0;
  const bool par = o.exec == Exec::parallel;
#pragma omp parallel for reduction(max : worst) schedule(static) if (par)
  for (int i = margin; i < g.ns - margin; ++i)
    for (int j = margin; j < g.nt - margin; ++j) worst = std::max(worst, f(derivs_at(g, i, j, k)));
  ResidualReport r;
  r.name = name;
  r.max_abs = worst;
  r.ns = g.ns;
  r.nt = g.nt;
  r.h = k * std::max(g.hs(), g.ht());
  return r;
}

}  // namespace

ResidualReport harmonic_residual(const SurfaceGrid& g, const FdOptions& o) {
  return node_max("harmonic", g, o, [](const Derivs& d) {
    const double e = norm2(d.us) + norm2(d.ut);
    return norm(d.uss + d.utt + e * d.u);
  });
}

ResidualReport hopf_differential(const SurfaceGrid& g, const FdOptions& o) {
  return node_max("hopf", g, o, [](const Derivs& d) {
    const cplx phi(norm2(d.us) - norm2(d.ut), -2.0 * rdot(d.us, d.ut));
    return 0.25 * std::abs(phi);
  });
}

ResidualReport legendrian_residual(const SurfaceGrid& g, const FdOptions& o) {
  return node_max("legendrian", g, o, [](const Derivs& d) {
    return std::max(std::abs(omega(d.u, d.us)), std::abs(omega(d.u, d.ut)));
  });
}

CalibrationReport calibration_defect(const SurfaceGrid& g, double theta, const FdOptions& o) {
  const cplx rot = std::polar(1.0, theta);
  CalibrationReport rep;
  rep.im_part = node_max("calibration_im", g, o, [&](const Derivs& d) {
    return std::abs((rot * det3(d.u, d.us, d.ut)).imag());
  });
  rep.volume_part = node_max("calibration_volume", g, o, [&](const Derivs& d) {
    const double gram = norm2(d.us) * norm2(d.ut) - std::pow(rdot(d.us, d.ut), 2);
    const double vol = std::sqrt(std::max(gram, 0.0));
    if (vol == 0.0) return 0.0;
    return std::abs(std::abs((rot * det3(d.u, d.us, d.ut)).real()) / vol - 1.0);
  });
  const int k = std::max(o.stencil, o.margin);
  const Derivs mid = derivs_at(g, std::max(k, g.ns / 2), std::max(k, g.nt / 2), o.stencil);
  const double re = (rot * det3(mid.u, mid.us, mid.ut)).real();
  rep.orientation = re > 0 ? 1 : (re < 0 ? -1 : 0);
  return rep;
}

ResidualReport measure_order(const std::function<ResidualReport(const FdOptions&)>& check,
                             Exec exec, double roundoff_floor) {
  const ResidualReport coarse = check({2, 2, exec});
  ResidualReport fine = check({1, 2, exec});
  fine.coarse_max_abs = coarse.max_abs;
  if (coarse.max_abs <= roundoff_floor && fine.max_abs <= roundoff_floor) {
    fine.at_roundoff = true;
  } else if (fine.max_abs > 0.0) {
    fine.convergence_order = std::log2(coarse.max_abs / fine.max_abs);
  }
  return fine;
}

ResidualReport curvature_fd_check(const SurfaceGrid& g, const FdOptions& o) {
  check_grid(g, o);
  const int k = o.stencil;
  const int margin = std::max(o.margin, k);
  const double ht = k * g.ht();
  double worst = 0.0;
  const int i = g.ns / 2;
  for (int j = margin; j < g.nt - margin; ++j) {
    const double lm = std::log(g.at(i, j - k).y);
    const double l0 = std::log(g.at(i, j).y);
    const double lp = std::log(g.at(i, j + k).y);
    const double K_fd = -(lp - 2.0 * l0 + lm) / (ht * ht) / (2.0 * g.at(i, j).y);
    worst = std::max(worst, std::abs(K_fd - g.at(i, j).K));
  }
  ResidualReport r;
  r.name = "curvature_fd";
  r.max_abs = worst;
  r.ns = g.ns;
  r.nt = g.nt;
  r.h = ht;
  return r;
}

FlowCrossCheck neumann_vs_closed_form(const ConeParameters& p, double t0, double t1,
                                      int n_samples, double tol) {
  if (!(t1 > t0) || n_samples < 2) throw InputError("neumann_vs_closed_form: bad time span");
  const ConeImmersion im(p);
  const NeumannState s0 = im.state(0.0);
  std::vector<double> fwd, bwd;
  for (int i = 0; i < n_samples; ++i) {
    const double t = i + 1 == n_samples ? t1 : t0 + (t1 - t0) * i / (n_samples - 1);
    (t >= 0.0 ? fwd : bwd).push_back(t);
  }
  std::reverse(bwd.begin(), bwd.end());

  std::vector<NeumannState> flow;
  IntegrateOptions opts;
  opts.tol = tol;
  if (!fwd.empty()) {
    opts.output_times = fwd;
    const Trajectory tr = integrate(s0, p.axis, fwd.back(), opts);
    flow.insert(flow.end(), tr.states.begin(), tr.states.end());
  }
  if (!bwd.empty()) {
    opts.output_times = bwd;
    const Trajectory tr = integrate(s0, p.axis, bwd.back(), opts);
    flow.insert(flow.end(), tr.states.begin(), tr.states.end());
  }

  FlowCrossCheck out;
  out.distance.name = "neumann_vs_closed_form";
  out.distance.ns = 1;
  out.distance.nt = static_cast<int>(flow.size());
  double yc_lo = INFINITY, yc_hi = -INFINITY, yf_lo = INFINITY, yf_hi = -INFINITY;
  for (const NeumannState& s : flow) {
    const C3 zc = im.state(s.t).z;
    out.distance.max_abs = std::max(out.distance.max_abs, norm(s.z - zc));
    const double yc = az_norm2(zc, p.axis);
    const double yf = az_norm2(s.z, p.axis);
    yc_lo = std::min(yc_lo, yc);
    yc_hi = std::max(yc_hi, yc);
    yf_lo = std::min(yf_lo, yf);
    yf_hi = std::max(yf_hi, yf);
  }
  out.y_spread_closed = yc_hi - yc_lo;
  out.y_spread_flow = yf_hi - yf_lo;
  return out;
}

}  // namespace slcone
