#include "slcone/neumann.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "slcone/errors.hpp"

namespace slcone {

SymmetryAxis SymmetryAxis::from_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    std::ostringstream os;
    os << "alpha = " << alpha << " outside [0, 1]";
    throw DomainError(os.str());
  }
  SymmetryAxis a;
  a.alpha = alpha;
  a.lambda = {1.0, alpha, -1.0 - alpha};
  a.mu = {-1.0 - 2.0 * alpha, 2.0 + alpha, alpha - 1.0};
  return a;
}

SymmetryAxis SymmetryAxis::from_lambda(const R3& lambda) {
  SymmetryAxis a;
  a.alpha = std::numeric_limits<double>::quiet_NaN();
  a.lambda = lambda;
  a.mu = cross({1.0, 1.0, 1.0}, lambda);
  return a;
}

double az_norm2(const C3& z, const SymmetryAxis& axis) {
  double y = 0.0;
  for (int j = 0; j < 3; ++j) y += axis.lambda[j] * axis.lambda[j] * std::norm(z[j]);
  return y;
}

C3 neumann_rhs(const NeumannState& s, const SymmetryAxis& axis) {
  const double lam = norm2(s.zdot) + az_norm2(s.z, axis);
  C3 acc;
  for (int j = 0; j < 3; ++j) acc[j] = (axis.lambda[j] * axis.lambda[j] - lam) * s.z[j];
  return acc;
}

ConservedSet conserved(const NeumannState& s, const SymmetryAxis& axis) {
  ConservedSet q;
  q.H = norm2(s.zdot) - az_norm2(s.z, axis);
  for (int j = 0; j < 3; ++j) {
    q.J[j] = (std::conj(s.z[j]) * s.zdot[j]).imag();
    q.c += axis.lambda[j] * std::norm(s.z[j]);
  }
  return q;
}

std::array<double, 5> constraint_residuals(const NeumannState& s, const SymmetryAxis& axis) {
  const ConservedSet q = conserved(s, axis);
  return {q.H, dot(axis.lambda, q.J), q.c, q.J[0] + q.J[1] + q.J[2], norm2(s.z) - 1.0};
}

namespace {

// (z, zdot) packed as one vector of six complex numbers.
using Phase = std::array<cplx, 6>;

Phase pack(const NeumannState& s) {
  return {s.z[0], s.z[1], s.z[2], s.zdot[0], s.zdot[1], s.zdot[2]};
}

void unpack(const Phase& y, double t, NeumannState& s) {
  s.t = t;
  s.z = {y[0], y[1], y[2]};
  s.zdot = {y[3], y[4], y[5]};
}

Phase field(const Phase& y, const SymmetryAxis& axis) {
  NeumannState s;
  unpack(y, 0.0, s);
  const C3 acc = neumann_rhs(s, axis);
  return {y[3], y[4], y[5], acc[0], acc[1], acc[2]};
}

// y + h * sum_i w_i k_i
template <std::size_t N>
Phase combine(const Phase& y, double h, const std::array<double, N>& w,
              const std::array<Phase, 7>& k) {
  Phase out = y;
  for (std::size_t i = 0; i < N; ++i) {
    if (w[i] == 0.0) continue;
    const double hw = h * w[i];
    for (std::size_t c = 0; c < 6; ++c) out[c] += hw * k[i][c];
  }
  return out;
}

// Dormand & Prince, J. Comput. Appl. Math. 6 (1980).
constexpr std::array<double, 7> kC{0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr std::array<double, 1> kA2{1.0 / 5};
constexpr std::array<double, 2> kA3{3.0 / 40, 9.0 / 40};
constexpr std::array<double, 3> kA4{44.0 / 45, -56.0 / 15, 32.0 / 9};
constexpr std::array<double, 4> kA5{19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729};
constexpr std::array<double, 5> kA6{9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176,
                                    -5103.0 / 18656};
constexpr std::array<double, 6> kB{35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784,
                                   11.0 / 84};
constexpr std::array<double, 7> kE{71.0 / 57600,     0.0,         -71.0 / 16695, 71.0 / 1920,
                                   -17253.0 / 339200, 22.0 / 525, -1.0 / 40};

struct StepResult {
  Phase y;
  double err;  // scaled error norm; accept when <= 1
};

StepResult dopri_step(const Phase& y, double h, double tol, const SymmetryAxis& axis) {
  std::array<Phase, 7> k;
  k[0] = field(y, axis);
  k[1] = field(combine(y, h, kA2, k), axis);
  k[2] = field(combine(y, h, kA3, k), axis);
  k[3] = field(combine(y, h, kA4, k), axis);
  k[4] = field(combine(y, h, kA5, k), axis);
  k[5] = field(combine(y, h, kA6, k), axis);
  const Phase yn = combine(y, h, kB, k);
  k[6] = field(yn, axis);

  double err = 0.0;
  for (std::size_t c = 0; c < 6; ++c) {
    cplx e = 0.0;
    for (std::size_t i = 0; i < 7; ++i) e += kE[i] * k[i][c];
    e *= h;
    const double sre = tol * (1.0 + std::max(std::abs(y[c].real()), std::abs(yn[c].real())));
    const double sim = tol * (1.0 + std::max(std::abs(y[c].imag()), std::abs(yn[c].imag())));
    err = std::max({err, std::abs(e.real()) / sre, std::abs(e.imag()) / sim});
  }
  return {yn, err};
}

void project(NeumannState& s, IntegrationStats& stats) {
  const double n2 = norm2(s.z);
  stats.max_sphere_drift = std::max(stats.max_sphere_drift, std::abs(n2 - 1.0));
  stats.max_tangency_drift = std::max(stats.max_tangency_drift, std::abs(rdot(s.z, s.zdot)));
  s.z = (1.0 / std::sqrt(n2)) * s.z;
  const double radial = rdot(s.z, s.zdot);
  s.zdot = s.zdot - radial * s.z;
}

}  // namespace

Trajectory integrate(const NeumannState& s0, const SymmetryAxis& axis, double t_end,
                     const IntegrateOptions& opts) {
  if (!(opts.tol > 0.0)) throw DomainError("integrate: tol must be positive");
  Trajectory traj;
  IntegrationStats& stats = traj.stats;
  const double dir = t_end >= s0.t ? 1.0 : -1.0;

  std::size_t next_out = 0;
  const bool sampled = !opts.output_times.empty();
  for (std::size_t i = 0; i < opts.output_times.size(); ++i) {
    const double to = opts.output_times[i];
    if (dir * (to - s0.t) < 0 || dir * (to - t_end) > 0 ||
        (i > 0 && dir * (to - opts.output_times[i - 1]) < 0))
      throw InputError("integrate: output_times must be ordered and inside [t0, t_end]");
  }

  NeumannState s = s0;
  auto record = [&](const NeumannState& st) {
    if (!sampled) {
      traj.states.push_back(st);
      return;
    }
    while (next_out < opts.output_times.size() && opts.output_times[next_out] == st.t) {
      traj.states.push_back(st);
      ++next_out;
    }
  };
  record(s);

  double h_prop = std::abs(opts.initial_step);
  stats.min_step = std::numeric_limits<double>::infinity();
  Phase y = pack(s);
  while (dir * (t_end - s.t) > 0) {
    if (stats.accepted + stats.rejected >= opts.max_steps) {
      std::ostringstream os;
      os << "integrate: exceeded " << opts.max_steps << " steps at t = " << s.t;
      throw StiffnessError(os.str());
    }
    double target = t_end;
    if (sampled && next_out < opts.output_times.size()) target = opts.output_times[next_out];
    double h = h_prop;
    bool lands = false;
    if (h >= std::abs(target - s.t)) {
      h = std::abs(target - s.t);
      lands = true;
    }
    const double floor_h = 16 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(s.t));
    if (h_prop < floor_h) {
      std::ostringstream os;
      os << "integrate: step size underflow (h = " << h_prop << ") at t = " << s.t
         << "; |z|^2 - 1 = " << norm2(s.z) - 1.0 << ", H = " << conserved(s, axis).H;
      throw StiffnessError(os.str());
    }
    if (h == 0.0) {  // an output time coincides with the current time
      record(s);
      continue;
    }
    const StepResult step = dopri_step(y, dir * h, opts.tol, axis);
    const double fac =
        step.err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(step.err, -0.2), 0.2, 5.0);
    if (step.err <= 1.0) {
      ++stats.accepted;
      stats.min_step = std::min(stats.min_step, h);
      stats.max_step = std::max(stats.max_step, h);
      unpack(step.y, lands ? target : s.t + dir * h, s);
      if (opts.project) project(s, stats);
      y = pack(s);
      record(s);
      // A step shortened to hit an output time says little about the next one.
      if (!lands || h * fac < h_prop) h_prop = h * fac;
    } else {
      ++stats.rejected;
      h_prop = h * std::min(1.0, fac);
    }
  }
  if (stats.accepted == 0) stats.min_step = 0.0;
  return traj;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const SymmetryAxis& axis) {
  os << "t,x1,y1,x2,y2,x3,y3,xd1,yd1,xd2,yd2,xd3,yd3,H,J1,J2,J3,c\n";
  os << std::setprecision(17);
  for (const NeumannState& s : traj.states) {
    const ConservedSet q = conserved(s, axis);
    os << s.t;
    for (const cplx& v : s.z) os << ',' << v.real() << ',' << v.imag();
    for (const cplx& v : s.zdot) os << ',' << v.real() << ',' << v.imag();
    os << ',' << q.H << ',' << q.J[0] << ',' << q.J[1] << ',' << q.J[2] << ',' << q.c << '\n';
  }
}

}  // namespace slcone
