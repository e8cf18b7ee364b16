#pragma once

#include <functional>
#include <optional>
#include <string>

#include "slcone/exec.hpp"
#include "slcone/family.hpp"
#include "slcone/grid.hpp"

namespace slcone {

struct ResidualReport {
  std::string name;
  double max_abs = 0.0;
  int ns = 0;
  int nt = 0;
  double h = 0.0;  // larger of the two finite-difference steps
  // log2(r(2h) / r(h)) on a common node set; set only by measure_order.
  std::optional<double> convergence_order;
  std::optional<double> coarse_max_abs;
  // Both step sizes gave residuals at rounding level, so no order is defined.
  bool at_roundoff = false;
};

// stencil k uses u(i +- k, j), u(i, j +- k), i.e. steps k hs and k ht. Nodes
// closer than margin (default k) to the edge are skipped.
struct FdOptions {
  int stencil = 1;
  int margin = 0;
  Exec exec = Exec::parallel;
};

// |Delta u + |du|^2 u| with Delta = d_ss + d_tt.
ResidualReport harmonic_residual(const SurfaceGrid& g, const FdOptions& o = {});

// |phi| with phi = (|u_s|^2 - |u_t|^2 - 2i <u_s, u_t>) / 4.
ResidualReport hopf_differential(const SurfaceGrid& g, const FdOptions& o = {});

// max(|Im<u, u_s>|, |Im<u, u_t>|), the contact form on the two tangent vectors.
ResidualReport legendrian_residual(const SurfaceGrid& g, const FdOptions& o = {});

struct CalibrationReport {
  ResidualReport im_part;      // |Im(e^{i theta} det(u, u_s, u_t))|
  ResidualReport volume_part;  // | |Re(e^{i theta} det)| / sqrt(Gram) - 1 |
  int orientation = 0;         // sign of Re(e^{i theta} det)
};

CalibrationReport calibration_defect(const SurfaceGrid& g, double theta, const FdOptions& o = {});

// Runs a check with stencils 2 and 1 on the same interior nodes and estimates the order.
// Residuals below roundoff_floor at both steps are reported as at_roundoff.
ResidualReport measure_order(const std::function<ResidualReport(const FdOptions&)>& check,
                             Exec exec = Exec::parallel, double roundoff_floor = 1e-11);

// |K_fd - K| along t with K_fd = -(ln y)'' / (2y), using the y stored in the samples.
ResidualReport curvature_fd_check(const SurfaceGrid& g, const FdOptions& o = {});

struct FlowCrossCheck {
  ResidualReport distance;       // sup |z_closed - z_flow|
  double y_spread_closed = 0.0;  // max y - min y along the closed form
  double y_spread_flow = 0.0;    // max y - min y along the flow
};

// Integrates the Neumann system from the closed-form state at t = 0 in both
// directions over [t0, t1] and compares with the closed form at n_samples times.
FlowCrossCheck neumann_vs_closed_form(const ConeParameters& p, double t0, double t1,
                                      int n_samples = 200, double tol = 1e-10);

}  // namespace slcone
