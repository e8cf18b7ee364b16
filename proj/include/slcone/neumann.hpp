#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "slcone/cvec.hpp"

namespace slcone {

// Generator A = i diag(lambda) of the circle action and mu = (1,1,1) x lambda.
// from_alpha gives the traceless family lambda = (1, alpha, -1 - alpha);
// from_lambda admits any diagonal generator (used to exhibit what goes wrong
// when A is not in su(3)).
struct SymmetryAxis {
  double alpha = 0.0;  // NaN when built from an arbitrary lambda
  R3 lambda{1.0, 0.0, -1.0};
  R3 mu{-1.0, 2.0, -1.0};

  static SymmetryAxis from_alpha(double alpha);
  static SymmetryAxis from_lambda(const R3& lambda);

  double trace() const { return lambda[0] + lambda[1] + lambda[2]; }
  double mu_product() const { return mu[0] * mu[1] * mu[2]; }
  double lambda_sq_sum() const { return dot(lambda, lambda); }
};

// Point z on S^5 in C^3 with velocity zdot at time t.
struct NeumannState {
  double t = 0.0;
  C3 z{};
  C3 zdot{};
};

struct ConservedSet {
  double H = 0.0;  // |zdot|^2 - |Az|^2
  R3 J{};          // angular momentum in each complex line
  double c = 0.0;  // omega(z, Az) = sum lambda_j |z_j|^2
};

// |Az|^2 = sum lambda_j^2 |z_j|^2.
double az_norm2(const C3& z, const SymmetryAxis& axis);

// zddot = -A^2 z - (|zdot|^2 + |Az|^2) z.
C3 neumann_rhs(const NeumannState& s, const SymmetryAxis& axis);

ConservedSet conserved(const NeumannState& s, const SymmetryAxis& axis);

// (H, sum lambda_j J_j, sum lambda_j R_j^2, sum J_j, |z|^2 - 1); all vanish on
// initial data of a minimal Legendrian immersion u = e^{As} z(t).
std::array<double, 5> constraint_residuals(const NeumannState& s, const SymmetryAxis& axis);

struct IntegrateOptions {
  double tol = 1e-10;
  long max_steps = 10'000'000;
  double initial_step = 1e-3;
  // When non-empty, the integrator lands exactly on these times (which must be
  // ordered in the direction of integration) and records only them.
  std::vector<double> output_times;
  bool project = true;
};

struct IntegrationStats {
  long accepted = 0;
  long rejected = 0;
  double min_step = 0.0;
  double max_step = 0.0;
  // Largest constraint violation seen before each re-projection.
  double max_sphere_drift = 0.0;     // | |z|^2 - 1 |
  double max_tangency_drift = 0.0;   // | Re<z, zdot> |
};

struct Trajectory {
  std::vector<NeumannState> states;
  IntegrationStats stats;
};

// Adaptive Dormand-Prince 5(4) integration of the Neumann system from s0.t to
// t_end (either direction). After every accepted step (z, zdot) is projected
// back onto {|z| = 1, Re<z, zdot> = 0}; the drift it removes is recorded.
Trajectory integrate(const NeumannState& s0, const SymmetryAxis& axis, double t_end,
                     const IntegrateOptions& opts = {});

// Columns t, x1..y3, xd1..yd3, H, J1..J3, c with a header row.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const SymmetryAxis& axis);

}  // namespace slcone
