#pragma once

#include <vector>

#include "slcone/exec.hpp"
#include "slcone/grid.hpp"
#include "slcone/verify.hpp"

namespace slcone {

// One point f = rho e^{i phi} of a profile curve. Samples are kept in polar form
// so that Im(f^n) = rho^n sin(n phi) is reproduced to rounding.
struct ProfileSample {
  double rho = 0.0;
  double phi = 0.0;
  cplx f() const { return std::polar(rho, phi); }
};

// A smooth piece of the profile sampled uniformly in a parameter p with step dp.
struct ProfilePiece {
  std::vector<ProfileSample> samples;
  double dp = 0.0;
};

struct ACProfile {
  int n = 3;
  double d = 0.0;           // as requested by the caller
  bool conjugated = false;  // d < 0 was handled as conj of the |d| curve
  double rho_max = 50.0;
  std::vector<ProfilePiece> pieces;  // one arc for d != 0, two rays for d = 0
};

// rho(phi) = (d / sin(n phi))^{1/n} on 0 < phi < pi/n.
double profile_radius(int n, double d, double phi);

// d != 0: phi = phi_min + (pi/n - 2 phi_min)(1 - cos(pi p))/2 for p in [0, 1], so
// samples cluster near both ends, with phi_min chosen so that |f| <= rho_max.
// d = 0: the two rays arg f = 0 and arg f = pi/n with |f| in [rho_max/m, rho_max].
ACProfile profile_curve(int n, double d, int m, double rho_max = 50.0);

// Product f(p) phi(x) of a profile and a link. The link is multiplied by
// e^{i theta / n} so that the calibration check is always against Re dz.
struct ACGrid {
  ACProfile profile;
  SurfaceGrid link;
  double theta = 0.0;
  std::vector<std::vector<C3>> pieces;  // [piece][(a * ns + i) * nt + j]

  std::size_t index(std::size_t a, int i, int j) const {
    return (a * link.ns + i) * link.nt + j;
  }
};

// Throws InputError when the link's Legendrian residual exceeds link_tol.
ACGrid build_ac_surface(const ACProfile& profile, const SurfaceGrid& link, double theta = 0.0,
                        double link_tol = 0.1);

struct ACResiduals {
  // max |omega(Phi_a, Phi_b)| / (|Phi_a| |Phi_b|) over the three tangent pairs.
  ResidualReport lagrangian;
  // |Im det(Phi_p, Phi_s, Phi_t)| / (|Phi_p| |Phi_s| |Phi_t|).
  ResidualReport special;
};

ACResiduals ac_residuals(const ACGrid& g, int stencil = 1, int margin = 0,
                         Exec exec = Exec::parallel);

// max over profile samples of |rho^n sin(n phi) - d_eff| with d_eff = |d|.
double profile_invariant_defect(const ACProfile& p);

struct EndRow {
  double abs_f = 0.0;
  double arg_f = 0.0;
  double dist_cone = 0.0;          // sup over the slice of the distance to C(Sigma)
  double dist_rotated_cone = 0.0;  // same for C(e^{i pi/n} Sigma)
};

struct EndDecay {
  std::vector<EndRow> end0;  // arg f near 0, sorted by |f|
  std::vector<EndRow> end1;  // arg f near pi/n, sorted by |f|

  static bool decreasing(const std::vector<EndRow>& rows, bool rotated);
};

// Distance tables for the samples with |f| >= min_abs_f. link_stride subsamples
// the slice points; the cone is always resolved with every link sample.
EndDecay asymptotic_ends(const ACGrid& g, double min_abs_f = 2.0, int link_stride = 2);

// sup over samples with |f| <= max_abs_f of the distance to C(Sigma) u C(e^{i pi/n} Sigma).
double cone_union_distance(const ACGrid& g, double max_abs_f, int link_stride = 2);

// Links used by the CLI and tests.
SurfaceGrid real_sphere_link(int ns, int nt);       // {x in R^3 : |x| = 1}
SurfaceGrid clifford_link(int ns, int nt);          // flat torus |z_j|^2 = 1/3
SurfaceGrid immersion_link(const ConeParameters& p, int ns, int nt);  // one period window

struct HarveyLawsonDefect {
  double parallel = 0.0;  // |Re z ^ Im z| (zero when Re z and Im z are parallel)
  double cubic = 0.0;     // |Im((|Re z| + i |Im z|)^3) - d| / max(1, |z|^3)
};

HarveyLawsonDefect harvey_lawson_defect(const ACGrid& g);

}  // namespace slcone
