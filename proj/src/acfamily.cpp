#include "slcone/acfamily.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "slcone/errors.hpp"

namespace slcone {

namespace {

// sin(n phi) = (-1)^k sin(n (phi - k pi/n)), with pi/n rounded as in profile_curve,
// so that the ray arg f = pi/n gives exactly zero.
double sin_n(int n, double phi) {
  const double k = std::round(n * phi / std::numbers::pi);
  const double s = std::sin(n * (phi - k * (std::numbers::pi / n)));
  return std::fmod(k, 2.0) == 0.0 ? s : -s;
}

}  // namespace

double profile_radius(int n, double d, double phi) {
  return std::pow(d / sin_n(n, phi), 1.0 / n);
}

ACProfile profile_curve(int n, double d, int m, double rho_max) {
  if (n < 2) throw InputError("profile_curve needs n >= 2");
  if (m < 2) throw InputError("profile_curve needs at least 2 samples");
  if (!std::isfinite(d)) throw InputError("d must be finite");
  ACProfile prof;
  prof.n = n;
  prof.d = d;
  prof.rho_max = rho_max;
  const double sector = std::numbers::pi / n;
  if (d == 0.0) {
    for (double phi : {0.0, sector}) {
      ProfilePiece ray;
      const double lo = rho_max / m;
      ray.dp = (rho_max - lo) / (m - 1);
      for (int a = 0; a < m; ++a) ray.samples.push_back({lo + a * ray.dp, phi});
      prof.pieces.push_back(std::move(ray));
    }
    return prof;
  }
  prof.conjugated = d < 0;
  const double dd = std::abs(d);
  const double reach = dd / std::pow(rho_max, n);
  if (!(reach < 1.0)) {
    std::ostringstream os;
    os << "|d| = " << dd << " leaves no room below |f| = " << rho_max;
    throw InputError(os.str());
  }
  const double phi_min = std::asin(reach) / n;
  ProfilePiece arc;
  arc.dp = 1.0 / (m - 1);
  for (int a = 0; a < m; ++a) {
    const double p = a * arc.dp;
    double phi = phi_min + (sector - 2.0 * phi_min) * 0.5 * (1.0 - std::cos(std::numbers::pi * p));
    if (a == m - 1) phi = sector - phi_min;
    const double rho = profile_radius(n, dd, phi);
    arc.samples.push_back({rho, prof.conjugated ? -phi : phi});
  }
  prof.pieces.push_back(std::move(arc));
  return prof;
}

double profile_invariant_defect(const ACProfile& p) {
  const double target = std::abs(p.d);
  double worst = 0.0;
  for (const ProfilePiece& piece : p.pieces)
    for (const ProfileSample& s : piece.samples) {
      const double v = std::pow(s.rho, p.n) * sin_n(p.n, std::abs(s.phi));
      worst = std::max(worst, std::abs(v - target));
    }
  return worst;
}

ACGrid build_ac_surface(const ACProfile& profile, const SurfaceGrid& link, double theta,
                        double link_tol) {
  const ResidualReport leg = legendrian_residual(link);
  if (leg.max_abs > link_tol) {
    std::ostringstream os;
    os << "link is not Legendrian at this resolution: residual " << leg.max_abs << " > "
       << link_tol;
    throw InputError(os.str());
  }
  ACGrid g;
  g.profile = profile;
  g.link = link;
  g.theta = theta;
  const cplx rot = std::polar(1.0, theta / profile.n);
  for (ImmersionSample& s : g.link.samples) s.u = rot * s.u;

  const std::size_t per = static_cast<std::size_t>(link.ns) * link.nt;
  for (const ProfilePiece& piece : profile.pieces) {
    std::vector<C3> pts(piece.samples.size() * per);
    for (std::size_t a = 0; a < piece.samples.size(); ++a) {
      const cplx f = piece.samples[a].f();
      for (std::size_t k = 0; k < per; ++k) pts[a * per + k] = f * g.link.samples[k].u;
    }
    g.pieces.push_back(std::move(pts));
  }
  return g;
}

ACResiduals ac_residuals(const ACGrid& g, int stencil, int margin, Exec exec) {
  const int k = stencil;
  const int mg = std::max(margin, k);
  const SurfaceGrid& L = g.link;
  if (L.ns <= 2 * mg || L.nt <= 2 * mg) throw InputError("link grid too coarse for the stencil");
  const double hs = k * L.hs();
  const double ht = k * L.ht();
  double lag = 0.0;
  double spec = 0.0;
  double hp = 0.0;
  for (std::size_t piece = 0; piece < g.pieces.size(); ++piece) {
    const ProfilePiece& prof = g.profile.pieces[piece];
    const auto& P = g.pieces[piece];
    const int m = static_cast<int>(prof.samples.size());
    if (m <= 2 * mg) throw InputError("profile too coarse for the stencil");
    const double dp = k * prof.dp;
    hp = std::max(hp, dp);
    const bool par = exec == Exec::parallel;
#pragma omp parallel for reduction(max : lag, spec) schedule(static) if (par)
    for (int a = mg; a < m - mg; ++a) {
      for (int i = mg; i < L.ns - mg; ++i) {
        for (int j = mg; j < L.nt - mg; ++j) {
          const C3 Pp = (0.5 / dp) * (P[g.index(a + k, i, j)] - P[g.index(a - k, i, j)]);
          const C3 Ps = (0.5 / hs) * (P[g.index(a, i + k, j)] - P[g.index(a, i - k, j)]);
          const C3 Pt = (0.5 / ht) * (P[g.index(a, i, j + k)] - P[g.index(a, i, j - k)]);
          const double np = norm(Pp), ns = norm(Ps), nt = norm(Pt);
          lag = std::max({lag, std::abs(omega(Pp, Ps)) / (np * ns),
                          std::abs(omega(Pp, Pt)) / (np * nt),
                          std::abs(omega(Ps, Pt)) / (ns * nt)});
          spec = std::max(spec, std::abs(det3(Pp, Ps, Pt).imag()) / (np * ns * nt));
        }
      }
    }
  }
  ACResiduals r;
  for (ResidualReport* rep : {&r.lagrangian, &r.special}) {
    rep->ns = L.ns;
    rep->nt = L.nt;
    rep->h = std::max({hp, hs, ht});
  }
  r.lagrangian.name = "ac_lagrangian";
  r.lagrangian.max_abs = lag;
  r.special.name = "ac_special";
  r.special.max_abs = spec;
  return r;
}

namespace {

double ray_distance(const C3& P, const C3& dir) {
  const double c = rdot(dir, P) / norm2(dir);
  return c > 0 ? norm(P - c * dir) : norm(P);
}

// sup over slice points f phi(x) of the distance to the cone over rot * link.
double slice_distance(const ACGrid& g, cplx f, cplx rot, int stride) {
  const SurfaceGrid& L = g.link;
  double sup = 0.0;
  for (int i = 0; i < L.ns; i += stride) {
    for (int j = 0; j < L.nt; j += stride) {
      const C3 P = f * L.at(i, j).u;
      // The ray through the same link point bounds the minimum; skip the scan when
      // that bound cannot raise the supremum.
      double best = ray_distance(P, rot * L.at(i, j).u);
      if (best <= sup) continue;
      for (const ImmersionSample& x : L.samples) best = std::min(best, ray_distance(P, rot * x.u));
      sup = std::max(sup, best);
    }
  }
  return sup;
}

}  // namespace

bool EndDecay::decreasing(const std::vector<EndRow>& rows, bool rotated) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double a = rotated ? rows[i - 1].dist_rotated_cone : rows[i - 1].dist_cone;
    const double b = rotated ? rows[i].dist_rotated_cone : rows[i].dist_cone;
    if (!(b < a)) return false;
  }
  return true;
}

EndDecay asymptotic_ends(const ACGrid& g, double min_abs_f, int link_stride) {
  if (g.profile.d == 0.0) throw InputError("asymptotic_ends needs d != 0");
  const int n = g.profile.n;
  const double half = std::numbers::pi / (2.0 * n);
  const cplx rot = std::polar(1.0, (g.profile.conjugated ? -1.0 : 1.0) * std::numbers::pi / n);
  std::vector<ProfileSample> far;
  for (const ProfileSample& s : g.profile.pieces.front().samples)
    if (s.rho >= min_abs_f) far.push_back(s);
  if (far.size() < 4) throw InputError("too few far-field samples for an end-decay table");

  std::vector<EndRow> rows(far.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t a = 0; a < far.size(); ++a) {
    const cplx f = far[a].f();
    rows[a] = {far[a].rho, far[a].phi, slice_distance(g, f, 1.0, link_stride),
               slice_distance(g, f, rot, link_stride)};
  }
  EndDecay out;
  for (const EndRow& r : rows) (std::abs(r.arg_f) < half ? out.end0 : out.end1).push_back(r);
  auto by_abs = [](const EndRow& x, const EndRow& y) { return x.abs_f < y.abs_f; };
  std::sort(out.end0.begin(), out.end0.end(), by_abs);
  std::sort(out.end1.begin(), out.end1.end(), by_abs);
  return out;
}

double cone_union_distance(const ACGrid& g, double max_abs_f, int link_stride) {
  const int n = g.profile.n;
  const cplx rot = std::polar(1.0, (g.profile.conjugated ? -1.0 : 1.0) * std::numbers::pi / n);
  std::vector<ProfileSample> near;
  for (const ProfilePiece& piece : g.profile.pieces)
    for (const ProfileSample& s : piece.samples)
      if (s.rho <= max_abs_f) near.push_back(s);
  double sup = 0.0;
#pragma omp parallel for reduction(max : sup) schedule(dynamic, 1)
  for (std::size_t a = 0; a < near.size(); ++a) {
    const cplx f = near[a].f();
    const SurfaceGrid& L = g.link;
    for (int i = 0; i < L.ns; i += link_stride) {
      for (int j = 0; j < L.nt; j += link_stride) {
        const C3 P = f * L.at(i, j).u;
        double best = std::min(ray_distance(P, L.at(i, j).u), ray_distance(P, rot * L.at(i, j).u));
        if (best <= sup) continue;
        for (const ImmersionSample& x : L.samples)
          best = std::min({best, ray_distance(P, x.u), ray_distance(P, rot * x.u)});
        sup = std::max(sup, best);
      }
    }
  }
  return sup;
}

SurfaceGrid real_sphere_link(int ns, int nt) {
  const double eps = 1e-3;
  return make_grid_from(
      [](double s, double t) {
        return C3{std::cos(s) * std::cos(t), std::sin(s) * std::cos(t), std::sin(t)};
      },
      {0.0, 2.0 * std::numbers::pi}, {-std::numbers::pi / 2 + eps, std::numbers::pi / 2 - eps},
      ns, nt);
}

SurfaceGrid clifford_link(int ns, int nt) {
  return immersion_link(ConeParameters::make(1.0, kJMax), ns, nt);
}

SurfaceGrid immersion_link(const ConeParameters& p, int ns, int nt) {
  const ConeImmersion im(p);
  double T = im.basic_period();
  if (!std::isfinite(T)) T = 8.0;
  return make_grid(im, {0.0, 2.0 * std::numbers::pi}, {0.0, T}, ns, nt);
}

HarveyLawsonDefect harvey_lawson_defect(const ACGrid& g) {
  HarveyLawsonDefect out;
  const double d = std::abs(g.profile.d);
  for (const auto& piece : g.pieces) {
    for (const C3& z : piece) {
      const R3 re{z[0].real(), z[1].real(), z[2].real()};
      const R3 im{z[0].imag(), z[1].imag(), z[2].imag()};
      const double a = std::sqrt(dot(re, re));
      const double b = std::sqrt(dot(im, im));
      const R3 c = cross(re, im);
      const double scale = a * a + b * b;
      if (scale > 0) out.parallel = std::max(out.parallel, std::sqrt(dot(c, c)) / scale);
      const double v = 3.0 * a * a * b - b * b * b;
      out.cubic = std::max(out.cubic, std::abs(v - d) / std::max(1.0, std::pow(scale, 1.5)));
    }
  }
  return out;
}

}  // namespace slcone
