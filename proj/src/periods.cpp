#include "slcone/periods.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include <boost/math/tools/toms748_solve.hpp>

#include "slcone/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace slcone {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double reduce_mod(double x, double w) {
  double r = std::fmod(x, w);
  if (r < 0) r += w;
  if (std::abs(r - w) <= 1e-12 * w) r = 0.0;
  if (std::abs(r) <= 1e-12 * w) r = 0.0;
  return r;
}

int theta_sum_multiple(const R3& h) {
  const double ratio = (h[0] + h[1] + h[2]) / std::numbers::pi;
  return static_cast<int>(std::lround(ratio));
}

}  // namespace

const char* to_string(ClosureKind k) {
  switch (k) {
    case ClosureKind::none: return "none";
    case ClosureKind::one_period: return "one period";
    case ClosureKind::two_periods: return "two independent periods";
  }
  return "unknown";
}

PeriodLattice lattice_from_holonomy(Rational alpha, Rational beta, const R3& holonomy,
                                    double T) {
  if (alpha.den <= 0 || beta.den <= 0) throw DomainError("denominators must be positive");
  PeriodLattice L;
  L.basic_period_T = T;
  L.holonomy = holonomy;
  L.theta_sum_multiple = theta_sum_multiple(holonomy);

  const std::int64_t p = alpha.num;
  const std::int64_t q = alpha.den;
  const std::int64_t M = beta.num;
  const std::int64_t N = beta.den;
  const std::int64_t base = N / std::gcd(N, q);
  const std::int64_t m0 = (L.theta_sum_multiple % 2 != 0) ? std::lcm(base, std::int64_t{2}) : base;
  // m0 M q / N is an integer because base divides m0.
  const std::int64_t c = (m0 / base) * (q / std::gcd(N, q)) * M;
  std::int64_t a = 0;
  if (q > 1) a = ((c % q) * mod_inverse(((p % q) + q) % q, q) % q + q) % q;

  const double width = kTwoPi * static_cast<double>(q);
  const double sigma = reduce_mod(-static_cast<double>(m0) * holonomy[0] + kTwoPi * a, width);
  L.basis = {{width, 0.0}, {sigma, static_cast<double>(m0) * T}};
  L.rectangular = sigma == 0.0;
  L.tau_multiple = static_cast<int>(m0);
  return L;
}

ClosureResult closure_test(const ConeImmersion& im, double tol,
                           std::optional<Rational> exact_alpha) {
  ClosureResult out;
  const double T = im.basic_period();
  const R3 h = im.holonomy();
  out.lattice.basic_period_T = T;
  out.lattice.holonomy = h;
  if (!std::isfinite(T)) {
    out.status = "basic period is infinite; no closure";
    return out;
  }
  out.lattice.theta_sum_multiple = theta_sum_multiple(h);
  const double sum_defect =
      std::abs(h[0] + h[1] + h[2] - out.lattice.theta_sum_multiple * std::numbers::pi);
  if (sum_defect > 1e-8) {
    std::ostringstream os;
    os << "phase sum over one period is " << sum_defect << " away from a multiple of pi";
    throw ConsistencyError(os.str());
  }

  const double alpha = im.params().alpha();
  out.alpha = exact_alpha ? exact_alpha : detect_rational(alpha, tol);
  const double beta_value = (alpha * h[0] - h[1]) / kTwoPi;
  out.beta = detect_rational(beta_value, tol);

  if (out.alpha && out.beta) {
    out.kind = ClosureKind::two_periods;
    out.lattice = lattice_from_holonomy(*out.alpha, *out.beta, h, T);
    const double N = static_cast<double>(out.beta->den);
    out.recipe_period = PeriodVector{-2.0 * N * h[0] / im.params().axis.lambda[0], 2.0 * N * T};
    out.status = "two independent periods";
    return out;
  }
  if (out.alpha) {
    out.kind = ClosureKind::one_period;
    out.lattice.basis = {{kTwoPi * static_cast<double>(out.alpha->den), 0.0}};
    out.status = "one period (s-direction only); no rational closure detected at this tolerance";
    return out;
  }
  // alpha not detected as rational: look for a single period (sigma, m T) with
  // sigma = -m theta_1(T) + 2 pi a and alpha a - m beta an integer.
  for (int m = 1; m <= 200; ++m) {
    if ((m * out.lattice.theta_sum_multiple) % 2 != 0) continue;
    for (int a = 0; a <= 2 * m; ++a) {
      for (int sgn : {1, -1}) {
        const double v = alpha * sgn * a - m * beta_value;
        if (std::abs(v - std::round(v)) <= tol * (1.0 + m + a)) {
          out.kind = ClosureKind::one_period;
          out.lattice.basis = {{-m * h[0] + kTwoPi * sgn * a, m * T}};
          out.lattice.tau_multiple = m;
          out.status = "one period; no rational closure detected at this tolerance";
          return out;
        }
      }
    }
  }
  out.status = "no rational closure detected at this tolerance";
  return out;
}

TorusSpec torus_lattice(int m, int n) {
  if (m < 1 || n < 1 || m > n) throw DomainError("torus_lattice needs 1 <= m <= n");
  if (std::gcd(m, n) != 1) {
    std::ostringstream os;
    os << "torus_lattice: gcd(" << m << ", " << n << ") != 1";
    throw DomainError(os.str());
  }
  if (m == n && n != 1) throw DomainError("torus_lattice: m = n requires m = n = 1");
  TorusSpec spec;
  spec.m = m;
  spec.n = n;
  spec.mn_even = (static_cast<long>(m) * n) % 2 == 0;
  spec.degenerate = m == n;
  const ConeImmersion im(ConeParameters::make(static_cast<double>(m) / n, 0.0));
  spec.elliptic = im.elliptic();
  spec.lattice = lattice_from_holonomy(make_rational(m, n), make_rational(m - n, 2 * n),
                                       im.holonomy(), im.basic_period());
  return spec;
}

double period_defect(const ConeImmersion& im, PeriodVector w, int ns, int nt) {
  double T = im.basic_period();
  if (!std::isfinite(T)) T = 8.0;
  const R3& lam = im.params().axis.lambda;
  std::vector<C3> z0(nt), z1(nt);
  for (int j = 0; j < nt; ++j) {
    const double t = T * j / nt;
    z0[j] = im.state(t).z;
    z1[j] = im.state(t + w.tau).z;
  }
  double worst = 0.0;
  for (int i = 0; i < ns; ++i) {
    const double s = kTwoPi * i / ns;
    for (int j = 0; j < nt; ++j) {
      C3 d;
      for (int k = 0; k < 3; ++k)
        d[k] = std::polar(1.0, lam[k] * (s + w.sigma)) * z1[j][k] - std::polar(1.0, lam[k] * s) * z0[j][k];
      worst = std::max(worst, norm(d));
    }
  }
  return worst;
}

MinimalityReport check_minimality(const PeriodLattice& lattice, const SymmetryAxis& axis,
                                  double tol) {
  MinimalityReport rep;
  if (lattice.basis.empty()) return rep;
  const auto q = std::lround(lattice.basis[0].sigma / kTwoPi);
  const int m0 = lattice.basis.size() > 1 ? std::max(lattice.tau_multiple, 1) : 1;
  const double width = kTwoPi * static_cast<double>(q);
  rep.min_defect = std::numeric_limits<double>::infinity();
  for (int m = 0; m < m0; ++m) {
    for (long k = 0; k < q; ++k) {
      if (m == 0 && k == 0) continue;
      const double sigma = reduce_mod(-m * lattice.holonomy[0] + kTwoPi * k, width);
      double defect = 0.0;
      for (int j = 0; j < 3; ++j)
        defect = std::max(defect, std::abs(std::polar(1.0, axis.lambda[j] * sigma +
                                                               m * lattice.holonomy[j]) - 1.0));
      rep.min_defect = std::min(rep.min_defect, defect);
      ++rep.candidates;
    }
  }
  rep.minimal = rep.candidates == 0 || rep.min_defect > tol;
  return rep;
}

std::size_t EmbeddednessReport::flagged_points() const {
  std::vector<std::size_t> ids;
  ids.reserve(2 * pairs.size());
  for (const auto& p : pairs) {
    ids.push_back(p.a);
    ids.push_back(p.b);
  }
  std::sort(ids.begin(), ids.end());
  return static_cast<std::size_t>(std::unique(ids.begin(), ids.end()) - ids.begin());
}

double min_neighbor_distance(const SurfaceGrid& g) {
  double best = std::numeric_limits<double>::infinity();
#pragma omp parallel for reduction(min : best) schedule(static)
  for (int i = 0; i < g.ns; ++i) {
    for (int j = 0; j < g.nt; ++j) {
      const C3& u = g.at(i, j).u;
      if (i + 1 < g.ns) best = std::min(best, norm(g.at(i + 1, j).u - u));
      if (j + 1 < g.nt) best = std::min(best, norm(g.at(i, j + 1).u - u));
    }
  }
  return best;
}

namespace {

struct CellKey {
  std::int64_t x, y, z;
  bool operator==(const CellKey&) const = default;
};

struct CellHash {
  std::size_t operator()(const CellKey& k) const {
    std::uint64_t h = static_cast<std::uint64_t>(k.x) * 0x9E3779B97F4A7C15ULL;
    h ^= static_cast<std::uint64_t>(k.y) * 0xC2B2AE3D27D4EB4FULL + (h << 6) + (h >> 2);
    h ^= static_cast<std::uint64_t>(k.z) * 0x165667B19E3779F9ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

CellKey cell_of(const C3& u, double eps) {
  return {static_cast<std::int64_t>(std::floor(u[0].real() / eps)),
          static_cast<std::int64_t>(std::floor(u[0].imag() / eps)),
          static_cast<std::int64_t>(std::floor(u[1].real() / eps))};
}

// Distance from (ds, dt) to the nearest lattice vector.
double quotient_distance(double ds, double dt, const PeriodVector& w1, const PeriodVector& w2) {
  const double j0 = std::round(dt / w2.tau);
  ds -= j0 * w2.sigma;
  dt -= j0 * w2.tau;
  const double i0 = std::round(ds / w1.sigma);
  ds -= i0 * w1.sigma;
  double best = std::numeric_limits<double>::infinity();
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b)
      best = std::min(best, std::hypot(ds + a * w1.sigma + b * w2.sigma, dt + b * w2.tau));
  return best;
}

using CellMap = std::unordered_map<CellKey, std::vector<std::size_t>, CellHash>;

void scan_point(std::size_t a, const SurfaceGrid& g, const CellMap& cells, double eps,
                double threshold, const PeriodVector& w1, const PeriodVector& w2,
                std::vector<ProximityPair>& out) {
  const ImmersionSample& pa = g.samples[a];
  const CellKey c = cell_of(pa.u, eps);
  for (int dx = -1; dx <= 1; ++dx)
    for (int dy = -1; dy <= 1; ++dy)
      for (int dz = -1; dz <= 1; ++dz) {
        const auto it = cells.find({c.x + dx, c.y + dy, c.z + dz});
        if (it == cells.end()) continue;
        for (std::size_t b : it->second) {
          if (b <= a) continue;
          const ImmersionSample& pb = g.samples[b];
          const double amb = norm(pb.u - pa.u);
          if (amb >= eps) continue;
          const double par = quotient_distance(pb.s - pa.s, pb.t - pa.t, w1, w2);
          if (par > threshold) out.push_back({a, b, amb, par});
        }
      }
}

}  // namespace

EmbeddednessReport embeddedness_scan(const TorusSpec& spec, const SurfaceGrid& grid, double eps,
                                     Exec exec, double param_threshold) {
  const PeriodLattice& L = spec.lattice;
  if (L.basis.size() != 2) throw DomainError("embeddedness_scan needs a rank-two lattice");
  if (!grid.periodic) throw DomainError("embeddedness_scan needs a periodic grid");
  const PeriodVector w1 = L.basis[0];
  const PeriodVector w2 = L.basis[1];
  const double width = w1.sigma;
  const double height = w2.tau;
  if (std::abs(grid.s_range.length() - width) > 1e-9 * width ||
      std::abs(grid.t_range.length() - height) > 1e-9 * height) {
    std::ostringstream os;
    os << "grid [" << grid.s_range.length() << " x " << grid.t_range.length()
       << "] does not match the fundamental domain [" << width << " x " << height << "]";
    throw DomainError(os.str());
  }

  EmbeddednessReport rep;
  rep.points = grid.samples.size();
  rep.eps = eps > 0 ? eps : 0.5 * min_neighbor_distance(grid);
  rep.param_threshold = param_threshold > 0 ? param_threshold : 2.0 * std::max(grid.hs(), grid.ht());

  CellMap cells;
  for (std::size_t a = 0; a < grid.samples.size(); ++a)
    cells[cell_of(grid.samples[a].u, rep.eps)].push_back(a);

  const std::size_t n = grid.samples.size();
  if (exec == Exec::serial) {
    for (std::size_t a = 0; a < n; ++a)
      scan_point(a, grid, cells, rep.eps, rep.param_threshold, w1, w2, rep.pairs);
  } else {
#pragma omp parallel
    {
      std::vector<ProximityPair> local;
#pragma omp for schedule(static) nowait
      for (std::int64_t a = 0; a < static_cast<std::int64_t>(n); ++a)
        scan_point(static_cast<std::size_t>(a), grid, cells, rep.eps, rep.param_threshold, w1,
                   w2, local);
#pragma omp critical
      rep.pairs.insert(rep.pairs.end(), local.begin(), local.end());
    }
    std::sort(rep.pairs.begin(), rep.pairs.end(), [](const auto& x, const auto& y) {
      return x.a != y.a ? x.a < y.a : x.b < y.b;
    });
  }
  return rep;
}

double theta2_of_J(double J) {
  if (!(J > 0.0 && J < kJMax)) {
    std::ostringstream os;
    os << "theta2_of_J needs 0 < J < 1/(3 sqrt 3), got " << J;
    throw DomainError(os.str());
  }
  return ConeImmersion(ConeParameters::make(0.0, J)).holonomy()[1];
}

std::vector<double> theta2_sweep(const std::vector<double>& J, Exec exec) {
  std::vector<double> out(J.size());
  const bool par = exec == Exec::parallel;
#pragma omp parallel for schedule(dynamic, 1) if (par)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(J.size()); ++i)
    out[i] = theta2_of_J(J[i]);
  return out;
}

namespace {
constexpr double kSearchJLo = 1e-6;
const double kSearchJHi = kJMax * (1.0 - 1e-12);
}  // namespace

std::pair<double, double> theta2_range(double J_lo, double J_hi) {
  return {theta2_of_J(J_lo) / kTwoPi, theta2_of_J(J_hi) / kTwoPi};
}

SearchResult search_closing_J(Rational target, double tol) {
  const double goal = target.value();
  double lo = kSearchJLo;
  double hi = kSearchJHi;
  const auto [vlo, vhi] = theta2_range(lo, hi);
  if (!(goal > vlo && goal < vhi)) {
    std::ostringstream os;
    os.precision(12);
    os << "target " << target.str() << " outside the attainable range (" << vlo << ", " << vhi
       << ") of theta_2(T)/2pi at alpha = 0";
    throw DomainError(os.str());
  }
  SearchResult res;
  for (res.iterations = 1; res.iterations <= 200; ++res.iterations) {
    const double mid = 0.5 * (lo + hi);
    const double v = theta2_of_J(mid) / kTwoPi;
    res.J = mid;
    res.value = v;
    res.residual = std::abs(v - goal);
    if (res.residual <= tol || hi - lo <= 4 * std::numeric_limits<double>::epsilon() * hi) break;
    (v < goal ? lo : hi) = mid;
  }
  return res;
}

double basic_period_from_flow(const ConeParameters& p, double tol) {
  const ConeImmersion im(p);
  const GammaSolution& g = im.gamma_solution();
  if (g.flat() || g.degeneracy == Degeneracy::sphere)
    throw DomainError(std::string("gamma has no finite oscillation period in case ") +
                      to_string(g.degeneracy));
  const SymmetryAxis& axis = p.axis;
  auto gdot = [&](const NeumannState& s) {
    return 2.0 * (std::conj(s.z[1]) * s.zdot[1]).real() / axis.mu[1];
  };
  IntegrateOptions opts;
  opts.tol = tol;
  const double dt = 0.01;
  NeumannState cur = im.state(0.0);
  int sign_changes = 0;
  double prev = 0.0;
  for (long step = 1; step < 1'000'000; ++step) {
    const double t_next = step * dt;
    NeumannState next = integrate(cur, axis, t_next, opts).states.back();
    const double v = gdot(next);
    if (step > 1 && ((prev > 0) != (v > 0))) {
      if (++sign_changes == 2) {
        const NeumannState base = cur;
        auto f = [&](double t) {
          return t == base.t ? prev : gdot(integrate(base, axis, t, opts).states.back());
        };
        boost::uintmax_t iters = 100;
        const auto r = boost::math::tools::toms748_solve(
            f, base.t, t_next, prev, v, boost::math::tools::eps_tolerance<double>(50), iters);
        return 0.5 * (r.first + r.second);
      }
    }
    prev = v;
    cur = next;
  }
  throw DivergenceError("no period of gamma found along the flow");
}

}  // namespace slcone
