#include "slcone/grid.hpp"

#include <sstream>

#include "slcone/errors.hpp"

namespace slcone {
namespace {

SurfaceGrid empty_grid(Interval s, Interval t, int ns, int nt, bool periodic) {
  if (ns < 2 || nt < 2) {
    std::ostringstream os;
    os << "grid must have at least 2 samples per direction, got " << ns << "x" << nt;
    throw InputError(os.str());
  }
  if (!(s.hi > s.lo) || !(t.hi > t.lo)) throw InputError("grid ranges must be nonempty");
  SurfaceGrid g;
  g.s_range = s;
  g.t_range = t;
  g.ns = ns;
  g.nt = nt;
  g.periodic = periodic;
  g.samples.resize(static_cast<std::size_t>(ns) * nt);
  return g;
}

}  // namespace

SurfaceGrid make_grid(const ConeImmersion& im, Interval s, Interval t, int ns, int nt,
                      bool periodic, Exec exec) {
  SurfaceGrid g = empty_grid(s, t, ns, nt, periodic);
  g.params = im.params();
  const R3& lam = im.params().axis.lambda;

  std::vector<ImmersionSample> rows(nt);
  const bool par = exec == Exec::parallel;
#pragma omp parallel for schedule(dynamic, 4) if (par)
  for (int j = 0; j < nt; ++j) rows[j] = im.sample(0.0, g.t(j));

#pragma omp parallel for schedule(static) if (par)
  for (int i = 0; i < ns; ++i) {
    const double si = g.s(i);
    const C3 rot{std::polar(1.0, lam[0] * si), std::polar(1.0, lam[1] * si),
                 std::polar(1.0, lam[2] * si)};
    for (int j = 0; j < nt; ++j) {
      ImmersionSample smp = rows[j];
      smp.s = si;
      for (int k = 0; k < 3; ++k) smp.u[k] = rot[k] * rows[j].u[k];
      g.samples[g.index(i, j)] = smp;
    }
  }
  return g;
}

SurfaceGrid make_grid_from(const std::function<C3(double, double)>& f, Interval s, Interval t,
                           int ns, int nt, bool periodic, Exec exec) {
  SurfaceGrid g = empty_grid(s, t, ns, nt, periodic);
  const bool par = exec == Exec::parallel;
#pragma omp parallel for schedule(static) if (par)
  for (int i = 0; i < ns; ++i) {
    for (int j = 0; j < nt; ++j) {
      ImmersionSample& smp = g.samples[g.index(i, j)];
      smp.s = g.s(i);
      smp.t = g.t(j);
      smp.u = f(smp.s, smp.t);
    }
  }
  return g;
}

}  // namespace slcone
