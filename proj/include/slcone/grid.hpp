#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "slcone/exec.hpp"
#include "slcone/family.hpp"

namespace slcone {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

// Uniform ns x nt samples of a map R^2 -> C^3, stored with t fastest.
// periodic = true places n samples on [lo, hi) (the far edge is a translate of
// the near edge); otherwise the n samples include both end points.
struct SurfaceGrid {
  std::optional<ConeParameters> params;
  Interval s_range;
  Interval t_range;
  int ns = 0;
  int nt = 0;
  bool periodic = false;
  std::vector<ImmersionSample> samples;

  double hs() const { return s_range.length() / (periodic ? ns : ns - 1); }
  double ht() const { return t_range.length() / (periodic ? nt : nt - 1); }
  double s(int i) const { return s_range.lo + i * hs(); }
  double t(int j) const { return t_range.lo + j * ht(); }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * nt + j; }
  const ImmersionSample& at(int i, int j) const { return samples[index(i, j)]; }
};

// Samples the immersion. Phases and radii depend on t only and are computed
// once per row; the e^{As} factor is applied per node.
SurfaceGrid make_grid(const ConeImmersion& im, Interval s, Interval t, int ns, int nt,
                      bool periodic = false, Exec exec = Exec::parallel);

// Samples an arbitrary map (used for control surfaces and links). y and K are
// left at zero.
SurfaceGrid make_grid_from(const std::function<C3(double, double)>& f, Interval s, Interval t,
                           int ns, int nt, bool periodic = false, Exec exec = Exec::parallel);

}  // namespace slcone
