#include "slcone/quadrature.hpp"

#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "slcone/errors.hpp"

namespace slcone {
namespace {

using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

// The rule is applied on [-1, 1] and rescaled here so that the error estimate
// carries the panel width as well as the value.
Panel panel(const std::function<double(double)>& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double err = 0.0;
  const double v = Rule::integrate([&](double x) { return f(mid + half * x); }, -1.0, 1.0, 0, 0.0, &err);
  return {a, b, half * v, std::abs(half) * err};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol, int max_intervals) {
  QuadratureResult acc;
  if (a == b) return acc;
  if (!(abs_tol > 0.0)) throw DomainError("integrate_adaptive: abs_tol must be positive");

  std::priority_queue<Panel> heap;
  heap.push(panel(f, a, b));
  double value = heap.top().value;
  double error = heap.top().error;
  while (error > abs_tol && static_cast<int>(heap.size()) < max_intervals) {
    const Panel p = heap.top();
    const double m = 0.5 * (p.a + p.b);
    if (!(m > std::min(p.a, p.b) && m < std::max(p.a, p.b))) break;
    heap.pop();
    const Panel l = panel(f, p.a, m);
    const Panel r = panel(f, m, p.b);
    value += l.value + r.value - p.value;
    error += l.error + r.error - p.error;
    heap.push(l);
    heap.push(r);
  }
  // Re-sum to drop the drift of the running updates.
  acc.intervals = static_cast<int>(heap.size());
  acc.value = 0.0;
  acc.error = 0.0;
  while (!heap.empty()) {
    acc.value += heap.top().value;
    acc.error += heap.top().error;
    heap.pop();
  }
  if (!std::isfinite(acc.value) || acc.error > abs_tol) {
    std::ostringstream os;
    os << "adaptive quadrature on [" << a << ", " << b << "] did not converge: error estimate "
       << acc.error << " > " << abs_tol;
    throw QuadratureError(os.str());
  }
  return acc;
}

}  // namespace slcone
