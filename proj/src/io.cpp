#include "slcone/io.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <vector>

#include "slcone/errors.hpp"

namespace slcone {
namespace {

std::array<double, 6> real6(const C3& u) {
  return {u[0].real(), u[0].imag(), u[1].real(), u[1].imag(), u[2].real(), u[2].imag()};
}

// JSON has no infinities; map them to null.
nlohmann::json num(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }

void write_faces(std::ostream& os, std::size_t offset, int rows, int cols) {
  for (int i = 0; i + 1 < rows; ++i)
    for (int j = 0; j + 1 < cols; ++j) {
      const std::size_t a = offset + static_cast<std::size_t>(i) * cols + j + 1;
      const std::size_t b = a + 1;
      const std::size_t c = a + cols;
      const std::size_t d = c + 1;
      os << "f " << a << ' ' << c << ' ' << d << "\nf " << a << ' ' << d << ' ' << b << '\n';
    }
}

}  // namespace

Projection Projection::axes(int a, int b, int c) {
  Projection p;
  const int idx[3] = {a, b, c};
  for (int r = 0; r < 3; ++r) {
    if (idx[r] < 0 || idx[r] > 5) throw InputError("projection axis must be in 0..5");
    p.rows[r][idx[r]] = 1.0;
  }
  return p;
}

Projection Projection::parse(std::string_view text) {
  std::vector<double> vals;
  std::stringstream ss{std::string(text)};
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(item, &used));
      if (used != item.size()) throw InputError("");
    } catch (const std::exception&) {
      throw InputError("bad projection entry '" + item + "'");
    }
  }
  if (vals.size() == 3) {
    for (double v : vals)
      if (v != std::floor(v)) throw InputError("projection axes must be integers");
    return axes(static_cast<int>(vals[0]), static_cast<int>(vals[1]), static_cast<int>(vals[2]));
  }
  if (vals.size() != 18) throw InputError("projection needs 3 axis indices or 18 matrix entries");
  Projection p;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 6; ++c) p.rows[r][c] = vals[r * 6 + c];
  return p;
}

std::array<double, 3> Projection::apply(const C3& u) const {
  const auto x = real6(u);
  std::array<double, 3> out{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 6; ++c) out[r] += rows[r][c] * x[c];
  return out;
}

void write_obj(std::ostream& os, const SurfaceGrid& g, const Projection& proj) {
  os << std::setprecision(12);
  os << "# " << g.ns << " x " << g.nt << " grid\n";
  for (const ImmersionSample& s : g.samples) {
    const auto p = proj.apply(s.u);
    os << "v " << p[0] << ' ' << p[1] << ' ' << p[2] << '\n';
  }
  write_faces(os, 0, g.ns, g.nt);
}

void write_obj(std::ostream& os, const ACGrid& g, const Projection& proj) {
  os << std::setprecision(12);
  std::size_t offset = 0;
  for (std::size_t piece = 0; piece < g.pieces.size(); ++piece) {
    os << "o piece" << piece << '\n';
    for (const C3& u : g.pieces[piece]) {
      const auto p = proj.apply(u);
      os << "v " << p[0] << ' ' << p[1] << ' ' << p[2] << '\n';
    }
    // Faces on the (profile, s) sheets at every link t-column.
    const int m = static_cast<int>(g.profile.pieces[piece].samples.size());
    const int ns = g.link.ns;
    const int nt = g.link.nt;
    for (int a = 0; a + 1 < m; ++a)
      for (int i = 0; i < ns; ++i)
        for (int j = 0; j + 1 < nt; ++j) {
          const std::size_t v00 = offset + g.index(a, i, j) + 1;
          const std::size_t v01 = offset + g.index(a, i, j + 1) + 1;
          const std::size_t v10 = offset + g.index(a + 1, i, j) + 1;
          const std::size_t v11 = offset + g.index(a + 1, i, j + 1) + 1;
          os << "f " << v00 << ' ' << v10 << ' ' << v11 << "\nf " << v00 << ' ' << v11 << ' '
             << v01 << '\n';
        }
    offset += g.pieces[piece].size();
  }
}

void write_grid_csv(std::ostream& os, const SurfaceGrid& g) {
  os << "s,t,u1,u2,u3,u4,u5,u6,y,K\n" << std::setprecision(17);
  for (const ImmersionSample& s : g.samples) {
    os << s.s << ',' << s.t;
    for (double v : real6(s.u)) os << ',' << v;
    os << ',' << s.y << ',' << s.K << '\n';
  }
}

void write_acgrid_csv(std::ostream& os, const ACGrid& g) {
  os << "piece,rho,phi,s,t,u1,u2,u3,u4,u5,u6\n" << std::setprecision(17);
  const std::size_t per = g.link.samples.size();
  for (std::size_t piece = 0; piece < g.pieces.size(); ++piece) {
    const auto& prof = g.profile.pieces[piece].samples;
    for (std::size_t k = 0; k < g.pieces[piece].size(); ++k) {
      const ProfileSample& ps = prof[k / per];
      const ImmersionSample& ls = g.link.samples[k % per];
      os << piece << ',' << ps.rho << ',' << ps.phi << ',' << ls.s << ',' << ls.t;
      for (double v : real6(g.pieces[piece][k])) os << ',' << v;
      os << '\n';
    }
  }
}

nlohmann::json to_json(const ResidualReport& r) {
  nlohmann::json j{{"name", r.name},       {"max_abs", num(r.max_abs)},
                   {"grid", {r.ns, r.nt}}, {"h", r.h},
                   {"at_roundoff", r.at_roundoff}};
  if (r.convergence_order) j["convergence_order"] = num(*r.convergence_order);
  if (r.coarse_max_abs) j["coarse_max_abs"] = num(*r.coarse_max_abs);
  return j;
}

nlohmann::json to_json(const PeriodVector& v) { return {v.sigma, v.tau}; }

nlohmann::json to_json(const PeriodLattice& l) {
  nlohmann::json basis = nlohmann::json::array();
  for (const PeriodVector& v : l.basis) basis.push_back(to_json(v));
  return {{"basis", basis},
          {"rectangular", l.rectangular},
          {"basic_period_T", num(l.basic_period_T)},
          {"holonomy", {l.holonomy[0], l.holonomy[1], l.holonomy[2]}},
          {"theta_sum_multiple_of_pi", l.theta_sum_multiple},
          {"tau_multiple_of_T", l.tau_multiple}};
}

nlohmann::json to_json(const ClosureResult& c) {
  nlohmann::json j{{"kind", to_string(c.kind)}, {"status", c.status}, {"lattice", to_json(c.lattice)}};
  j["alpha_rational"] = c.alpha ? nlohmann::json(c.alpha->str()) : nlohmann::json();
  j["beta_rational"] = c.beta ? nlohmann::json(c.beta->str()) : nlohmann::json();
  if (c.recipe_period) j["recipe_period"] = to_json(*c.recipe_period);
  return j;
}

nlohmann::json to_json(const EmbeddednessReport& e, std::size_t max_pairs) {
  nlohmann::json pairs = nlohmann::json::array();
  for (std::size_t k = 0; k < e.pairs.size() && k < max_pairs; ++k) {
    const ProximityPair& p = e.pairs[k];
    pairs.push_back({{"a", p.a}, {"b", p.b}, {"ambient", p.ambient}, {"param", p.param}});
  }
  return {{"eps", e.eps},
          {"param_threshold", e.param_threshold},
          {"points", e.points},
          {"pair_count", e.pairs.size()},
          {"pairs", pairs}};
}

nlohmann::json to_json(const EllipticData& e) {
  return {{"k", e.modulus.k},
          {"ksq", e.modulus.ksq},
          {"kcsq", e.modulus.kcsq},
          {"r", e.r},
          {"K", num(e.quarter_period)},
          {"Gamma1", e.gamma1},
          {"Gamma2", e.gamma2},
          {"Gamma3", num(e.gamma3)}};
}

nlohmann::json to_json(const CurvatureRange& k) {
  return {{"K_min", num(k.K_min)}, {"K_max", num(k.K_max)}, {"y_min", k.y_min},
          {"y_max", k.y_max},      {"unbounded", k.unbounded}};
}

nlohmann::json to_json(const EndDecay& e) {
  auto rows = [](const std::vector<EndRow>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const EndRow& r : v)
      a.push_back({{"abs_f", r.abs_f},
                   {"arg_f", r.arg_f},
                   {"dist_cone", r.dist_cone},
                   {"dist_rotated_cone", r.dist_rotated_cone}});
    return a;
  };
  return {{"end0", rows(e.end0)},
          {"end1", rows(e.end1)},
          {"end0_decreasing", EndDecay::decreasing(e.end0, false)},
          {"end1_decreasing", EndDecay::decreasing(e.end1, true)}};
}

}  // namespace slcone
