#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <string_view>

#include <json.hpp>

#include "slcone/acfamily.hpp"
#include "slcone/grid.hpp"
#include "slcone/periods.hpp"
#include "slcone/verify.hpp"

namespace slcone {

inline constexpr std::string_view kManifestSchema = "slcone/1";
inline constexpr std::string_view kToolVersion = "1.0.0";

// Orthographic projection R^6 -> R^3, rows applied to (x1, y1, x2, y2, x3, y3).
struct Projection {
  std::array<std::array<double, 6>, 3> rows{};

  // Default keeps Re z1, Im z1, Re z2.
  static Projection axes(int a = 0, int b = 1, int c = 2);
  // "a,b,c" with axis indices in 0..5, or 18 comma-separated matrix entries.
  static Projection parse(std::string_view text);
  std::array<double, 3> apply(const C3& u) const;
};

void write_obj(std::ostream& os, const SurfaceGrid& g, const Projection& proj = Projection::axes());
void write_obj(std::ostream& os, const ACGrid& g, const Projection& proj = Projection::axes());

// Columns s, t, u1..u6, y, K.
void write_grid_csv(std::ostream& os, const SurfaceGrid& g);
// Columns piece, rho, phi, s, t, u1..u6.
void write_acgrid_csv(std::ostream& os, const ACGrid& g);

nlohmann::json to_json(const ResidualReport& r);
nlohmann::json to_json(const PeriodVector& v);
nlohmann::json to_json(const PeriodLattice& l);
nlohmann::json to_json(const ClosureResult& c);
nlohmann::json to_json(const EmbeddednessReport& e, std::size_t max_pairs = 100);
nlohmann::json to_json(const EllipticData& e);
nlohmann::json to_json(const CurvatureRange& k);
nlohmann::json to_json(const EndDecay& e);

}  // namespace slcone
