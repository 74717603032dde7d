#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "fieldmech/expr.hpp"
#include "fieldmech/gauges.hpp"
#include "fieldmech/grid.hpp"

namespace fieldmech {

enum class IntegratorScheme { Leapfrog, RK4 };

/// Initial field data: either a named preset or six expressions for the
/// electric and magnetic components, evaluated at cell centers and then
/// projected into the active gauge.
struct FieldInit {
  enum class Preset { Zero, Wavepacket, Bound };
  Preset preset = Preset::Zero;
  bool from_expressions = false;
  std::array<ExprAst, 3> electric;
  std::array<ExprAst, 3> magnetic;
};

/// One model = grid + particle + potential + gauge + numerics + integrator
/// + initial fields. Parsed from an INI-like text format; see
/// docs/model_format.md.
struct ModelConfig {
  std::array<int, 3> dims{9, 9, 9};
  double spacing = 0.25;

  double charge = 0.0;
  double mass = 1.0;
  Vec3 position{};
  Vec3 momentum{};

  ExprAst potential;  // V(x, y, z, r), at the particle position

  GaugeKind gauge = GaugeKind::Poincare;

  int quadrature_nodes = kDefaultQuadratureNodes;
  double poisson_tol = 1e-10;
  double rank_tol = 1e-10;
  double fd_step = 1e-5;
  double eps0 = 1.0;  // natural units by default
  double mu0 = 1.0;

  double dt = 1e-3;
  std::int64_t steps = 100;
  IntegratorScheme scheme = IntegratorScheme::Leapfrog;

  FieldInit fields;

  Grid make_grid() const { return Grid(dims[0], dims[1], dims[2], spacing); }

  bool operator==(const ModelConfig& o) const;
  bool operator!=(const ModelConfig& o) const { return !(*this == o); }
};

/// Parses a model document. Throws ParseError with the offending line and
/// column for syntax errors, unknown keys, and unresolved identifiers in
/// expressions; throws Error for semantic violations (even grid dimension,
/// particle outside the safe region, missing required keys).
ModelConfig parse_model(std::string_view text);
ModelConfig parse_model_file(const std::string& path);

/// Canonical text form: fixed section and key order, shortest round-trip
/// number formatting. parse_model(serialize_model(c)) == c.
std::string serialize_model(const ModelConfig& c);

/// FNV-1a over the canonical serialization. Stable across platforms for
/// identical configs; used to stamp reports.
std::uint64_t config_digest(const ModelConfig& c);

const char* gauge_name(GaugeKind k);
const char* scheme_name(IntegratorScheme s);
const char* preset_name(FieldInit::Preset p);

}  // namespace fieldmech
