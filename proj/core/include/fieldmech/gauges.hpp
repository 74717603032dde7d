#pragma once

#include "fieldmech/deposit.hpp"
#include "fieldmech/phase_space.hpp"

namespace fieldmech {

enum class GaugeKind { Coulomb, Poincare };

/// A(x) = -x cross integral_0^1 u B(u x) du per cell. Only cells in the safe
/// region are evaluated (the radial segment must stay on the grid); outside
/// it the potential is zero. x . A == 0 holds exactly by construction.
VectorField poincare_vector_potential(const VectorField& B,
                                      int nodes = kDefaultQuadratureNodes);

/// phi(x) = -x . integral_0^1 E(u x) du per safe-region cell.
ScalarField poincare_scalar_potential(const VectorField& E,
                                      int nodes = kDefaultQuadratureNodes);

/// Lambda(x) = -integral_0^1 x . Atrans(u x) du. gradient(Lambda) is the
/// longitudinal piece whose addition restores the radial condition
/// x . (Atrans + grad Lambda) = 0.
ScalarField gauge_generator(const VectorField& Atrans,
                            int nodes = kDefaultQuadratureNodes);

/// Gauge-condition violation of a vector potential: Poincare reports the
/// interior max of |x . A|, Coulomb the interior max of |div A|.
double gauge_residual(const VectorField& A, GaugeKind kind);
double gauge_residual(const FieldState& s, GaugeKind kind);

}  // namespace fieldmech
