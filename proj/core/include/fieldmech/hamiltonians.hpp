#pragma once

#include <string>
#include <vector>

#include "fieldmech/lagrangian.hpp"

namespace fieldmech {

/// Hamiltonian assembly selector.
///
/// MinimalCouplingPsi is the constrained-Legendre form carrying the free
/// static vector field psi:
///   (1/2m)[P - qA(r)]^2 + V(r) + q phi(r)
///     + int { (1/(2 eps0))[2 pi^2 - (pi - psi)^2] + B^2/(2 mu0)
///             - pi . (grad phi + psi/eps0) }
/// Its psi cross terms cancel algebraically; the assembly keeps the literal
/// form so the cancellation is measured, not assumed.
///
/// MinimalCouplingFinal drops the scalar-potential pair after the
/// constraint analysis: (1/2m)[P - qA(r)]^2 + V(r)
///     + int [ pi^2/(2 eps0) + B^2/(2 mu0) ].
///
/// PZW is the multipolar form with D = eps0 E + P, E read from the state as
/// -pi/eps0, P the charge-line polarization:
///   (1/2m)[P + q r x int_0^1 u B(u r) du]^2
///     + int [ D^2/(2 eps0) + B^2/(2 mu0) - D.P/eps0 + P^2/(2 eps0) ].
///
/// PZWDipole is the long-wavelength reduction: P^2/(2m) + field energy with
/// the (eps0/2) E^2 prefactor.
struct HamiltonianKind {
  enum class Variant {
    MinimalCouplingPsi,
    MinimalCouplingFinal,
    PZW,
    PZWDipole,
  };
  Variant variant = Variant::MinimalCouplingFinal;
  VectorField psi;  // MinimalCouplingPsi only; empty means zero

  static HamiltonianKind minimal_with_psi(VectorField psi_field) {
    return {Variant::MinimalCouplingPsi, std::move(psi_field)};
  }
  static HamiltonianKind minimal_with_psi(const Grid& g) {
    return {Variant::MinimalCouplingPsi, VectorField(g)};
  }
  static HamiltonianKind minimal_final() {
    return {Variant::MinimalCouplingFinal, {}};
  }
  static HamiltonianKind pzw() { return {Variant::PZW, {}}; }
  static HamiltonianKind pzw_dipole() { return {Variant::PZWDipole, {}}; }
};

/// Charge-line polarization q r integral_0^1 delta(x - u r) du, realized
/// with the deposit kernel. Volume-weighted integral equals q r.
VectorField polarization_field(const ParticleState& p, const Grid& g,
                               int nodes = kDefaultQuadratureNodes);

/// r x integral_0^1 u B(u r) du, the kinetic-term insert of the PZW form.
Vec3 radial_moment_insert(const Vec3& r, const VectorField& B,
                          int nodes = kDefaultQuadratureNodes);

struct HamiltonianEval {
  double value = 0.0;
  StateGradient gradient;
  /// Per-term breakdown in deterministic order; names stable for reports.
  std::vector<std::pair<std::string, double>> terms;
};

/// Energy plus analytic gradient. Field sums run over interior cells
/// (margin kIntegralMargin); gradient field entries are functional
/// derivatives. Boundary-shell entries are zero, mirroring the sums.
HamiltonianEval assemble_hamiltonian(const HamiltonianKind& kind,
                                     const FieldState& s, const Potential& V,
                                     int nodes = kDefaultQuadratureNodes);

/// Same assembly wrapped as a Functional (value + analytic gradient).
Functional hamiltonian_functional(const HamiltonianKind& kind,
                                  const Potential& V,
                                  int nodes = kDefaultQuadratureNodes);

/// Particle block (d_r, d_P) of the gradient alone; cheap, used by the
/// integrator's fixed-point sub-iterations.
struct ParticleGradient {
  Vec3 d_r, d_P;
};
ParticleGradient particle_hamiltonian_gradient(
    const HamiltonianKind& kind, const FieldState& s, const Potential& V,
    int nodes = kDefaultQuadratureNodes);

/// dH/dpi as a standalone field: the A-drift rate of the Hamiltonian flow.
/// Evaluates the same literal expressions as assemble_hamiltonian's d_pi
/// block (psi form included), so flows using it agree with the full
/// gradient bit for bit.
VectorField momentum_gradient_field(const HamiltonianKind& kind,
                                    const FieldState& s,
                                    int nodes = kDefaultQuadratureNodes);

/// Residual of the identity D^2/(2 eps0) - D.P/eps0 + P^2/(2 eps0)
/// == eps0 E^2 / 2 summed over the interior, with D = eps0 E + P. The
/// relative residual is measured against the gross magnitude of the three
/// left-hand terms, i.e. how completely they cancel.
struct CancellationResult {
  double lhs = 0.0;        // assembled D, P field terms
  double rhs = 0.0;        // eps0 E^2 / 2 sum
  double gross = 0.0;      // sum of absolute term magnitudes
  double absolute = 0.0;   // |lhs - rhs|
  double relative = 0.0;   // absolute / max(gross, tiny)
};
CancellationResult pzw_cancellation_check(const FieldState& s,
                                          int nodes = kDefaultQuadratureNodes);

/// Max component deviation of radial_moment_insert(r, B) from
/// -interpolate(A_radial[B], r) where A_radial is the line-integral vector
/// potential. Zero for uniform B up to rounding.
double a_square_check(const ParticleState& p, const VectorField& B,
                      int nodes = kDefaultQuadratureNodes);

/// |H + L - P.v - sum pi.a_dot h^3| on matched data. Rounding-level for the
/// psi = 0 chain when pi was produced by the independent-variable rule and
/// P = m v + q A(r); nonzero for the substituted-mode momentum.
double legendre_check(const FieldState& s, const VelocityData& vel,
                      const HamiltonianKind& kind, const Potential& V,
                      int nodes = kDefaultQuadratureNodes);

}  // namespace fieldmech
