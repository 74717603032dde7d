#pragma once

#include "fieldmech/deposit.hpp"
#include "fieldmech/expr.hpp"
#include "fieldmech/phase_space.hpp"

namespace fieldmech {

/// How the scalar potential enters the charge coupling when momenta are read
/// off the Lagrangian.
enum class MomentumMode {
  /// phi is its own coordinate; the coupling reads the stored field.
  IndependentVariables,
  /// The coupling evaluates phi through its radial line-integral
  /// reconstruction from E. Since E contains A-dot, the reconstruction drags
  /// an extra charge-line term into the field momentum. This is the variant
  /// under scrutiny; everything downstream quantifies what it breaks.
  SubstitutedConstraints,
};

/// External one-particle potential V(x, y, z, r). Empty expression means
/// free. The gradient is a central difference; exact for polynomials of
/// degree <= 2 in each coordinate.
struct Potential {
  ExprAst expr;
  double value(const Vec3& p) const;
  Vec3 gradient(const Vec3& p, double fd_step = kDefaultFdStep) const;
};

/// Velocities paired with a FieldState's coordinates. phi_dot never enters
/// the action; it is carried so its conjugate momentum can be measured to
/// vanish rather than assumed to.
struct VelocityData {
  Vec3 v;
  VectorField a_dot;
  ScalarField phi_dot;
  VelocityData() = default;
  explicit VelocityData(const Grid& g) : a_dot(g), phi_dot(g) {}
};

/// Signed contributions as they appear in L.
struct LagrangianBreakdown {
  double electric = 0.0;   // +(eps0/2) sum E^2 h^3
  double magnetic = 0.0;   // -(1/(2 mu0)) sum B^2 h^3
  double coupling = 0.0;   // q v.A(r) - q phi(r)
  double kinetic = 0.0;    // (m/2) v^2
  double external = 0.0;   // -V(r)
  double total() const {
    return electric + magnetic + coupling + kinetic + external;
  }
};

/// Field sums run over interior cells (margin kIntegralMargin). E is built
/// as -a_dot - grad(phi) from the stored phi regardless of mode; the mode
/// only changes the phi sampled by the charge coupling.
LagrangianBreakdown evaluate_lagrangian(const FieldState& s,
                                        const VelocityData& vel,
                                        MomentumMode mode, const Potential& V,
                                        int nodes = kDefaultQuadratureNodes);

struct CanonicalMomenta {
  Vec3 p;
  VectorField pi;       // per unit cell volume
  ScalarField pi_phi;   // per unit cell volume
};

/// Momenta by central differences of the full Lagrangian; field entries are
/// divided by the cell volume. The action is at most quadratic in v and
/// a_dot, so the central differences are exact to rounding. Boundary-shell
/// cells sit outside the field sums and report zero.
CanonicalMomenta canonical_momentum(const FieldState& s,
                                    const VelocityData& vel,
                                    MomentumMode mode, const Potential& V,
                                    double fd_step = kDefaultFdStep,
                                    int nodes = kDefaultQuadratureNodes);

/// E implied by the velocity data: -a_dot - grad(phi).
VectorField electric_field(const FieldState& s, const VelocityData& vel);

/// eps0 div(E) - rho with rho the kernel-deposited charge; identically the
/// statement -eps0 div(a_dot + grad phi) - rho. Vanishes on states built
/// Gauss-consistently, and is the constraint the evolution must preserve.
ScalarField gauss_residual(const FieldState& s, const VelocityData& vel);

}  // namespace fieldmech
