#pragma once

#include <functional>
#include <vector>

#include "fieldmech/grid.hpp"

namespace fieldmech {

inline constexpr double kDefaultFdStep = 1e-5;

struct ParticleState {
  Vec3 r{};
  Vec3 P{};  // canonical momentum
  double q = 0.0;
  double m = 1.0;
};

/// Full phase-space point: canonical field pairs (A, pi) and (phi, pi_phi)
/// plus one particle. Fields share one grid; eps0/mu0 default to natural
/// units.
struct FieldState {
  VectorField A, pi;
  ScalarField phi, pi_phi;
  ParticleState particle;
  double eps0 = 1.0;
  double mu0 = 1.0;

  FieldState() = default;
  explicit FieldState(const Grid& g) : A(g), pi(g), phi(g), pi_phi(g) {}
  const Grid& grid() const { return A.grid(); }

  void validate(const char* where) const;
};

/// Gradient of a scalar functional. Field entries hold functional
/// derivatives (the plain partial divided by the cell volume), particle
/// entries plain partials.
struct StateGradient {
  Vec3 d_r{}, d_P{};
  VectorField d_A, d_pi;
  ScalarField d_phi, d_pi_phi;

  StateGradient() = default;
  explicit StateGradient(const Grid& g)
      : d_A(g), d_pi(g), d_phi(g), d_pi_phi(g) {}
};

/// Scalar observable with an optional analytic gradient. When `gradient` is
/// empty, consumers fall back to central finite differences.
struct Functional {
  std::function<double(const FieldState&)> value;
  std::function<StateGradient(const FieldState&)> gradient;
};

/// Analytic gradient if available, otherwise the central-difference
/// fallback with a step relative to each entry's magnitude.
StateGradient functional_gradient(const Functional& F, const FieldState& s,
                                  double fd_step = kDefaultFdStep);

/// Canonical pairing of two gradients. Field sums carry the cell volume so
/// that the bracket of point evaluations reproduces delta_cc' / h^3.
double symplectic_pairing(const StateGradient& gF, const StateGradient& gG);

double poisson_bracket(const Functional& F, const Functional& G,
                       const FieldState& s, double fd_step = kDefaultFdStep);

// --- Flat layout -----------------------------------------------------------
// Order: r(3), P(3), A(3n), pi(3n), phi(n), pi_phi(n). Used by the dense
// constraint algebra and by directional finite differences.

struct StateLayout {
  explicit StateLayout(const Grid& g) : n(g.cell_count()) {}
  std::size_t n;
  std::size_t dim() const { return 6 + 8 * n; }
  std::size_t r_off() const { return 0; }
  std::size_t P_off() const { return 3; }
  std::size_t A_off() const { return 6; }
  std::size_t pi_off() const { return 6 + 3 * n; }
  std::size_t phi_off() const { return 6 + 6 * n; }
  std::size_t pi_phi_off() const { return 6 + 7 * n; }
};

std::vector<double> flatten_gradient(const StateGradient& g);
std::vector<double> flatten_state(const FieldState& s);

/// s += scale * direction (direction in flat layout, interpreted as raw
/// coordinate displacements).
void displace_state(FieldState& s, const std::vector<double>& direction,
                    double scale);

/// Pairing of two flat gradient vectors over the given grid.
double symplectic_pairing_flat(const std::vector<double>& u,
                               const std::vector<double>& v, const Grid& g);

}  // namespace fieldmech
