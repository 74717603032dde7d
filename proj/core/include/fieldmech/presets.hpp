#pragma once

#include <random>
#include <utility>

#include "fieldmech/phase_space.hpp"

namespace fieldmech {

/// Separable C4 bump, 1 at the origin, identically 0 outside support_frac
/// of the half extent along each axis.
ScalarField bump_window(const Grid& g, double support_frac = 0.7);

/// Divergence-free wavepacket pair (E, B): numerical curls of fixed smooth
/// closed-form profiles. div E then vanishes identically (central stencils
/// commute) at every cell of depth >= 2, on any resolution, which is what
/// the gauge comparison's Gauss gate requires. salt picks a different
/// deterministic shape.
std::pair<VectorField, VectorField> wavepacket_fields(const Grid& g,
                                                      double amplitude = 1e-2,
                                                      unsigned salt = 0);

/// Windowed superposition of a few random plane waves. Deterministic given
/// the generator state.
ScalarField random_scalar(const Grid& g, std::mt19937_64& rng,
                          double amplitude = 1e-2);
VectorField random_vector(const Grid& g, std::mt19937_64& rng,
                          double amplitude = 1e-2);

/// Random smooth state: windowed A and pi, particle placed uniformly inside
/// the safe region (q != 0 only), small random P. Gauss's law is not
/// imposed. phi and pi_phi stay zero.
FieldState random_state(const Grid& g, std::mt19937_64& rng, double q = 0.0,
                        double amplitude = 1e-2);

/// Electrostatic bound state of a point charge: phi from the lattice
/// Poisson solve, pi = eps0 grad(phi) (i.e. E = -grad phi), A = 0, P = 0.
/// The Gauss residual sits at solver level by construction.
FieldState bound_state(const Grid& g, double q, const Vec3& r0,
                       double m = 1.0);

/// Small Gauss-violating probe for the constraint chain: unit charge at the
/// origin cell, A = 0, P = 0, windowed random pi. With zero velocity the
/// chain's tertiary candidate vanishes identically, so the chain emits the
/// Gauss constraint and stops.
FieldState chain_probe_state(const Grid& g, unsigned seed = 7u);

/// Linear functional with random bounded coefficients over (r, P, A, pi)
/// and an analytic gradient.
Functional random_linear_functional(const Grid& g, std::mt19937_64& rng);

}  // namespace fieldmech
