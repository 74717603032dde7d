#pragma once

#include "fieldmech/grid.hpp"

namespace fieldmech {

class SolverError : public Error {
public:
  SolverError(const std::string& what, double residual, int iterations)
      : Error(what), residual(residual), iterations(iterations) {}
  double residual;
  int iterations;
};

struct Decomposition {
  VectorField transverse;
  VectorField longitudinal;
  ScalarField potential;  // chi with longitudinal == gradient(chi)
  int iterations = 0;
  double residual = 0.0;
};

inline constexpr double kDefaultPoissonTol = 1e-10;
inline constexpr int kDefaultPoissonMaxIter = 50000;

/// Splits f into a gradient part and a remainder with vanishing interior
/// divergence. chi solves the discrete Dirichlet Poisson problem in
/// least-squares form: minimize the interior norm of f - grad(chi) over chi
/// vanishing on the boundary layer, by diagonally preconditioned conjugate
/// gradients on the normal equations. By construction the remainder is
/// orthogonal to every admissible gradient, and its central-stencil
/// divergence at interior cells equals the final CG residual there.
/// An input with no gradient content (discretely divergence-free) yields a
/// right-hand side at assembly rounding level; that is detected against an
/// absolute floor scaled to the field, and the zero potential is returned.
Decomposition decompose(const VectorField& f, double tol = kDefaultPoissonTol,
                        int max_iter = kDefaultPoissonMaxIter);

/// Solves -div(grad(phi)) = rhs at every cell of margin >= 1, with phi zero
/// on the boundary layer, so a charge density rho yields the electrostatic
/// potential via solve_poisson(rho / eps0, ...). The collocation system is
/// square but not symmetric (the one-sided derivative rows feeding the
/// margin-1 cells break symmetry, and are also what couples the two
/// stride-2 parity classes that central stencils alone cannot see), so it
/// is solved by conjugate gradients on the unformed normal equations.
ScalarField solve_poisson(const ScalarField& rhs,
                          double tol = kDefaultPoissonTol,
                          int max_iter = kDefaultPoissonMaxIter);

}  // namespace fieldmech
