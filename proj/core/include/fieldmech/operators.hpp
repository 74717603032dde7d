#pragma once

#include "fieldmech/grid.hpp"

namespace fieldmech {

// Second-order central differences in the interior, second-order one-sided
// stencils on the boundary layer. All operators act cell-collocated.

/// d/dx_axis of a scalar field.
ScalarField derivative(const ScalarField& f, int axis);

VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& f);
VectorField curl(const VectorField& f);

/// Transpose of `gradient` restricted to output cells with the given margin:
/// returns d/dphi of sum_{cells in margin} w . grad(phi). margin 0 transposes
/// the full operator.
ScalarField gradient_adjoint(const VectorField& w, int margin);

/// Transpose of `curl` restricted to output cells with the given margin.
VectorField curl_adjoint(const VectorField& w, int margin);

/// Transpose of `divergence` restricted to output cells with the given
/// margin.
VectorField divergence_adjoint(const ScalarField& w, int margin);

}  // namespace fieldmech
