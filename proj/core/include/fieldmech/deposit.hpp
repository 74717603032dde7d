#pragma once

#include <array>
#include <functional>

#include "fieldmech/grid.hpp"

namespace fieldmech {

inline constexpr int kDefaultQuadratureNodes = 64;

/// Deposit a point charge with the two-cell triangular (cloud-in-cell)
/// kernel. The returned density integrates back to q exactly:
/// sum_cells value * h^3 == q. Throws if x leaves the safe region.
ScalarField deposit_point(double q, const Vec3& x, const Grid& g);

/// Line density along the straight segment from the origin to r, weighted by
/// w(u) on u in [0,1]: composite midpoint quadrature of deposit_point over
/// the segment. With w == 1 this realizes the kernel-smeared
/// integral_0^1 delta(x - u r) du.
ScalarField deposit_line(double q, const Vec3& r, const Grid& g,
                         const std::function<double(double)>& weight,
                         int nodes = kDefaultQuadratureNodes);

/// Kernel interpolation, the exact volume-weighted adjoint of deposit_point:
/// sum_cells deposit_point(q, x)[c] * f[c] * h^3 == q * interpolate(f, x).
double interpolate(const ScalarField& f, const Vec3& x);
Vec3 interpolate(const VectorField& f, const Vec3& x);

/// d interpolate(f, x) / d x. Rows are field components, columns position
/// components. The triangular kernel makes this piecewise constant; on the
/// measure-zero kink set the symmetric value (zero slope) is used.
std::array<Vec3, 3> interpolate_jacobian(const VectorField& f, const Vec3& x);
Vec3 interpolate_gradient(const ScalarField& f, const Vec3& x);

/// Midpoint-quadrature line integrals along the segment [0, r]:
/// integral_0^1 w(u) f(u r) du.
double line_integral(const ScalarField& f, const Vec3& r,
                     const std::function<double(double)>& weight,
                     int nodes = kDefaultQuadratureNodes);
Vec3 line_integral(const VectorField& f, const Vec3& r,
                   const std::function<double(double)>& weight,
                   int nodes = kDefaultQuadratureNodes);

}  // namespace fieldmech
