#pragma once

#include <functional>
#include <random>

#include "fieldmech/grid.hpp"

namespace testutil {

using fieldmech::Grid;
using fieldmech::ScalarField;
using fieldmech::Vec3;
using fieldmech::VectorField;

inline ScalarField sample_scalar(const Grid& g,
                                 const std::function<double(Vec3)>& f) {
  ScalarField out(g);
  for (int k = 0; k < g.nz(); ++k)
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) out(i, j, k) = f(g.center(i, j, k));
  return out;
}

inline VectorField sample_vector(const Grid& g,
                                 const std::function<Vec3(Vec3)>& f) {
  VectorField out(g);
  for (int k = 0; k < g.nz(); ++k)
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) out.set(i, j, k, f(g.center(i, j, k)));
  return out;
}

// Per-axis (1-u^2)^2 taper that is exactly zero on the outermost `clear`
// cell layers. u is the axis position normalized to hit +-1 at layer `clear`.
inline double taper(const Grid& g, int i, int j, int k, int clear) {
  int idx[3] = {i, j, k};
  double w = 1.0;
  for (int a = 0; a < 3; ++a) {
    double c = 0.5 * (g.dim(a) - 1);
    double u = (idx[a] - c) / (c - clear);
    double t = 1.0 - u * u;
    w *= t > 0.0 ? t * t : 0.0;
  }
  return w;
}

// Plain component sums, no volume weight: transpose identities are exact in
// this inner product, not in the h^3-weighted one.
inline double raw_dot(const ScalarField& a, const ScalarField& b) {
  double s = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) s += a[c] * b[c];
  return s;
}

inline double raw_dot(const VectorField& a, const VectorField& b) {
  double s = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) s += a.data()[c] * b.data()[c];
  return s;
}

inline double max_abs_diff(const VectorField& a, const VectorField& b) {
  double m = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c)
    m = std::max(m, std::abs(a.data()[c] - b.data()[c]));
  return m;
}

inline double max_abs_diff(const ScalarField& a, const ScalarField& b) {
  double m = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c)
    m = std::max(m, std::abs(a[c] - b[c]));
  return m;
}

}  // namespace testutil
