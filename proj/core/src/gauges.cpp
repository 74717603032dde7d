#include "fieldmech/gauges.hpp"

#include "fieldmech/operators.hpp"

namespace fieldmech {

namespace {

const std::function<double(double)> kUnit = [](double) { return 1.0; };
const std::function<double(double)> kLinear = [](double u) { return u; };

}  // namespace

VectorField poincare_vector_potential(const VectorField& B, int nodes) {
  const Grid& g = B.grid();
  VectorField A(g);
  for (int k = 0; k < g.nz(); ++k)
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        Vec3 x = g.center(i, j, k);
        if (!g.in_safe_region(x)) continue;
        Vec3 m = line_integral(B, x, kLinear, nodes);
        A.set(i, j, k, -x.cross(m));
      }
  return A;
}

ScalarField poincare_scalar_potential(const VectorField& E, int nodes) {
  const Grid& g = E.grid();
  ScalarField phi(g);
  for (int k = 0; k < g.nz(); ++k)
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        Vec3 x = g.center(i, j, k);
        if (!g.in_safe_region(x)) continue;
        phi(i, j, k) = -x.dot(line_integral(E, x, kUnit, nodes));
      }
  return phi;
}

ScalarField gauge_generator(const VectorField& Atrans, int nodes) {
  const Grid& g = Atrans.grid();
  ScalarField lam(g);
  for (int k = 0; k < g.nz(); ++k)
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        Vec3 x = g.center(i, j, k);
        if (!g.in_safe_region(x)) continue;
        lam(i, j, k) = -x.dot(line_integral(Atrans, x, kUnit, nodes));
      }
  return lam;
}

double gauge_residual(const VectorField& A, GaugeKind kind) {
  const Grid& g = A.grid();
  if (kind == GaugeKind::Coulomb)
    return interior_max_abs(divergence(A), kVerifyMargin);
  double m = 0.0;
  for (int k = kVerifyMargin; k < g.nz() - kVerifyMargin; ++k)
    for (int j = kVerifyMargin; j < g.ny() - kVerifyMargin; ++j)
      for (int i = kVerifyMargin; i < g.nx() - kVerifyMargin; ++i) {
        Vec3 x = g.center(i, j, k);
        m = std::max(m, std::abs(x.dot(A.vec(i, j, k))));
      }
  return m;
}

double gauge_residual(const FieldState& s, GaugeKind kind) {
  return gauge_residual(s.A, kind);
}

}  // namespace fieldmech
