#include "fieldmech/lagrangian.hpp"

#include <cmath>

#include "fieldmech/operators.hpp"

namespace fieldmech {

double Potential::value(const Vec3& p) const {
  if (expr.empty()) return 0.0;
  return expr.eval_at(p);
}

Vec3 Potential::gradient(const Vec3& p, double fd_step) const {
  Vec3 g{};
  if (expr.empty()) return g;
  for (int a = 0; a < 3; ++a) {
    double s = fd_step * std::max(1.0, std::fabs(p[a]));
    Vec3 hi = p, lo = p;
    hi[a] += s;
    lo[a] -= s;
    g[a] = (expr.eval_at(hi) - expr.eval_at(lo)) / (2.0 * s);
  }
  return g;
}

namespace {

const auto kUnitWeight = [](double) { return 1.0; };

// B and grad(phi) are independent of every differentiated coordinate, so
// momentum extraction reuses them across all perturbed evaluations.
struct Frozen {
  VectorField B;
  VectorField grad_phi;
};

LagrangianBreakdown eval_frozen(const FieldState& s, const Frozen& fz,
                                const VelocityData& vel, MomentumMode mode,
                                const Potential& V, int nodes) {
  const Grid& g = s.grid();
  const double h3 = g.cell_volume();

  VectorField E(g);
  const std::size_t cells = g.cell_count();
  for (int comp = 0; comp < 3; ++comp)
    for (std::size_t c = 0; c < cells; ++c)
      E.at(comp, c) = -vel.a_dot.at(comp, c) - fz.grad_phi.at(comp, c);

  LagrangianBreakdown out;
  double e2 = 0.0, b2 = 0.0;
  for (int k = kIntegralMargin; k < g.nz() - kIntegralMargin; ++k)
    for (int j = kIntegralMargin; j < g.ny() - kIntegralMargin; ++j)
      for (int i = kIntegralMargin; i < g.nx() - kIntegralMargin; ++i) {
        e2 += E.vec(i, j, k).norm2();
        b2 += fz.B.vec(i, j, k).norm2();
      }
  out.electric = 0.5 * s.eps0 * e2 * h3;
  out.magnetic = -0.5 / s.mu0 * b2 * h3;

  const ParticleState& pt = s.particle;
  if (pt.q != 0.0) {
    double phi_at;
    if (mode == MomentumMode::IndependentVariables) {
      phi_at = interpolate(s.phi, pt.r);
    } else {
      phi_at = -pt.r.dot(line_integral(E, pt.r, kUnitWeight, nodes));
    }
    out.coupling = pt.q * vel.v.dot(interpolate(s.A, pt.r)) - pt.q * phi_at;
  }
  out.kinetic = 0.5 * pt.m * vel.v.norm2();
  out.external = -V.value(pt.r);
  return out;
}

}  // namespace

LagrangianBreakdown evaluate_lagrangian(const FieldState& s,
                                        const VelocityData& vel,
                                        MomentumMode mode, const Potential& V,
                                        int nodes) {
  require_same_grid(s.grid(), vel.a_dot.grid(), "evaluate_lagrangian");
  Frozen fz{curl(s.A), gradient(s.phi)};
  return eval_frozen(s, fz, vel, mode, V, nodes);
}

CanonicalMomenta canonical_momentum(const FieldState& s,
                                    const VelocityData& vel,
                                    MomentumMode mode, const Potential& V,
                                    double fd_step, int nodes) {
  s.validate("canonical_momentum");
  require_same_grid(s.grid(), vel.a_dot.grid(), "canonical_momentum");
  require_same_grid(s.grid(), vel.phi_dot.grid(), "canonical_momentum");
  if (!vel.a_dot.all_finite() || !vel.phi_dot.all_finite() ||
      !vel.v.finite())
    throw Error("canonical_momentum: non-finite velocity data");

  const Grid& g = s.grid();
  const double h3 = g.cell_volume();
  Frozen fz{curl(s.A), gradient(s.phi)};

  CanonicalMomenta out{{}, VectorField(g), ScalarField(g)};
  VelocityData work = vel;

  auto diff = [&](double* slot, double step) {
    double base = *slot;
    *slot = base + step;
    double Lp = eval_frozen(s, fz, work, mode, V, nodes).total();
    *slot = base - step;
    double Lm = eval_frozen(s, fz, work, mode, V, nodes).total();
    *slot = base;
    return (Lp - Lm) / (2.0 * step);
  };

  for (int a = 0; a < 3; ++a) {
    double st = fd_step * std::max(1.0, std::fabs(work.v[a]));
    out.p[a] = diff(&work.v[a], st);
  }

  const std::size_t cells = g.cell_count();
  for (int comp = 0; comp < 3; ++comp)
    for (std::size_t c = 0; c < cells; ++c) {
      double* slot = &work.a_dot.at(comp, c);
      double st = fd_step * std::max(1.0, std::fabs(*slot));
      out.pi.at(comp, c) = diff(slot, st) / h3;
    }

  // phi_dot never appears in the action; this measures the exact zero
  // rather than asserting it.
  for (std::size_t c = 0; c < cells; ++c) {
    double* slot = &work.phi_dot[c];
    double st = fd_step * std::max(1.0, std::fabs(*slot));
    out.pi_phi[c] = diff(slot, st) / h3;
  }

  return out;
}

VectorField electric_field(const FieldState& s, const VelocityData& vel) {
  require_same_grid(s.grid(), vel.a_dot.grid(), "electric_field");
  VectorField E = gradient(s.phi);
  const std::size_t cells = s.grid().cell_count();
  for (int comp = 0; comp < 3; ++comp)
    for (std::size_t c = 0; c < cells; ++c)
      E.at(comp, c) = -vel.a_dot.at(comp, c) - E.at(comp, c);
  return E;
}

ScalarField gauss_residual(const FieldState& s, const VelocityData& vel) {
  ScalarField res = divergence(electric_field(s, vel));
  const std::size_t cells = s.grid().cell_count();
  for (std::size_t c = 0; c < cells; ++c) res[c] *= s.eps0;
  if (s.particle.q != 0.0) {
    ScalarField rho = deposit_point(s.particle.q, s.particle.r, s.grid());
    for (std::size_t c = 0; c < cells; ++c) res[c] -= rho[c];
  }
  return res;
}

}  // namespace fieldmech
