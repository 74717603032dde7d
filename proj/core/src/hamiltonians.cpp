#include "fieldmech/hamiltonians.hpp"

#include <cmath>

#include "fieldmech/gauges.hpp"
#include "fieldmech/operators.hpp"

namespace fieldmech {

namespace {

const auto kUnitWeight = [](double) { return 1.0; };
const auto kLinearWeight = [](double u) { return u; };

void add_scaled(VectorField& dst, const VectorField& src, double scale) {
  const std::size_t n = dst.size();
  for (std::size_t i = 0; i < n; ++i) dst.data()[i] += scale * src.data()[i];
}

struct KineticTerms {
  double energy;
  Vec3 v;  // velocity (P - qA(r))/m
};

// Minimal-coupling kinetic block: energy, velocity, and its r/P/A gradient
// contributions accumulated into g.
KineticTerms minimal_kinetic(const FieldState& s, StateGradient& g) {
  const ParticleState& pt = s.particle;
  Vec3 kin_mom = pt.P;
  if (pt.q != 0.0) kin_mom -= pt.q * interpolate(s.A, pt.r);
  Vec3 v = kin_mom / pt.m;
  g.d_P += v;
  if (pt.q != 0.0) {
    auto J = interpolate_jacobian(s.A, pt.r);
    for (int j = 0; j < 3; ++j) {
      double acc = 0.0;
      for (int i = 0; i < 3; ++i) acc += v[i] * J[i][j];
      g.d_r[j] -= pt.q * acc;
    }
    ScalarField w = deposit_point(1.0, pt.r, s.grid());
    const std::size_t cells = s.grid().cell_count();
    for (int comp = 0; comp < 3; ++comp)
      for (std::size_t c = 0; c < cells; ++c)
        g.d_A.at(comp, c) -= pt.q * v[comp] * w[c];
  }
  return {0.5 * pt.m * v.norm2(), v};
}

}  // namespace

VectorField polarization_field(const ParticleState& p, const Grid& g,
                               int nodes) {
  VectorField P(g);
  if (p.q == 0.0) return P;
  ScalarField lambda = deposit_line(1.0, p.r, g, kUnitWeight, nodes);
  const std::size_t cells = g.cell_count();
  for (int comp = 0; comp < 3; ++comp)
    for (std::size_t c = 0; c < cells; ++c)
      P.at(comp, c) = p.q * p.r[comp] * lambda[c];
  return P;
}

Vec3 radial_moment_insert(const Vec3& r, const VectorField& B, int nodes) {
  return r.cross(line_integral(B, r, kLinearWeight, nodes));
}

HamiltonianEval assemble_hamiltonian(const HamiltonianKind& kind,
                                     const FieldState& s, const Potential& V,
                                     int nodes) {
  using Variant = HamiltonianKind::Variant;
  const Grid& g = s.grid();
  const double h3 = g.cell_volume();
  const double eps0 = s.eps0;
  const ParticleState& pt = s.particle;

  HamiltonianEval out;
  out.gradient = StateGradient(g);
  StateGradient& gr = out.gradient;

  VectorField B = curl(s.A);
  double b2 = 0.0;
  for (int k = kIntegralMargin; k < g.nz() - kIntegralMargin; ++k)
    for (int j = kIntegralMargin; j < g.ny() - kIntegralMargin; ++j)
      for (int i = kIntegralMargin; i < g.nx() - kIntegralMargin; ++i)
        b2 += B.vec(i, j, k).norm2();
  double magnetic = 0.5 / s.mu0 * b2 * h3;

  auto magnetic_gradient = [&] {
    VectorField adj = curl_adjoint(B, kIntegralMargin);
    add_scaled(gr.d_A, adj, 1.0 / s.mu0);
  };

  auto for_integral_cells = [&](auto&& fn) {
    for (int k = kIntegralMargin; k < g.nz() - kIntegralMargin; ++k)
      for (int j = kIntegralMargin; j < g.ny() - kIntegralMargin; ++j)
        for (int i = kIntegralMargin; i < g.nx() - kIntegralMargin; ++i)
          fn(g.index(i, j, k));
  };

  switch (kind.variant) {
    case Variant::MinimalCouplingPsi: {
      const bool has_psi = kind.psi.size() != 0;
      if (has_psi) require_same_grid(g, kind.psi.grid(), "psi field");

      KineticTerms kin = minimal_kinetic(s, gr);
      double external = V.value(pt.r);
      gr.d_r += V.gradient(pt.r);

      double phi_coupling = 0.0;
      if (pt.q != 0.0) {
        phi_coupling = pt.q * interpolate(s.phi, pt.r);
        gr.d_r += pt.q * interpolate_gradient(s.phi, pt.r);
        ScalarField dep = deposit_point(pt.q, pt.r, g);
        const std::size_t cells = g.cell_count();
        for (std::size_t c = 0; c < cells; ++c) gr.d_phi[c] += dep[c];
      }

      VectorField grad_phi = gradient(s.phi);
      double electric_psi = 0.0, cross = 0.0;
      for_integral_cells([&](std::size_t c) {
        Vec3 pi = s.pi.vec(c);
        Vec3 psi = has_psi ? kind.psi.vec(c) : Vec3{};
        Vec3 gp = grad_phi.vec(c);
        Vec3 diff = pi - psi;
        electric_psi += 0.5 / eps0 * (2.0 * pi.norm2() - diff.norm2());
        cross -= pi.dot(gp + psi / eps0);
        Vec3 dpi = (0.5 / eps0) * (4.0 * pi - 2.0 * diff) - gp - psi / eps0;
        for (int a = 0; a < 3; ++a) gr.d_pi.at(a, c) += dpi[a];
      });
      electric_psi *= h3;
      cross *= h3;

      // - sum pi . grad(phi) differentiates through grad into phi.
      ScalarField adj = gradient_adjoint(s.pi, kIntegralMargin);
      const std::size_t cells = g.cell_count();
      for (std::size_t c = 0; c < cells; ++c) gr.d_phi[c] -= adj[c];

      magnetic_gradient();
      out.terms = {{"kinetic", kin.energy},
                   {"external", external},
                   {"phi_coupling", phi_coupling},
                   {"field_electric_psi", electric_psi},
                   {"field_magnetic", magnetic},
                   {"cross_phi_psi", cross}};
      break;
    }

    case Variant::MinimalCouplingFinal: {
      KineticTerms kin = minimal_kinetic(s, gr);
      double external = V.value(pt.r);
      gr.d_r += V.gradient(pt.r);

      double electric = 0.0;
      for_integral_cells([&](std::size_t c) {
        Vec3 pi = s.pi.vec(c);
        electric += 0.5 / eps0 * pi.norm2();
        for (int a = 0; a < 3; ++a) gr.d_pi.at(a, c) += pi[a] / eps0;
      });
      electric *= h3;

      magnetic_gradient();
      out.terms = {{"kinetic", kin.energy},
                   {"external", external},
                   {"field_electric", electric},
                   {"field_magnetic", magnetic}};
      break;
    }

    case Variant::PZW: {
      // Kinetic block with the radial-moment insert.
      Vec3 kin_mom = pt.P;
      Vec3 I{};  // integral_0^1 u B(u r) du
      if (pt.q != 0.0) {
        I = line_integral(B, pt.r, kLinearWeight, nodes);
        kin_mom += pt.q * pt.r.cross(I);
      }
      Vec3 v = kin_mom / pt.m;
      double kinetic = 0.5 * pt.m * v.norm2();
      gr.d_P += v;

      if (pt.q != 0.0) {
        // d/dr of r x I(r): the bracket term plus the moved endpoint.
        double M[3][3] = {};  // M[i][j] = d I_i / d r_j
        for (int n = 0; n < nodes; ++n) {
          double u = (n + 0.5) / nodes;
          auto J = interpolate_jacobian(B, pt.r * u);
          for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) M[i][j] += u * u * J[i][j] / nodes;
        }
        for (int j = 0; j < 3; ++j) {
          Vec3 ej{};
          ej[j] = 1.0;
          Vec3 col{M[0][j], M[1][j], M[2][j]};
          gr.d_r[j] += pt.q * v.dot(ej.cross(I) + pt.r.cross(col));
        }
        // d/dA through B: transpose of curl applied to the line-weighted
        // kernel density.
        Vec3 y = pt.q * v.cross(pt.r);
        ScalarField lam_u = deposit_line(1.0, pt.r, g, kLinearWeight, nodes);
        VectorField W(g);
        const std::size_t cells = g.cell_count();
        for (int comp = 0; comp < 3; ++comp)
          for (std::size_t c = 0; c < cells; ++c)
            W.at(comp, c) = y[comp] * lam_u[c];
        VectorField adj = curl_adjoint(W, 0);
        add_scaled(gr.d_A, adj, 1.0);
      }

      VectorField P = polarization_field(pt, g, nodes);
      double displacement = 0.0, coupling = 0.0, p_square = 0.0;
      for_integral_cells([&](std::size_t c) {
        Vec3 pf = P.vec(c);
        Vec3 D = pf - s.pi.vec(c);  // eps0 E + P with E = -pi/eps0
        displacement += 0.5 / eps0 * D.norm2();
        coupling -= D.dot(pf) / eps0;
        p_square += 0.5 / eps0 * pf.norm2();
        // The three terms collapse to pi^2/(2 eps0); their total gradient in
        // pi is pi/eps0 and their r-dependence cancels identically.
        Vec3 dpi = (pf - D) / eps0;
        for (int a = 0; a < 3; ++a) gr.d_pi.at(a, c) += dpi[a];
      });
      displacement *= h3;
      coupling *= h3;
      p_square *= h3;

      magnetic_gradient();
      out.terms = {{"kinetic", kinetic},
                   {"field_displacement", displacement},
                   {"field_magnetic", magnetic},
                   {"coupling_dp", coupling},
                   {"polarization_square", p_square}};
      break;
    }

    case Variant::PZWDipole: {
      double kinetic = 0.5 * pt.P.norm2() / pt.m;
      gr.d_P += pt.P / pt.m;

      double electric = 0.0;
      for_integral_cells([&](std::size_t c) {
        Vec3 E = s.pi.vec(c) * (-1.0 / eps0);
        electric += 0.5 * eps0 * E.norm2();
        for (int a = 0; a < 3; ++a) gr.d_pi.at(a, c) += s.pi.at(a, c) / eps0;
      });
      electric *= h3;

      magnetic_gradient();
      out.terms = {{"kinetic", kinetic},
                   {"field_electric", electric},
                   {"field_magnetic", magnetic}};
      break;
    }
  }

  out.value = 0.0;
  for (const auto& [name, val] : out.terms) out.value += val;
  return out;
}

Functional hamiltonian_functional(const HamiltonianKind& kind,
                                  const Potential& V, int nodes) {
  Functional F;
  F.value = [kind, V, nodes](const FieldState& s) {
    return assemble_hamiltonian(kind, s, V, nodes).value;
  };
  F.gradient = [kind, V, nodes](const FieldState& s) {
    return assemble_hamiltonian(kind, s, V, nodes).gradient;
  };
  return F;
}

ParticleGradient particle_hamiltonian_gradient(const HamiltonianKind& kind,
                                               const FieldState& s,
                                               const Potential& V,
                                               int nodes) {
  using Variant = HamiltonianKind::Variant;
  const ParticleState& pt = s.particle;
  ParticleGradient out;

  switch (kind.variant) {
    case Variant::MinimalCouplingPsi:
    case Variant::MinimalCouplingFinal: {
      Vec3 kin_mom = pt.P;
      if (pt.q != 0.0) kin_mom -= pt.q * interpolate(s.A, pt.r);
      Vec3 v = kin_mom / pt.m;
      out.d_P = v;
      out.d_r = V.gradient(pt.r);
      if (pt.q != 0.0) {
        auto J = interpolate_jacobian(s.A, pt.r);
        for (int j = 0; j < 3; ++j) {
          double acc = 0.0;
          for (int i = 0; i < 3; ++i) acc += v[i] * J[i][j];
          out.d_r[j] -= pt.q * acc;
        }
        if (kind.variant == Variant::MinimalCouplingPsi)
          out.d_r += pt.q * interpolate_gradient(s.phi, pt.r);
      }
      break;
    }
    case Variant::PZW: {
      Vec3 kin_mom = pt.P;
      if (pt.q != 0.0) {
        VectorField B = curl(s.A);
        Vec3 I = line_integral(B, pt.r, kLinearWeight, nodes);
        kin_mom += pt.q * pt.r.cross(I);
        Vec3 v = kin_mom / pt.m;
        out.d_P = v;
        double M[3][3] = {};
        for (int n = 0; n < nodes; ++n) {
          double u = (n + 0.5) / nodes;
          auto J = interpolate_jacobian(B, pt.r * u);
          for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) M[i][j] += u * u * J[i][j] / nodes;
        }
        for (int j = 0; j < 3; ++j) {
          Vec3 ej{};
          ej[j] = 1.0;
          Vec3 col{M[0][j], M[1][j], M[2][j]};
          out.d_r[j] = pt.q * v.dot(ej.cross(I) + pt.r.cross(col));
        }
      } else {
        out.d_P = pt.P / pt.m;
      }
      break;
    }
    case Variant::PZWDipole:
      out.d_P = pt.P / pt.m;
      break;
  }
  return out;
}

VectorField momentum_gradient_field(const HamiltonianKind& kind,
                                    const FieldState& s, int nodes) {
  using Variant = HamiltonianKind::Variant;
  const Grid& g = s.grid();
  const double eps0 = s.eps0;
  VectorField out(g);

  auto loop = [&](auto&& per_cell) {
    for (int k = kIntegralMargin; k < g.nz() - kIntegralMargin; ++k)
      for (int j = kIntegralMargin; j < g.ny() - kIntegralMargin; ++j)
        for (int i = kIntegralMargin; i < g.nx() - kIntegralMargin; ++i) {
          std::size_t c = g.index(i, j, k);
          Vec3 v = per_cell(c);
          for (int a = 0; a < 3; ++a) out.at(a, c) = v[a];
        }
  };

  switch (kind.variant) {
    case Variant::MinimalCouplingPsi: {
      const bool has_psi = kind.psi.size() != 0;
      if (has_psi) require_same_grid(g, kind.psi.grid(), "psi field");
      VectorField grad_phi = gradient(s.phi);
      loop([&](std::size_t c) {
        Vec3 pi = s.pi.vec(c);
        Vec3 psi = has_psi ? kind.psi.vec(c) : Vec3{};
        Vec3 diff = pi - psi;
        return (0.5 / eps0) * (4.0 * pi - 2.0 * diff) - grad_phi.vec(c) -
               psi / eps0;
      });
      break;
    }
    case Variant::MinimalCouplingFinal:
    case Variant::PZWDipole:
      loop([&](std::size_t c) { return s.pi.vec(c) / eps0; });
      break;
    case Variant::PZW: {
      VectorField P = polarization_field(s.particle, g, nodes);
      loop([&](std::size_t c) {
        Vec3 pf = P.vec(c);
        Vec3 D = pf - s.pi.vec(c);
        return (pf - D) / eps0;
      });
      break;
    }
  }
  return out;
}

CancellationResult pzw_cancellation_check(const FieldState& s, int nodes) {
  const Grid& g = s.grid();
  const double h3 = g.cell_volume();
  const double eps0 = s.eps0;
  VectorField P = polarization_field(s.particle, g, nodes);

  CancellationResult r;
  for (int k = kIntegralMargin; k < g.nz() - kIntegralMargin; ++k)
    for (int j = kIntegralMargin; j < g.ny() - kIntegralMargin; ++j)
      for (int i = kIntegralMargin; i < g.nx() - kIntegralMargin; ++i) {
        Vec3 pf = P.vec(i, j, k);
        Vec3 pi = s.pi.vec(i, j, k);
        Vec3 D = pf - pi;
        double d2 = 0.5 / eps0 * D.norm2();
        double dp = D.dot(pf) / eps0;
        double p2 = 0.5 / eps0 * pf.norm2();
        r.lhs += d2 - dp + p2;
        r.gross += std::fabs(d2) + std::fabs(dp) + std::fabs(p2);
        Vec3 E = pi * (-1.0 / eps0);
        r.rhs += 0.5 * eps0 * E.norm2();
      }
  r.lhs *= h3;
  r.rhs *= h3;
  r.gross *= h3;
  r.absolute = std::fabs(r.lhs - r.rhs);
  r.relative = r.absolute / std::max(r.gross, 1e-300);
  return r;
}

double a_square_check(const ParticleState& p, const VectorField& B,
                      int nodes) {
  Vec3 insert = radial_moment_insert(p.r, B, nodes);
  VectorField Ap = poincare_vector_potential(B, nodes);
  Vec3 ref = interpolate(Ap, p.r);
  Vec3 dev = insert + ref;  // insert should equal -Ap(r)
  return std::max({std::fabs(dev.x), std::fabs(dev.y), std::fabs(dev.z)});
}

double legendre_check(const FieldState& s, const VelocityData& vel,
                      const HamiltonianKind& kind, const Potential& V,
                      int nodes) {
  double H = assemble_hamiltonian(kind, s, V, nodes).value;
  double L =
      evaluate_lagrangian(s, vel, MomentumMode::IndependentVariables, V, nodes)
          .total();
  const Grid& g = s.grid();
  double pairing = s.particle.P.dot(vel.v);
  double field_pair = 0.0;
  for (int k = kIntegralMargin; k < g.nz() - kIntegralMargin; ++k)
    for (int j = kIntegralMargin; j < g.ny() - kIntegralMargin; ++j)
      for (int i = kIntegralMargin; i < g.nx() - kIntegralMargin; ++i)
        field_pair += s.pi.vec(i, j, k).dot(vel.a_dot.vec(i, j, k));
  pairing += field_pair * g.cell_volume();
  return std::fabs(H + L - pairing);
}

}  // namespace fieldmech
