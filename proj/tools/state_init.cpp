#include "state_init.hpp"

#include "fieldmech/deposit.hpp"
#include "fieldmech/gauges.hpp"
#include "fieldmech/helmholtz.hpp"
#include "fieldmech/presets.hpp"

namespace fieldmech::tools {

namespace {

FieldState from_eb(const Grid& g, const VectorField& E0, const VectorField& B0,
                   const ModelConfig& cfg) {
  FieldState s(g);
  s.eps0 = cfg.eps0;
  s.mu0 = cfg.mu0;
  s.particle = ParticleState{cfg.position, cfg.momentum, cfg.charge, cfg.mass};
  VectorField A_p = poincare_vector_potential(B0, cfg.quadrature_nodes);
  if (cfg.gauge == GaugeKind::Poincare) {
    s.A = A_p;
    s.phi = poincare_scalar_potential(E0, cfg.quadrature_nodes);
  } else {
    s.A = decompose(A_p, cfg.poisson_tol).transverse;
    if (cfg.charge != 0.0) {
      ScalarField rho = deposit_point(cfg.charge, cfg.position, g);
      for (std::size_t c = 0; c < rho.size(); ++c) rho[c] /= s.eps0;
      s.phi = solve_poisson(rho, cfg.poisson_tol);
    }
  }
  for (std::size_t c = 0; c < s.pi.size(); ++c)
    s.pi.data()[c] = -s.eps0 * E0.data()[c];
  return s;
}

}  // namespace

FieldState build_state(const ModelConfig& cfg) {
  Grid g = cfg.make_grid();
  if (cfg.fields.from_expressions) {
    VectorField E0(g), B0(g);
    for (int k = 0; k < g.nz(); ++k)
      for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
          Bindings b = Bindings::at(g.center(i, j, k));
          Vec3 e, bb;
          for (int comp = 0; comp < 3; ++comp) {
            if (!cfg.fields.electric[comp].empty())
              e[comp] = cfg.fields.electric[comp].eval(b);
            if (!cfg.fields.magnetic[comp].empty())
              bb[comp] = cfg.fields.magnetic[comp].eval(b);
          }
          E0.set(i, j, k, e);
          B0.set(i, j, k, bb);
        }
    return from_eb(g, E0, B0, cfg);
  }
  switch (cfg.fields.preset) {
    case FieldInit::Preset::Zero: {
      FieldState s(g);
      s.eps0 = cfg.eps0;
      s.mu0 = cfg.mu0;
      s.particle =
          ParticleState{cfg.position, cfg.momentum, cfg.charge, cfg.mass};
      return s;
    }
    case FieldInit::Preset::Wavepacket: {
      auto fields = wavepacket_fields(g, 0.01);
      return from_eb(g, fields.first, fields.second, cfg);
    }
    case FieldInit::Preset::Bound: {
      FieldState s = bound_state(g, cfg.charge, cfg.position, cfg.mass);
      // The preset solves in units where eps0 = 1; phi scales as 1/eps0
      // while pi = eps0 * grad(phi) is unchanged.
      if (cfg.eps0 != 1.0)
        for (std::size_t c = 0; c < s.phi.size(); ++c) s.phi[c] /= cfg.eps0;
      s.eps0 = cfg.eps0;
      s.mu0 = cfg.mu0;
      s.particle.P = cfg.momentum;
      return s;
    }
  }
  throw Error("build_state: unknown field preset");
}

}  // namespace fieldmech::tools
