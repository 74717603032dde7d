#include "fieldmech/dynamics.hpp"

#include <cmath>

#include "fieldmech/helmholtz.hpp"
#include "fieldmech/operators.hpp"

namespace fieldmech {

namespace {

const auto kLinearWeight = [](double u) { return u; };

void add_scaled(VectorField& dst, const VectorField& src, double scale) {
  const std::size_t n = dst.size();
  for (std::size_t i = 0; i < n; ++i) dst.data()[i] += scale * src.data()[i];
}

struct Stepper {
  HamiltonianKind kind;
  Potential V;
  FlowOptions opt;

  // Particle velocity dH/dP at a position, against a supplied vector
  // potential (the drift evaluates it at the time midpoint). B_mid is only
  // consulted for the PZW insert.
  Vec3 velocity_at(const FieldState& s, const Vec3& pos,
                   const VectorField& A_mid, const VectorField* B_mid) const {
    const ParticleState& pt = s.particle;
    if (pt.q == 0.0) return pt.P / pt.m;
    switch (kind.variant) {
      case HamiltonianKind::Variant::MinimalCouplingPsi:
      case HamiltonianKind::Variant::MinimalCouplingFinal:
        return (pt.P - pt.q * interpolate(A_mid, pos)) / pt.m;
      case HamiltonianKind::Variant::PZW: {
        Vec3 I = line_integral(*B_mid, pos, kLinearWeight, opt.nodes);
        return (pt.P + pt.q * pos.cross(I)) / pt.m;
      }
      case HamiltonianKind::Variant::PZWDipole:
        return pt.P / pt.m;
    }
    return pt.P / pt.m;
  }

  // Replace the velocity-dependent part of dH/dA, evaluated at v0 inside
  // the assembled gradient, with its value at vf.
  void adjust_dA(VectorField& dA, const FieldState& s, const Vec3& v0,
                 const Vec3& vf) const {
    const ParticleState& pt = s.particle;
    if (pt.q == 0.0) return;
    Vec3 dv = vf - v0;
    if (dv.norm2() == 0.0) return;
    switch (kind.variant) {
      case HamiltonianKind::Variant::MinimalCouplingPsi:
      case HamiltonianKind::Variant::MinimalCouplingFinal: {
        ScalarField w = deposit_point(1.0, pt.r, s.grid());
        const std::size_t cells = s.grid().cell_count();
        for (int comp = 0; comp < 3; ++comp)
          for (std::size_t c = 0; c < cells; ++c)
            dA.at(comp, c) -= pt.q * dv[comp] * w[c];
        break;
      }
      case HamiltonianKind::Variant::PZW: {
        Vec3 y = pt.q * dv.cross(pt.r);
        ScalarField lam =
            deposit_line(1.0, pt.r, s.grid(), kLinearWeight, opt.nodes);
        VectorField W(s.grid());
        const std::size_t cells = s.grid().cell_count();
        for (int comp = 0; comp < 3; ++comp)
          for (std::size_t c = 0; c < cells; ++c)
            W.at(comp, c) = y[comp] * lam[c];
        add_scaled(dA, curl_adjoint(W, 0), 1.0);
        break;
      }
      case HamiltonianKind::Variant::PZWDipole:
        break;
    }
  }

  // Momentum half-kick at frozen coordinates. The particle update is a
  // short fixed-point refresh because dH/dr depends on P through the
  // velocity.
  void half_kick(FieldState& s, double tau) const {
    StateGradient g = assemble_hamiltonian(kind, s, V, opt.nodes).gradient;
    Vec3 P0 = s.particle.P;
    Vec3 v0 = g.d_P;
    Vec3 d_r = g.d_r;
    for (int it = 0; it < opt.fixed_point_iters; ++it) {
      s.particle.P = P0 - tau * d_r;
      d_r = particle_hamiltonian_gradient(kind, s, V, opt.nodes).d_r;
    }
    s.particle.P = P0 - tau * d_r;
    Vec3 vf = particle_hamiltonian_gradient(kind, s, V, opt.nodes).d_P;
    adjust_dA(g.d_A, s, v0, vf);
    const std::size_t n = s.pi.size();
    for (std::size_t i = 0; i < n; ++i)
      s.pi.data()[i] -= tau * g.d_A.data()[i];
  }

  // Coordinate drift at frozen momenta. dH/dpi does not depend on A or r,
  // so the field drift is exact; the particle sees A at the time midpoint
  // and its own midpoint position.
  void drift(FieldState& s, double dt) const {
    VectorField rate = momentum_gradient_field(kind, s, opt.nodes);
    VectorField A_mid = s.A;
    add_scaled(A_mid, rate, 0.5 * dt);

    VectorField B_mid;
    const bool needs_b = kind.variant == HamiltonianKind::Variant::PZW &&
                         s.particle.q != 0.0;
    if (needs_b) B_mid = curl(A_mid);

    Vec3 r0 = s.particle.r;
    Vec3 v = velocity_at(s, r0, A_mid, needs_b ? &B_mid : nullptr);
    for (int it = 0; it < opt.fixed_point_iters; ++it) {
      Vec3 rm = r0 + (0.5 * dt) * v;
      v = velocity_at(s, rm, A_mid, needs_b ? &B_mid : nullptr);
    }
    s.particle.r = r0 + dt * v;
    add_scaled(s.A, rate, dt);
  }

  void leapfrog_step(FieldState& s) const {
    half_kick(s, 0.5 * opt.dt);
    drift(s, opt.dt);
    half_kick(s, 0.5 * opt.dt);
  }

  struct Rate {
    Vec3 dr, dP;
    VectorField dA, dpi;
  };

  Rate rate_of(const FieldState& s) const {
    StateGradient g = assemble_hamiltonian(kind, s, V, opt.nodes).gradient;
    Rate r;
    r.dr = g.d_P;
    r.dP = -g.d_r;
    r.dA = g.d_pi;
    r.dpi = g.d_A;
    const std::size_t n = r.dpi.size();
    for (std::size_t i = 0; i < n; ++i) r.dpi.data()[i] *= -1.0;
    return r;
  }

  static void apply_rate(FieldState& s, const Rate& r, double h) {
    s.particle.r += h * r.dr;
    s.particle.P += h * r.dP;
    add_scaled(s.A, r.dA, h);
    add_scaled(s.pi, r.dpi, h);
  }

  void rk4_step(FieldState& s) const {
    const double dt = opt.dt;
    Rate k1 = rate_of(s);
    FieldState w = s;
    apply_rate(w, k1, 0.5 * dt);
    Rate k2 = rate_of(w);
    w = s;
    apply_rate(w, k2, 0.5 * dt);
    Rate k3 = rate_of(w);
    w = s;
    apply_rate(w, k3, dt);
    Rate k4 = rate_of(w);
    apply_rate(s, k1, dt / 6.0);
    apply_rate(s, k2, dt / 3.0);
    apply_rate(s, k3, dt / 3.0);
    apply_rate(s, k4, dt / 6.0);
  }

  void step(FieldState& s) const {
    if (opt.scheme == Integrator::Leapfrog)
      leapfrog_step(s);
    else
      rk4_step(s);
  }

  StepDiagnostics diagnostics(const FieldState& s, double t) const {
    StepDiagnostics d;
    d.t = t;
    d.energy = assemble_hamiltonian(kind, s, V, opt.nodes).value;
    d.chi2_norm = interior_l2(eval_constraint(ConstraintId::Chi2, s),
                              opt.constraint_margin);
    d.gauge_residual = gauge_residual(s.A, opt.gauge);
    return d;
  }
};

// Diagnostic refresh: phi from the electrostatic Poisson solve, pi_phi
// pinned. The flow itself never reads either.
void refresh_phi(FieldState& s) {
  if (s.particle.q != 0.0) {
    ScalarField rho = deposit_point(s.particle.q, s.particle.r, s.grid());
    for (std::size_t c = 0; c < rho.size(); ++c) rho[c] /= s.eps0;
    s.phi = solve_poisson(rho);
  } else {
    s.phi.fill(0.0);
  }
  s.pi_phi.fill(0.0);
}

double state_deviation(const FieldState& a, const FieldState& b) {
  double m = 0.0;
  for (int i = 0; i < 3; ++i) {
    m = std::max(m, std::abs(a.particle.r[i] - b.particle.r[i]));
    m = std::max(m, std::abs(a.particle.P[i] - b.particle.P[i]));
  }
  for (std::size_t c = 0; c < a.A.size(); ++c)
    m = std::max(m, std::abs(a.A.data()[c] - b.A.data()[c]));
  for (std::size_t c = 0; c < a.pi.size(); ++c)
    m = std::max(m, std::abs(a.pi.data()[c] - b.pi.data()[c]));
  return m;
}

}  // namespace

const FieldState& Trajectory::final_state() const {
  if (states.empty()) throw Error("Trajectory: no recorded states");
  return states.back();
}

Trajectory hamiltonian_flow(const FieldState& s0, const HamiltonianKind& kind,
                            const Potential& V, const FlowOptions& opt) {
  if (!(opt.dt > 0.0)) throw Error("hamiltonian_flow: dt must be positive");
  if (opt.steps < 1) throw Error("hamiltonian_flow: steps must be >= 1");
  if (opt.monitor_stride < 1)
    throw Error("hamiltonian_flow: monitor_stride must be >= 1");
  s0.validate("hamiltonian_flow");

  Stepper st{kind, V, opt};
  FieldState s = s0;
  s.pi_phi.fill(0.0);

  Trajectory tr;
  auto snapshot = [&](double t, const StepDiagnostics& d) {
    FieldState snap = s;
    refresh_phi(snap);
    tr.states.push_back(std::move(snap));
    tr.times.push_back(t);
    tr.diagnostics.push_back(d);
  };

  StepDiagnostics d0 = st.diagnostics(s, 0.0);
  tr.monitor.push_back(d0);
  snapshot(0.0, d0);
  const double e_ref = d0.energy;

  for (int step = 1; step <= opt.steps; ++step) {
    try {
      st.step(s);
    } catch (const Error& e) {
      tr.truncated = true;
      tr.failure = e.what();
      break;
    }
    double t = step * opt.dt;
    bool last = step == opt.steps;
    if (step % opt.monitor_stride == 0 || last) {
      StepDiagnostics d = st.diagnostics(s, t);
      tr.monitor.push_back(d);
      if (!std::isfinite(d.energy) ||
          std::abs(d.energy - e_ref) >
              opt.blowup_drift * std::max(1.0, std::abs(e_ref))) {
        tr.truncated = true;
        tr.failure = "energy blow-up at t = " + std::to_string(t);
        break;
      }
      if (last) {
        snapshot(t, d);
        break;
      }
    }
    if (opt.snapshot_stride > 0 && step % opt.snapshot_stride == 0)
      snapshot(t, st.diagnostics(s, t));
  }
  if (tr.truncated) snapshot(tr.monitor.back().t, tr.monitor.back());
  return tr;
}

MonitorReport constraint_monitor(const Trajectory& t) {
  if (t.monitor.empty()) throw Error("constraint_monitor: empty trajectory");
  MonitorReport r;
  r.initial = t.monitor.front().chi2_norm;
  r.final_value = t.monitor.back().chi2_norm;
  r.max = 0.0;
  for (const auto& d : t.monitor) r.max = std::max(r.max, d.chi2_norm);
  return r;
}

PsiCompareResult psi_trajectory_compare(const FieldState& s0,
                                        const PsiField& psi,
                                        const Potential& V,
                                        const FlowOptions& opt) {
  require_same_grid(s0.grid(), psi.psi.grid(), "psi_trajectory_compare");
  HamiltonianKind with = HamiltonianKind::minimal_with_psi(psi.psi);
  HamiltonianKind without = HamiltonianKind::minimal_with_psi(s0.grid());

  PsiCompareResult out;
  out.expected_shift =
      -0.5 / s0.eps0 * interior_inner(psi.psi, psi.psi, kIntegralMargin);

  Stepper sa{with, V, opt};
  Stepper sb{without, V, opt};
  FieldState a = s0, b = s0;
  a.pi_phi.fill(0.0);
  b.pi_phi.fill(0.0);

  auto measure = [&] {
    double ea = assemble_hamiltonian(with, a, V, opt.nodes).value;
    double eb = assemble_hamiltonian(without, b, V, opt.nodes).value;
    double diff = ea - eb;
    if (std::abs(diff) > std::abs(out.energy_difference))
      out.energy_difference = diff;
    out.shift_mismatch = std::max(out.shift_mismatch,
                                  std::abs(diff - out.expected_shift));
  };
  measure();
  for (int step = 1; step <= opt.steps; ++step) {
    sa.step(a);
    sb.step(b);
    out.max_state_deviation =
        std::max(out.max_state_deviation, state_deviation(a, b));
    if (step % opt.monitor_stride == 0 || step == opt.steps) measure();
  }
  return out;
}

double GaugeCompareResult::relative() const {
  double e = e_deviation / std::max(e_scale, 1e-300);
  double b = b_deviation / std::max(b_scale, 1e-300);
  return std::max(e, b);
}

GaugeCompareResult gauge_equivalence_compare(const VectorField& E0,
                                             const VectorField& B0,
                                             const ParticleState& particle,
                                             const Potential& V,
                                             const FlowOptions& opt) {
  const Grid& g = E0.grid();
  require_same_grid(g, B0.grid(), "gauge_equivalence_compare");

  // Initial data must satisfy the Gauss law before a comparison means
  // anything.
  ScalarField gauss = divergence(E0);
  if (particle.q != 0.0) {
    ScalarField rho = deposit_point(particle.q, particle.r, g);
    for (std::size_t c = 0; c < gauss.size(); ++c) gauss[c] -= rho[c];
  }
  double gauss_res = interior_max_abs(gauss, kVerifyMargin);
  double field_scale =
      std::max(1.0, interior_max_abs(E0, kVerifyMargin) / g.spacing());
  if (gauss_res > 1e-6 * field_scale)
    throw Error("gauge_equivalence_compare: initial Gauss residual " +
                std::to_string(gauss_res));

  VectorField A_p = poincare_vector_potential(B0, opt.nodes);
  ScalarField phi_p = poincare_scalar_potential(E0, opt.nodes);
  VectorField A_c = decompose(A_p).transverse;

  FieldState sp(g), sc(g);
  sp.A = A_p;
  sp.phi = phi_p;
  sc.A = A_c;
  sp.particle = sc.particle = particle;
  for (std::size_t c = 0; c < sp.pi.size(); ++c) {
    sp.pi.data()[c] = -sp.eps0 * E0.data()[c];
    sc.pi.data()[c] = -sc.eps0 * E0.data()[c];
  }
  if (particle.q != 0.0) {
    ScalarField rho = deposit_point(particle.q, particle.r, g);
    for (std::size_t c = 0; c < rho.size(); ++c) rho[c] /= sc.eps0;
    sc.phi = solve_poisson(rho);
    // The input P is the kinetic momentum; the canonical one is gauge
    // dependent through qA(r).
    sp.particle.P = particle.P + particle.q * interpolate(A_p, particle.r);
    sc.particle.P = particle.P + particle.q * interpolate(A_c, particle.r);
  }

  FlowOptions op = opt;
  op.gauge = GaugeKind::Poincare;
  FlowOptions oc = opt;
  oc.gauge = GaugeKind::Coulomb;
  Trajectory tp = hamiltonian_flow(sp, HamiltonianKind::minimal_final(), V, op);
  Trajectory tc = hamiltonian_flow(sc, HamiltonianKind::minimal_final(), V, oc);
  if (tp.truncated || tc.truncated)
    throw Error("gauge_equivalence_compare: flow truncated: " +
                (tp.truncated ? tp.failure : tc.failure));

  const FieldState& fp = tp.final_state();
  const FieldState& fc = tc.final_state();
  VectorField Bp = curl(fp.A), Bc = curl(fc.A);

  GaugeCompareResult res;
  for (int k = kVerifyMargin; k < g.nz() - kVerifyMargin; ++k)
    for (int j = kVerifyMargin; j < g.ny() - kVerifyMargin; ++j)
      for (int i = kVerifyMargin; i < g.nx() - kVerifyMargin; ++i) {
        Vec3 ep = fp.pi.vec(i, j, k) * (-1.0 / fp.eps0);
        Vec3 ec = fc.pi.vec(i, j, k) * (-1.0 / fc.eps0);
        Vec3 de = ep - ec;
        Vec3 db = Bp.vec(i, j, k) - Bc.vec(i, j, k);
        for (int a = 0; a < 3; ++a) {
          res.e_deviation = std::max(res.e_deviation, std::abs(de[a]));
          res.b_deviation = std::max(res.b_deviation, std::abs(db[a]));
          res.e_scale = std::max(
              {res.e_scale, std::abs(ep[a]), std::abs(ec[a])});
          res.b_scale = std::max({res.b_scale, std::abs(Bp.vec(i, j, k)[a]),
                                  std::abs(Bc.vec(i, j, k)[a])});
        }
      }
  return res;
}

}  // namespace fieldmech
