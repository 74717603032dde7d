#include "fieldmech/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string_view>

#include "json.hpp"

#include "fieldmech/constraints.hpp"
#include "fieldmech/deposit.hpp"
#include "fieldmech/dynamics.hpp"
#include "fieldmech/hamiltonians.hpp"
#include "fieldmech/lagrangian.hpp"
#include "fieldmech/operators.hpp"
#include "fieldmech/presets.hpp"

namespace fieldmech {

namespace {

constexpr double kTiny = 1e-300;
constexpr double kErrorSentinel = 9.9e99;

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string fmt(double v) { return nlohmann::json(v).dump(); }

double band_shortfall(double x, double lo, double hi) {
  return std::max({0.0, lo - x, x - hi});
}

struct Ctx {
  const ModelConfig& cfg;
  std::uint64_t seed;

  std::mt19937_64 rng_for(std::string_view id) const {
    return std::mt19937_64(seed ^ fnv1a(id));
  }
  Grid grid(int n) const { return Grid(n, n, n, cfg.spacing); }
  Potential potential() const { return Potential{cfg.potential}; }
};

// Config particle if it fits the probe grid, neutral otherwise.
ParticleState config_particle(const Ctx& ctx, const Grid& g,
                              ClaimResult& out) {
  ParticleState p{ctx.cfg.position, ctx.cfg.momentum, ctx.cfg.charge,
                  ctx.cfg.mass};
  if (p.q != 0.0 && !g.segment_in_safe_region(p.r)) {
    p = ParticleState{};
    out.detail += "config particle outside probe grid, neutral run; ";
  }
  return p;
}

struct MomentumProbe {
  FieldState s;
  VelocityData vel;
};

MomentumProbe momentum_probe(Ctx& ctx, const Grid& g, ClaimResult& out) {
  auto rng = ctx.rng_for(out.id);
  MomentumProbe p;
  p.s = FieldState(g);
  p.s.A = random_vector(g, rng, 0.05);
  p.s.phi = random_scalar(g, rng, 0.05);
  p.s.particle = config_particle(ctx, g, out);
  p.vel = VelocityData(g);
  p.vel.v = Vec3{0.03, -0.02, 0.01};
  p.vel.a_dot = random_vector(g, rng, 0.05);
  p.vel.phi_dot = random_scalar(g, rng, 0.05);
  return p;
}

double claim_dirac_mode(Ctx& ctx, ClaimResult& out) {
  Grid g = ctx.grid(9);
  MomentumProbe p = momentum_probe(ctx, g, out);
  Potential V = ctx.potential();
  CanonicalMomenta mom =
      canonical_momentum(p.s, p.vel, MomentumMode::IndependentVariables, V,
                         ctx.cfg.fd_step, ctx.cfg.quadrature_nodes);
  VectorField E = electric_field(p.s, p.vel);
  VectorField dev = mom.pi;
  for (std::size_t i = 0; i < dev.size(); ++i)
    dev.data()[i] += p.s.eps0 * E.data()[i];
  double scale = p.s.eps0 * interior_max_abs(E, kVerifyMargin);
  out.detail += "sup|pi + eps0 E| / sup|eps0 E|, 9^3 random windowed state";
  return interior_max_abs(dev, kVerifyMargin) / std::max(scale, kTiny);
}

double claim_pi_phi_vanishes(Ctx& ctx, ClaimResult& out) {
  Grid g = ctx.grid(9);
  MomentumProbe p = momentum_probe(ctx, g, out);
  CanonicalMomenta mom =
      canonical_momentum(p.s, p.vel, MomentumMode::IndependentVariables,
                         ctx.potential(), ctx.cfg.fd_step,
                         ctx.cfg.quadrature_nodes);
  out.detail += "sup|pi_phi| over all cells (phi_dot absent from the action)";
  return interior_max_abs(mom.pi_phi, 0);
}

double claim_mode_difference(Ctx& ctx, ClaimResult& out) {
  Grid g = ctx.grid(9);
  MomentumProbe p = momentum_probe(ctx, g, out);
  Potential V = ctx.potential();
  CanonicalMomenta mi =
      canonical_momentum(p.s, p.vel, MomentumMode::IndependentVariables, V,
                         ctx.cfg.fd_step, ctx.cfg.quadrature_nodes);
  CanonicalMomenta ms =
      canonical_momentum(p.s, p.vel, MomentumMode::SubstitutedConstraints, V,
                         ctx.cfg.fd_step, ctx.cfg.quadrature_nodes);
  VectorField diff = ms.pi;
  for (std::size_t i = 0; i < diff.size(); ++i)
    diff.data()[i] -= mi.pi.data()[i];
  VectorField expected =
      polarization_field(p.s.particle, g, ctx.cfg.quadrature_nodes);
  double scale = interior_max_abs(expected, kVerifyMargin);
  if (scale < 1e-14) {
    out.threshold = 1e-10;
    out.detail += "no line term at this charge/position; modes must coincide";
    return interior_max_abs(diff, kVerifyMargin);
  }
  for (std::size_t i = 0; i < diff.size(); ++i)
    diff.data()[i] += expected.data()[i];
  out.detail += "sup|diff + q r lambda| / sup|q r lambda|";
  return interior_max_abs(diff, kVerifyMargin) / scale;
}

double claim_legendre(Ctx& ctx, ClaimResult& out) {
  Grid g = ctx.grid(9);
  MomentumProbe p = momentum_probe(ctx, g, out);
  if (p.s.particle.q == 0.0) {
    p.s.particle.q = 1.0;
    p.s.particle.r = Vec3{g.spacing(), 0.0, 0.0};
  }
  Potential V = ctx.potential();
  CanonicalMomenta mom =
      canonical_momentum(p.s, p.vel, MomentumMode::IndependentVariables, V,
                         ctx.cfg.fd_step, ctx.cfg.quadrature_nodes);
  p.s.pi = mom.pi;
  p.s.particle.P = mom.p;
  out.detail += "|H + L - P.v - sum pi.a_dot| on matched data";
  return legendre_check(p.s, p.vel, HamiltonianKind::minimal_with_psi(g), V,
                        ctx.cfg.quadrature_nodes);
}

std::vector<Constraint> run_probe_chain(Ctx& ctx, const FieldState& probe) {
  Functional H = hamiltonian_functional(
      HamiltonianKind::minimal_with_psi(probe.grid()), Potential{},
      ctx.cfg.quadrature_nodes);
  ChainOptions co;
  co.fd_step = ctx.cfg.fd_step;
  return consistency_chain({standard_constraint(ConstraintId::Chi1)}, H,
                           probe, co);
}

// 9 cells per axis is the smallest grid whose safe region has the origin
// strictly inside, which the finite-difference probes around a centered
// charge need.
double claim_chain_single(Ctx& ctx, ClaimResult& out) {
  Grid g = ctx.grid(9);
  FieldState probe = chain_probe_state(g);
  auto cs = run_probe_chain(ctx, probe);
  out.detail = "9^3 unit-charge Gauss-violating probe emitted " +
               std::to_string(cs.size() - 1) + " secondaries";
  return std::abs(static_cast<double>(cs.size()) - 2.0);
}

double claim_chain_gauss(Ctx& ctx, ClaimResult& out) {
  Grid g = ctx.grid(9);
  FieldState probe = chain_probe_state(g);
  auto cs = run_probe_chain(ctx, probe);
  if (cs.size() < 2) {
    out.detail = "no secondary emitted";
    return kErrorSentinel;
  }
  ScalarField R = cs[1].residual(probe);
  ScalarField Rg = eval_constraint(ConstraintId::Chi2, probe);
  for (std::size_t c = 0; c < R.size(); ++c) R[c] -= Rg[c];
  out.detail = "L2(emitted secondary - Gauss residual) on the probe state";
  return interior_l2(R, kVerifyMargin);
}

double claim_chain_terminates(Ctx& ctx, ClaimResult& out) {
  Grid g = ctx.grid(7);
  auto rng = ctx.rng_for(out.id);
  FieldState s(g);
  s.A = random_vector(g, rng, 0.3);
  s.pi = random_vector(g, rng, 0.3);
  auto cs = run_probe_chain(ctx, s);
  out.detail = "neutral random fields: chain is {pi_phi, Gauss} and stops (" +
               std::to_string(cs.size()) + " constraints)";
  return std::abs(static_cast<double>(cs.size()) - 2.0);
}

double claim_dirac_annihilation(Ctx& ctx, ClaimResult& out) {
  Grid g = ctx.grid(5);
  auto rng = ctx.rng_for(out.id);
  FieldState s = random_state(g, rng, 0.0, 0.1);
  auto cs = standard_constraints();
  ConstraintMatrix M =
      constraint_matrix(cs, s, ctx.cfg.rank_tol, ctx.cfg.fd_step);
  Classification cls = classify(M);
  std::vector<Functional> gs;
  for (int i = 0; i < 3; ++i) gs.push_back(random_linear_functional(g, rng));
  double worst = 0.0;
  for (Eigen::Index c = 0; c < cls.second_class_basis.cols(); ++c) {
    Functional F = constraint_combination(
        cs, M, Eigen::VectorXd(cls.second_class_basis.col(c)));
    for (const auto& G : gs)
      worst = std::max(worst,
                       std::abs(dirac_bracket(F, G, cs, M, s, ctx.cfg.fd_step)));
  }
  out.detail = "5^3 neutral state, " +
               std::to_string(cls.second_class_basis.cols()) +
               " second-class combinations x 3 random linear functionals";
  return worst;
}

double claim_psi_zero(Ctx& ctx, ClaimResult& out) {
  Grid g = ctx.grid(9);
  FieldState s(g);
  s.particle = config_particle(ctx, g, out);
  AdmissibilityReport rep =
      psi_admissible(PsiField{VectorField(g)}, ctx.cfg.gauge, s);
  out.detail += std::string("zero shift field under ") +
                gauge_name(ctx.cfg.gauge) + " checks";
  return rep.admissible() ? 0.0 : 1.0;
}

double claim_psi_divergence(Ctx& ctx, ClaimResult& out) {
  Grid g = ctx.grid(9);
  double h = g.spacing();
  double q = ctx.cfg.charge != 0.0 ? ctx.cfg.charge : 1.0;
  ParticleState p{Vec3{h, 0.0, 0.0}, Vec3{}, q, ctx.cfg.mass};
  VectorField psi = polarization_field(p, g, ctx.cfg.quadrature_nodes);
  for (std::size_t i = 0; i < psi.size(); ++i) psi.data()[i] *= -1.0;
  FieldState s(g);
  s.particle = p;
  AdmissibilityReport rep = psi_admissible(PsiField{psi}, ctx.cfg.gauge, s);
  double floor = 0.1 * std::abs(q) / (h * h * h);
  out.detail = "charge-line shift: max interior |div| " +
               fmt(rep.divergence_residual) + " against floor " + fmt(floor) +
               (rep.admissible() ? "; admissibility unexpectedly passed"
                                 : "; rejected as required");
  double shortfall = std::max(0.0, floor - rep.divergence_residual);
  if (rep.admissible()) shortfall = std::max(shortfall, 1.0);
  return shortfall;
}

double claim_pzw_cancellation(Ctx& ctx, ClaimResult& out) {
  Grid g = ctx.grid(9);
  auto rng = ctx.rng_for(out.id);
  double worst = 0.0;
  for (int t = 0; t < 5; ++t) {
    FieldState s = random_state(g, rng, 1.0, 0.1);
    worst = std::max(
        worst, pzw_cancellation_check(s, ctx.cfg.quadrature_nodes).relative);
  }
  out.detail = "worst relative residual over 5 random unit-charge states";
  return worst;
}

double claim_a_square(Ctx& ctx, ClaimResult& out) {
  Grid g = ctx.grid(9);
  VectorField B(g);
  for (int k = 0; k < g.nz(); ++k)
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i)
        B.set(i, j, k, Vec3{0.1, -0.05, 0.2});
  ParticleState p{Vec3{g.spacing(), g.spacing(), 0.0}, Vec3{}, 1.0, 1.0};
  out.detail = "uniform B: kinetic insert against the radial-gauge potential";
  return a_square_check(p, B, ctx.cfg.quadrature_nodes);
}

double claim_a_square_convergence(Ctx& ctx, ClaimResult& out) {
  Grid g = ctx.grid(9);
  VectorField B = wavepacket_fields(g, 0.5, 3).second;
  Vec3 r{g.spacing(), g.spacing(), 0.0};
  Vec3 ref = radial_moment_insert(r, B, 8192);
  auto err = [&](int n) {
    Vec3 d = radial_moment_insert(r, B, n) - ref;
    return std::max({std::abs(d.x), std::abs(d.y), std::abs(d.z)});
  };
  double e16 = err(16), e32 = err(32);
  double ratio = e16 / std::max(e32, kTiny);
  out.detail = "insert quadrature error " + fmt(e16) + " -> " + fmt(e32) +
               " as nodes double (ratio " + fmt(ratio) + ")";
  return band_shortfall(ratio, 2.8, 5.7);
}

double claim_dipole_reduction(Ctx& ctx, ClaimResult& out) {
  Grid g = ctx.grid(9);
  auto rng = ctx.rng_for(out.id);
  FieldState s = random_state(g, rng, 1.0, 0.05);
  FlowOptions fo;
  fo.dt = 1e-3;
  fo.steps = 100;
  fo.monitor_stride = 100;
  fo.nodes = ctx.cfg.quadrature_nodes;
  Trajectory tr =
      hamiltonian_flow(s, HamiltonianKind::pzw_dipole(), Potential{}, fo);
  if (tr.truncated) {
    out.detail = tr.failure;
    return kErrorSentinel;
  }
  Vec3 dP = tr.final_state().particle.P - s.particle.P;
  out.detail =
      "dipole-form flow leaves the canonical momentum exactly constant "
      "(no position coupling survives the reduction)";
  return std::max({std::abs(dP.x), std::abs(dP.y), std::abs(dP.z)});
}

Trajectory drift_run(Ctx& ctx, std::string_view id) {
  Grid g = ctx.grid(9);
  auto rng = ctx.rng_for(id);
  FieldState s(g);
  s.A = random_vector(g, rng, 0.01);
  VectorField E0 = wavepacket_fields(g, 0.01, 1).first;
  for (std::size_t i = 0; i < s.pi.size(); ++i)
    s.pi.data()[i] = -s.eps0 * E0.data()[i];
  FlowOptions fo;
  fo.dt = 1e-4;
  fo.steps = 3000;
  fo.monitor_stride = 10;
  fo.gauge = ctx.cfg.gauge;
  return hamiltonian_flow(s, HamiltonianKind::minimal_final(), Potential{},
                          fo);
}

double claim_energy_drift(Ctx& ctx, ClaimResult& out) {
  Trajectory tr = drift_run(ctx, out.id);
  if (tr.truncated) {
    out.detail = tr.failure;
    return kErrorSentinel;
  }
  double e0 = tr.monitor.front().energy;
  double worst = 0.0;
  for (const auto& d : tr.monitor)
    worst = std::max(worst, std::abs(d.energy - e0));
  out.detail = "neutral wavepacket, 3000 leapfrog steps at dt 1e-4";
  return worst / std::max(std::abs(e0), kTiny);
}

double claim_chi2_growth(Ctx& ctx, ClaimResult& out) {
  Trajectory tr = drift_run(ctx, out.id);
  if (tr.truncated) {
    out.detail = tr.failure;
    return kErrorSentinel;
  }
  MonitorReport mr = constraint_monitor(tr);
  out.detail = "Gauss norm " + fmt(mr.initial) + " -> max " + fmt(mr.max) +
               " over the drift run";
  return mr.growth();
}

struct PsiRun {
  PsiCompareResult pc;
};

PsiRun psi_run(Ctx& ctx, std::string_view id) {
  Grid g = ctx.grid(9);
  auto rng = ctx.rng_for(id);
  FieldState s = bound_state(g, 1.0, Vec3{0.0, 0.0, 0.0});
  s.A = random_vector(g, rng, 0.02);
  VectorField Ew = wavepacket_fields(g, 0.02, 2).first;
  for (std::size_t i = 0; i < s.pi.size(); ++i)
    s.pi.data()[i] -= s.eps0 * Ew.data()[i];
  VectorField psi(g);
  for (int k = 0; k < g.nz(); ++k)
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i)
        psi.set(i, j, k, Vec3{0.04, -0.03, 0.02});
  FlowOptions fo;
  fo.dt = 1e-4;
  fo.steps = 300;
  fo.monitor_stride = 10;
  return {psi_trajectory_compare(s, PsiField{psi}, Potential{}, fo)};
}

double claim_psi_shift(Ctx& ctx, ClaimResult& out) {
  PsiRun r = psi_run(ctx, out.id);
  out.detail = "constant shift field over a bound charge plus wavepacket";
  return r.pc.max_state_deviation;
}

double claim_psi_energy(Ctx& ctx, ClaimResult& out) {
  PsiRun r = psi_run(ctx, out.id);
  out.detail = "energy offset " + fmt(r.pc.energy_difference) +
               " against -int psi^2/(2 eps0) = " + fmt(r.pc.expected_shift);
  return r.pc.shift_mismatch / std::max(std::abs(r.pc.expected_shift), kTiny);
}

double claim_gauge_equivalence(Ctx& ctx, ClaimResult& out) {
  Grid g = ctx.grid(9);
  auto fields = wavepacket_fields(g, 0.01, 0);
  FlowOptions fo;
  fo.dt = 1e-4;
  fo.steps = 200;
  fo.monitor_stride = 50;
  fo.nodes = ctx.cfg.quadrature_nodes;
  GaugeCompareResult gc = gauge_equivalence_compare(
      fields.first, fields.second, ParticleState{}, Potential{}, fo);
  out.detail = "E dev " + fmt(gc.e_deviation) + " / scale " + fmt(gc.e_scale) +
               ", B dev " + fmt(gc.b_deviation) + " / scale " +
               fmt(gc.b_scale);
  return gc.relative();
}

struct ClaimSpec {
  const char* id;
  SuiteName suite;
  const char* provenance;
  double threshold;
  double (*fn)(Ctx&, ClaimResult&);
};

const ClaimSpec kClaims[] = {
    {"bracket.dirac_annihilation", SuiteName::Constraints,
     "constraints/dirac_bracket", 1e-10, claim_dirac_annihilation},
    {"chain.secondary_is_gauss", SuiteName::Constraints,
     "constraints/consistency_chain", 1e-8, claim_chain_gauss},
    {"chain.single_secondary", SuiteName::Constraints,
     "constraints/consistency_chain", 0.0, claim_chain_single},
    {"chain.terminates", SuiteName::Constraints,
     "constraints/consistency_chain", 0.0, claim_chain_terminates},
    {"dynamics.chi2_growth", SuiteName::Dynamics,
     "dynamics/constraint_monitor", 1e-8, claim_chi2_growth},
    {"dynamics.energy_drift", SuiteName::Dynamics,
     "dynamics/hamiltonian_flow", 1e-6, claim_energy_drift},
    {"dynamics.gauge_equivalence", SuiteName::Dynamics,
     "dynamics/gauge_equivalence_compare", 0.1, claim_gauge_equivalence},
    {"dynamics.psi_energy", SuiteName::Dynamics,
     "dynamics/psi_trajectory_compare", 1e-12, claim_psi_energy},
    {"dynamics.psi_shift", SuiteName::Dynamics,
     "dynamics/psi_trajectory_compare", 1e-12, claim_psi_shift},
    {"momentum.dirac_mode", SuiteName::Momentum,
     "lagrangian/canonical_momentum", 1e-6, claim_dirac_mode},
    {"momentum.legendre", SuiteName::Momentum, "hamiltonians/legendre_check",
     1e-10, claim_legendre},
    {"momentum.mode_difference", SuiteName::Momentum,
     "lagrangian/canonical_momentum", 1e-6, claim_mode_difference},
    {"momentum.pi_phi_vanishes", SuiteName::Momentum,
     "lagrangian/canonical_momentum", 1e-12, claim_pi_phi_vanishes},
    {"psi.divergence_free", SuiteName::Constraints,
     "constraints/psi_admissible", 0.0, claim_psi_divergence},
    {"psi.zero_admissible", SuiteName::Constraints,
     "constraints/psi_admissible", 0.0, claim_psi_zero},
    {"pzw.a_square", SuiteName::Pzw, "hamiltonians/a_square_check", 1e-6,
     claim_a_square},
    {"pzw.a_square_convergence", SuiteName::Pzw,
     "hamiltonians/radial_moment_insert", 0.0, claim_a_square_convergence},
    {"pzw.cancellation", SuiteName::Pzw,
     "hamiltonians/pzw_cancellation_check", 1e-12, claim_pzw_cancellation},
    {"pzw.dipole_reduction", SuiteName::Pzw, "dynamics/hamiltonian_flow",
     1e-15, claim_dipole_reduction},
};

}  // namespace

SuiteName parse_suite(const std::string& name) {
  if (name == "all") return SuiteName::All;
  if (name == "momentum") return SuiteName::Momentum;
  if (name == "constraints") return SuiteName::Constraints;
  if (name == "pzw") return SuiteName::Pzw;
  if (name == "dynamics") return SuiteName::Dynamics;
  throw Error("unknown suite: " + name +
              " (expected all|momentum|constraints|pzw|dynamics)");
}

const char* suite_name(SuiteName s) {
  switch (s) {
    case SuiteName::All: return "all";
    case SuiteName::Momentum: return "momentum";
    case SuiteName::Constraints: return "constraints";
    case SuiteName::Pzw: return "pzw";
    case SuiteName::Dynamics: return "dynamics";
  }
  return "all";
}

std::vector<ClaimResult> run_suite(const ModelConfig& config, SuiteName suite,
                                   std::uint64_t seed) {
  Ctx ctx{config, seed};
  std::vector<ClaimResult> out;
  for (const ClaimSpec& spec : kClaims) {
    if (suite != SuiteName::All && spec.suite != suite) continue;
    ClaimResult r;
    r.id = spec.id;
    r.provenance = spec.provenance;
    r.threshold = spec.threshold;
    auto t0 = std::chrono::steady_clock::now();
    try {
      r.measured = spec.fn(ctx, r);
    } catch (const std::exception& e) {
      r.measured = kErrorSentinel;
      r.detail = e.what();
    }
    r.runtime_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    r.pass = std::isfinite(r.measured) && r.measured <= r.threshold;
    out.push_back(std::move(r));
  }
  // kClaims is kept sorted by id; enforce regardless.
  std::sort(out.begin(), out.end(),
            [](const ClaimResult& a, const ClaimResult& b) {
              return a.id < b.id;
            });
  return out;
}

namespace {

std::string digest_hex(std::uint64_t d) {
  static const char* hex = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[i] = hex[d & 0xf];
    d >>= 4;
  }
  return s;
}

}  // namespace

std::string render_report(const std::vector<ClaimResult>& rs,
                          ReportFormat format, std::uint64_t config_digest,
                          std::uint64_t seed) {
  if (format == ReportFormat::Json) {
    nlohmann::ordered_json j;
    j["version"] = 1;
    j["config_digest"] = digest_hex(config_digest);
    j["seed"] = seed;
    j["claims"] = nlohmann::ordered_json::array();
    for (const auto& r : rs) {
      nlohmann::ordered_json c;
      c["id"] = r.id;
      c["measured"] = r.measured;
      c["threshold"] = r.threshold;
      c["pass"] = r.pass;
      c["runtime_s"] = r.runtime_s;
      c["provenance"] = r.provenance;
      j["claims"].push_back(std::move(c));
    }
    return j.dump(2) + "\n";
  }
  std::string out;
  out += "# version,1\n";
  out += "# config_digest," + digest_hex(config_digest) + "\n";
  out += "# seed," + std::to_string(seed) + "\n";
  out += "id,measured,threshold,pass,runtime_s,provenance\n";
  for (const auto& r : rs) {
    out += r.id + "," + fmt(r.measured) + "," + fmt(r.threshold) + "," +
           (r.pass ? "true" : "false") + "," + fmt(r.runtime_s) + "," +
           r.provenance + "\n";
  }
  return out;
}

void emit_report(const std::vector<ClaimResult>& rs, ReportFormat format,
                 const std::string& path, std::uint64_t config_digest,
                 std::uint64_t seed) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("emit_report: cannot open " + path);
  f << render_report(rs, format, config_digest, seed);
  if (!f) throw Error("emit_report: write failed for " + path);
}

int suite_exit_code(const std::vector<ClaimResult>& rs) {
  for (const auto& r : rs)
    if (!r.pass) return 1;
  return 0;
}

}  // namespace fieldmech
