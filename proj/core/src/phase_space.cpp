#include "fieldmech/phase_space.hpp"

#include <cmath>

namespace fieldmech {

void FieldState::validate(const char* where) const {
  if (A.grid() != pi.grid() || A.grid() != phi.grid() ||
      A.grid() != pi_phi.grid())
    throw Error(std::string(where) + ": fields on mismatched grids");
  if (!A.all_finite() || !pi.all_finite() || !phi.all_finite() ||
      !pi_phi.all_finite())
    throw Error(std::string(where) + ": non-finite field data");
  if (!particle.r.finite() || !particle.P.finite() ||
      !std::isfinite(particle.q) || !(particle.m > 0.0))
    throw Error(std::string(where) + ": bad particle data");
  if (!(eps0 > 0.0) || !(mu0 > 0.0))
    throw Error(std::string(where) + ": eps0 and mu0 must be positive");
}

namespace {

double fd_step_for(double value, double rel) {
  return rel * std::max(1.0, std::abs(value));
}

}  // namespace

StateGradient functional_gradient(const Functional& F, const FieldState& s,
                                  double fd_step) {
  if (F.gradient) return F.gradient(s);
  if (!F.value) throw Error("functional_gradient: functional has no evaluator");

  const Grid& g = s.grid();
  const double inv_v = 1.0 / g.cell_volume();
  StateGradient out(g);
  FieldState w = s;

  auto central = [&](double& slot, double scale) {
    double orig = slot;
    double step = fd_step_for(orig, fd_step);
    slot = orig + step;
    double fp = F.value(w);
    slot = orig - step;
    double fm = F.value(w);
    slot = orig;
    return scale * (fp - fm) / (2.0 * step);
  };

  for (int a = 0; a < 3; ++a) {
    out.d_r[a] = central(w.particle.r[a], 1.0);
    out.d_P[a] = central(w.particle.P[a], 1.0);
  }
  for (std::size_t c = 0; c < w.A.size(); ++c)
    out.d_A.data()[c] = central(w.A.data()[c], inv_v);
  for (std::size_t c = 0; c < w.pi.size(); ++c)
    out.d_pi.data()[c] = central(w.pi.data()[c], inv_v);
  for (std::size_t c = 0; c < w.phi.size(); ++c)
    out.d_phi.data()[c] = central(w.phi.data()[c], inv_v);
  for (std::size_t c = 0; c < w.pi_phi.size(); ++c)
    out.d_pi_phi.data()[c] = central(w.pi_phi.data()[c], inv_v);
  return out;
}

double symplectic_pairing(const StateGradient& gF, const StateGradient& gG) {
  require_same_grid(gF.d_A.grid(), gG.d_A.grid(), "symplectic_pairing");
  double acc = gF.d_r.dot(gG.d_P) - gF.d_P.dot(gG.d_r);
  double field = 0.0;
  for (std::size_t c = 0; c < gF.d_A.size(); ++c)
    field += gF.d_A.data()[c] * gG.d_pi.data()[c] -
             gF.d_pi.data()[c] * gG.d_A.data()[c];
  for (std::size_t c = 0; c < gF.d_phi.size(); ++c)
    field += gF.d_phi.data()[c] * gG.d_pi_phi.data()[c] -
             gF.d_pi_phi.data()[c] * gG.d_phi.data()[c];
  return acc + field * gF.d_A.grid().cell_volume();
}

double poisson_bracket(const Functional& F, const Functional& G,
                       const FieldState& s, double fd_step) {
  StateGradient gF = functional_gradient(F, s, fd_step);
  StateGradient gG = functional_gradient(G, s, fd_step);
  return symplectic_pairing(gF, gG);
}

std::vector<double> flatten_gradient(const StateGradient& g) {
  StateLayout L(g.d_A.grid());
  std::vector<double> v(L.dim());
  for (int a = 0; a < 3; ++a) {
    v[L.r_off() + a] = g.d_r[a];
    v[L.P_off() + a] = g.d_P[a];
  }
  std::copy(g.d_A.data(), g.d_A.data() + 3 * L.n, v.begin() + L.A_off());
  std::copy(g.d_pi.data(), g.d_pi.data() + 3 * L.n, v.begin() + L.pi_off());
  std::copy(g.d_phi.data(), g.d_phi.data() + L.n, v.begin() + L.phi_off());
  std::copy(g.d_pi_phi.data(), g.d_pi_phi.data() + L.n,
            v.begin() + L.pi_phi_off());
  return v;
}

std::vector<double> flatten_state(const FieldState& s) {
  StateLayout L(s.grid());
  std::vector<double> v(L.dim());
  for (int a = 0; a < 3; ++a) {
    v[L.r_off() + a] = s.particle.r[a];
    v[L.P_off() + a] = s.particle.P[a];
  }
  std::copy(s.A.data(), s.A.data() + 3 * L.n, v.begin() + L.A_off());
  std::copy(s.pi.data(), s.pi.data() + 3 * L.n, v.begin() + L.pi_off());
  std::copy(s.phi.data(), s.phi.data() + L.n, v.begin() + L.phi_off());
  std::copy(s.pi_phi.data(), s.pi_phi.data() + L.n,
            v.begin() + L.pi_phi_off());
  return v;
}

void displace_state(FieldState& s, const std::vector<double>& dir,
                    double scale) {
  StateLayout L(s.grid());
  if (dir.size() != L.dim()) throw Error("displace_state: dimension mismatch");
  for (int a = 0; a < 3; ++a) {
    s.particle.r[a] += scale * dir[L.r_off() + a];
    s.particle.P[a] += scale * dir[L.P_off() + a];
  }
  for (std::size_t c = 0; c < 3 * L.n; ++c) {
    s.A.data()[c] += scale * dir[L.A_off() + c];
    s.pi.data()[c] += scale * dir[L.pi_off() + c];
  }
  for (std::size_t c = 0; c < L.n; ++c) {
    s.phi.data()[c] += scale * dir[L.phi_off() + c];
    s.pi_phi.data()[c] += scale * dir[L.pi_phi_off() + c];
  }
}

double symplectic_pairing_flat(const std::vector<double>& u,
                               const std::vector<double>& v, const Grid& g) {
  StateLayout L(g);
  if (u.size() != L.dim() || v.size() != L.dim())
    throw Error("symplectic_pairing_flat: dimension mismatch");
  double acc = 0.0;
  for (int a = 0; a < 3; ++a)
    acc += u[L.r_off() + a] * v[L.P_off() + a] -
           u[L.P_off() + a] * v[L.r_off() + a];
  double field = 0.0;
  for (std::size_t c = 0; c < 3 * L.n; ++c)
    field += u[L.A_off() + c] * v[L.pi_off() + c] -
             u[L.pi_off() + c] * v[L.A_off() + c];
  for (std::size_t c = 0; c < L.n; ++c)
    field += u[L.phi_off() + c] * v[L.pi_phi_off() + c] -
             u[L.pi_phi_off() + c] * v[L.phi_off() + c];
  return acc + field * g.cell_volume();
}

}  // namespace fieldmech
