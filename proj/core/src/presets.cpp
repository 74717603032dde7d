#include "fieldmech/presets.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "fieldmech/deposit.hpp"
#include "fieldmech/helmholtz.hpp"
#include "fieldmech/operators.hpp"

namespace fieldmech {

namespace {

// (1 - t^2)^5 on |t| < 1: four continuous derivatives at the support edge,
// enough for clean h^2 refinement of any stencil applied to it.
double bump(double t) {
  double s = 1.0 - t * t;
  if (s <= 0.0) return 0.0;
  double s2 = s * s;
  return s2 * s2 * s;
}

double window_at(const Grid& g, const Vec3& x, double frac) {
  double w = 1.0;
  for (int a = 0; a < 3; ++a) {
    double half = 0.5 * (g.dim(a) - 1) * g.spacing();
    w *= bump(x[a] / (frac * half));
  }
  return w;
}

// Fixed smooth profile; salt shifts the phases so distinct packets stay
// deterministic.
Vec3 packet_profile(const Vec3& x, unsigned salt) {
  const double s = 0.7 * salt;
  return {std::cos(1.3 * x.x - 0.8 * x.y + 0.5 * x.z + 0.3 + s),
          std::sin(0.9 * x.x + 1.1 * x.y - 0.6 * x.z + 1.1 + 2.0 * s),
          std::cos(-0.7 * x.x + 0.4 * x.y + 1.2 * x.z + 2.3 + 3.0 * s)};
}

VectorField sample_profile(const Grid& g, double amplitude, unsigned salt) {
  VectorField f(g);
  for (int k = 0; k < g.nz(); ++k)
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        Vec3 x = g.center(i, j, k);
        Vec3 v = packet_profile(x, salt) * (amplitude * window_at(g, x, 0.7));
        f.set(i, j, k, v);
      }
  return f;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  // Explicit construction instead of std::uniform_real_distribution keeps
  // streams identical across standard libraries.
  double u = (rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

struct TrigMode {
  Vec3 k;
  double phase;
  double weight;
};

std::vector<TrigMode> draw_modes(std::mt19937_64& rng, int count) {
  std::vector<TrigMode> modes(count);
  for (auto& m : modes) {
    for (int a = 0; a < 3; ++a) m.k[a] = uniform(rng, -2.0, 2.0);
    m.phase = uniform(rng, 0.0, 6.283185307179586);
    m.weight = uniform(rng, -1.0, 1.0);
  }
  return modes;
}

}  // namespace

ScalarField bump_window(const Grid& g, double support_frac) {
  if (!(support_frac > 0.0))
    throw Error("bump_window: support_frac must be positive");
  ScalarField w(g);
  for (int k = 0; k < g.nz(); ++k)
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i)
        w(i, j, k) = window_at(g, g.center(i, j, k), support_frac);
  return w;
}

std::pair<VectorField, VectorField> wavepacket_fields(const Grid& g,
                                                      double amplitude,
                                                      unsigned salt) {
  VectorField U = sample_profile(g, amplitude, salt);
  VectorField W = sample_profile(g, amplitude, salt + 17u);
  return {curl(U), curl(W)};
}

ScalarField random_scalar(const Grid& g, std::mt19937_64& rng,
                          double amplitude) {
  auto modes = draw_modes(rng, 6);
  ScalarField f(g);
  for (int k = 0; k < g.nz(); ++k)
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        Vec3 x = g.center(i, j, k);
        double v = 0.0;
        for (const auto& m : modes) v += m.weight * std::sin(m.k.dot(x) + m.phase);
        f(i, j, k) = amplitude * window_at(g, x, 0.7) * v;
      }
  return f;
}

VectorField random_vector(const Grid& g, std::mt19937_64& rng,
                          double amplitude) {
  VectorField f(g);
  for (int comp = 0; comp < 3; ++comp) {
    ScalarField c = random_scalar(g, rng, amplitude);
    for (std::size_t i = 0; i < c.size(); ++i) f.at(comp, i) = c[i];
  }
  return f;
}

FieldState random_state(const Grid& g, std::mt19937_64& rng, double q,
                        double amplitude) {
  FieldState s(g);
  s.A = random_vector(g, rng, amplitude);
  s.pi = random_vector(g, rng, amplitude);
  s.particle.q = q;
  if (q != 0.0) {
    // Uniform in fractional-index space: the safe region is asymmetric (the
    // deposit kernel spans one extra cell upward), so a centered box won't do.
    for (int a = 0; a < 3; ++a) {
      double lo = kSafeMargin + 0.1;
      double hi = g.dim(a) - 1 - kSafeMargin - 1 - 0.1;
      double u = uniform(rng, lo, hi);
      s.particle.r[a] = (u - (g.dim(a) - 1) / 2) * g.spacing();
    }
    if (!g.in_safe_region(s.particle.r))
      throw Error("random_state: drew a position outside the safe region");
    for (int a = 0; a < 3; ++a) s.particle.P[a] = uniform(rng, -0.1, 0.1);
  }
  return s;
}

FieldState bound_state(const Grid& g, double q, const Vec3& r0, double m) {
  if (!g.in_safe_region(r0))
    throw Error("bound_state: charge outside the safe region");
  FieldState s(g);
  s.particle.q = q;
  s.particle.m = m;
  s.particle.r = r0;
  ScalarField rho = deposit_point(q, r0, g);
  for (std::size_t c = 0; c < rho.size(); ++c) rho[c] /= s.eps0;
  s.phi = solve_poisson(rho);
  VectorField gphi = gradient(s.phi);
  for (std::size_t c = 0; c < s.pi.size(); ++c)
    s.pi.data()[c] = s.eps0 * gphi.data()[c];
  return s;
}

FieldState chain_probe_state(const Grid& g, unsigned seed) {
  FieldState s(g);
  s.particle.q = 1.0;
  s.particle.r = Vec3{0.0, 0.0, 0.0};
  std::mt19937_64 rng(seed);
  s.pi = random_vector(g, rng, 0.5);
  return s;
}

Functional random_linear_functional(const Grid& g, std::mt19937_64& rng) {
  Vec3 cr, cP;
  for (int a = 0; a < 3; ++a) {
    cr[a] = uniform(rng, -1.0, 1.0);
    cP[a] = uniform(rng, -1.0, 1.0);
  }
  auto wA = std::make_shared<VectorField>(random_vector(g, rng, 1.0));
  auto wpi = std::make_shared<VectorField>(random_vector(g, rng, 1.0));

  Functional F;
  F.value = [g, cr, cP, wA, wpi](const FieldState& s) {
    require_same_grid(g, s.grid(), "random_linear_functional");
    double v = cr.dot(s.particle.r) + cP.dot(s.particle.P);
    const double vol = g.cell_volume();
    for (std::size_t c = 0; c < s.A.size(); ++c)
      v += (wA->data()[c] * s.A.data()[c] + wpi->data()[c] * s.pi.data()[c]) *
           vol;
    return v;
  };
  F.gradient = [g, cr, cP, wA, wpi](const FieldState& s) {
    require_same_grid(g, s.grid(), "random_linear_functional");
    StateGradient sg(g);
    sg.d_r = cr;
    sg.d_P = cP;
    sg.d_A = *wA;
    sg.d_pi = *wpi;
    return sg;
  };
  return F;
}

}  // namespace fieldmech
