#include <doctest.h>

#include <cmath>
#include <random>

#include "fieldmech/hamiltonians.hpp"
#include "fieldmech/phase_space.hpp"
#include "test_util.hpp"

using namespace fieldmech;
using namespace testutil;

namespace {

FieldState windowed_state(const Grid& g, std::uint64_t seed, double q) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  FieldState s(g);
  for (int k = 0; k < g.nz(); ++k)
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        double w = taper(g, i, j, k, 2);
        s.A.set(i, j, k, Vec3{w * u(rng), w * u(rng), w * u(rng)});
        s.pi.set(i, j, k, Vec3{w * u(rng), w * u(rng), w * u(rng)});
        s.phi(i, j, k) = w * u(rng);
      }
  s.particle.q = q;
  s.particle.m = 1.3;
  s.particle.r = Vec3{0.1, -0.05, 0.2};
  s.particle.P = Vec3{0.4, 0.1, -0.3};
  return s;
}

Functional coordinate_rx() {
  Functional F;
  F.value = [](const FieldState& s) { return s.particle.r.x; };
  F.gradient = [](const FieldState& s) {
    StateGradient g(s.grid());
    g.d_r = Vec3{1, 0, 0};
    return g;
  };
  return F;
}

Functional coordinate_px() {
  Functional F;
  F.value = [](const FieldState& s) { return s.particle.P.x; };
  F.gradient = [](const FieldState& s) {
    StateGradient g(s.grid());
    g.d_P = Vec3{1, 0, 0};
    return g;
  };
  return F;
}

// Point evaluation of one field component; functional-derivative entry is
// 1/h^3 by the gradient convention.
Functional point_eval_A(int comp, int i, int j, int k) {
  Functional F;
  F.value = [=](const FieldState& s) { return s.A.at(comp, i, j, k); };
  F.gradient = [=](const FieldState& s) {
    StateGradient g(s.grid());
    g.d_A.at(comp, i, j, k) = 1.0 / s.grid().cell_volume();
    return g;
  };
  return F;
}

Functional point_eval_pi(int comp, int i, int j, int k) {
  Functional F;
  F.value = [=](const FieldState& s) { return s.pi.at(comp, i, j, k); };
  F.gradient = [=](const FieldState& s) {
    StateGradient g(s.grid());
    g.d_pi.at(comp, i, j, k) = 1.0 / s.grid().cell_volume();
    return g;
  };
  return F;
}

Functional strip_gradient(Functional F) {
  F.gradient = nullptr;
  return F;
}

// sum over margin-1 interior of pi^2 h^3 / (2 eps0)
Functional pi_energy() {
  Functional F;
  F.value = [](const FieldState& s) {
    const Grid& g = s.grid();
    double acc = 0.0;
    for (int k = 1; k < g.nz() - 1; ++k)
      for (int j = 1; j < g.ny() - 1; ++j)
        for (int i = 1; i < g.nx() - 1; ++i)
          acc += s.pi.vec(i, j, k).dot(s.pi.vec(i, j, k));
    return acc * g.cell_volume() / (2.0 * s.eps0);
  };
  return F;
}

}  // namespace

TEST_CASE("particle coordinate pairs bracket to one") {
  Grid g(5, 5, 5, 0.5);
  FieldState s = windowed_state(g, 11, 1.0);

  Functional rx = coordinate_rx();
  Functional px = coordinate_px();
  CHECK(poisson_bracket(rx, px, s) == 1.0);
  CHECK(poisson_bracket(px, rx, s) == -1.0);

  // finite-difference fallback reproduces the analytic value
  double fd = poisson_bracket(strip_gradient(rx), strip_gradient(px), s);
  CHECK(fd == doctest::Approx(1.0).epsilon(1e-8));

  // mismatched components commute
  Functional ry;
  ry.value = [](const FieldState& st) { return st.particle.r.y; };
  CHECK(std::abs(poisson_bracket(ry, px, s)) <= 1e-10);
}

TEST_CASE("field point evaluations bracket to the lattice delta") {
  Grid g(5, 5, 5, 0.5);
  FieldState s = windowed_state(g, 12, 0.0);
  const double inv_h3 = 1.0 / g.cell_volume();
  REQUIRE(inv_h3 == 8.0);

  SUBCASE("same cell, same component") {
    for (int comp = 0; comp < 3; ++comp) {
      double br = poisson_bracket(point_eval_A(comp, 2, 2, 2),
                                  point_eval_pi(comp, 2, 2, 2), s);
      CHECK(br == doctest::Approx(inv_h3).epsilon(1e-12));
    }
  }

  SUBCASE("antisymmetric in the pair") {
    double br = poisson_bracket(point_eval_pi(1, 2, 2, 2),
                                point_eval_A(1, 2, 2, 2), s);
    CHECK(br == doctest::Approx(-inv_h3).epsilon(1e-12));
  }

  SUBCASE("different cells or components vanish") {
    CHECK(poisson_bracket(point_eval_A(0, 2, 2, 2),
                          point_eval_pi(1, 2, 2, 2), s) == 0.0);
    CHECK(poisson_bracket(point_eval_A(0, 2, 2, 2),
                          point_eval_pi(0, 3, 2, 2), s) == 0.0);
    CHECK(poisson_bracket(point_eval_A(2, 1, 2, 3),
                          point_eval_pi(2, 3, 2, 1), s) == 0.0);
  }

  SUBCASE("coordinate-coordinate and momentum-momentum vanish") {
    CHECK(poisson_bracket(point_eval_A(0, 2, 2, 2),
                          point_eval_A(1, 2, 2, 2), s) == 0.0);
    CHECK(poisson_bracket(point_eval_pi(0, 2, 2, 2),
                          point_eval_pi(0, 2, 2, 2), s) == 0.0);
  }

  SUBCASE("finite-difference fallback agrees") {
    double br = poisson_bracket(strip_gradient(point_eval_A(1, 3, 2, 2)),
                                strip_gradient(point_eval_pi(1, 3, 2, 2)), s);
    CHECK(br == doctest::Approx(inv_h3).epsilon(1e-8));
  }
}

TEST_CASE("bracket of a functional with itself is exactly zero") {
  Grid g(5, 5, 5, 0.5);
  FieldState s = windowed_state(g, 13, 1.0);

  Functional F = pi_energy();
  CHECK(poisson_bracket(F, F, s) == 0.0);

  // the full hamiltonian needs a grid whose safe region holds the particle
  Grid g9(9, 9, 9, 0.25);
  FieldState s9 = windowed_state(g9, 23, 1.0);
  Potential V{ExprAst::parse("0.5*r^2")};
  Functional H = hamiltonian_functional(HamiltonianKind::minimal_final(), V);
  CHECK(poisson_bracket(H, H, s9) == 0.0);
}

TEST_CASE("bracket is bilinear") {
  Grid g(5, 5, 5, 0.5);
  FieldState s = windowed_state(g, 14, 1.0);

  Functional F = point_eval_A(0, 2, 2, 2);
  Functional G = point_eval_A(1, 3, 2, 2);
  Functional H = pi_energy();

  const double a = 2.5, b = -0.75;
  Functional combo;
  combo.value = [=](const FieldState& st) {
    return a * F.value(st) + b * G.value(st);
  };
  double lhs = poisson_bracket(combo, H, s);
  double rhs = a * poisson_bracket(F, H, s) + b * poisson_bracket(G, H, s);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));

  // same identity with analytic gradients on the combination
  combo.gradient = [=](const FieldState& st) {
    StateGradient gf = F.gradient(st);
    StateGradient gg = G.gradient(st);
    StateGradient out(st.grid());
    for (std::size_t c = 0; c < out.d_A.size(); ++c)
      out.d_A.data()[c] = a * gf.d_A.data()[c] + b * gg.d_A.data()[c];
    return out;
  };
  CHECK(poisson_bracket(combo, H, s) ==
        doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("bracket obeys the product rule") {
  Grid g(5, 5, 5, 0.5);
  FieldState s = windowed_state(g, 15, 1.0);

  Functional F = coordinate_rx();
  Functional G = point_eval_pi(0, 2, 2, 2);
  Functional H;
  H.value = [](const FieldState& st) {
    return st.particle.P.x + st.particle.r.dot(st.particle.r);
  };

  Functional FG;
  FG.value = [=](const FieldState& st) { return F.value(st) * G.value(st); };

  double lhs = poisson_bracket(FG, H, s);
  double rhs = F.value(s) * poisson_bracket(G, H, s) +
               G.value(s) * poisson_bracket(F, H, s);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
}

TEST_CASE("hamiltonian analytic gradient matches finite differences") {
  Grid g(9, 9, 9, 0.25);
  FieldState s = windowed_state(g, 16, 1.0);
  Potential V{ExprAst::parse("0.5*r^2 + 0.1*x")};

  for (auto kind : {HamiltonianKind::minimal_final(),
                    HamiltonianKind::minimal_with_psi(g),
                    HamiltonianKind::pzw()}) {
    Functional H = hamiltonian_functional(kind, V);
    StateGradient an = functional_gradient(H, s);
    StateGradient fd = functional_gradient(strip_gradient(H), s);

    std::vector<double> fa = flatten_gradient(an);
    std::vector<double> fb = flatten_gradient(fd);
    double scale = 0.0;
    for (double x : fa) scale = std::max(scale, std::abs(x));
    REQUIRE(scale > 0.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < fa.size(); ++i)
      worst = std::max(worst, std::abs(fa[i] - fb[i]));
    CHECK(worst <= 1e-6 * scale);
  }
}

TEST_CASE("functional derivative of the field energy is the field itself") {
  Grid g(7, 7, 7, 0.5);
  FieldState s = windowed_state(g, 17, 0.0);
  s.eps0 = 2.0;

  StateGradient fd = functional_gradient(pi_energy(), s);
  double scale = 0.0;
  for (std::size_t c = 0; c < s.pi.size(); ++c)
    scale = std::max(scale, std::abs(s.pi.data()[c]));

  for (int k = 0; k < g.nz(); ++k)
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        bool in_sum = i >= 1 && i < g.nx() - 1 && j >= 1 && j < g.ny() - 1 &&
                      k >= 1 && k < g.nz() - 1;
        Vec3 got = fd.d_pi.vec(i, j, k);
        if (in_sum) {
          Vec3 want = (1.0 / s.eps0) * s.pi.vec(i, j, k);
          CHECK(std::abs(got.x - want.x) <= 1e-6 * scale);
          CHECK(std::abs(got.y - want.y) <= 1e-6 * scale);
          CHECK(std::abs(got.z - want.z) <= 1e-6 * scale);
        } else {
          // boundary shell never enters the sum: differences are exactly 0
          CHECK(got.x == 0.0);
          CHECK(got.y == 0.0);
          CHECK(got.z == 0.0);
        }
      }

  // a pi-only functional has identically zero derivatives elsewhere
  for (std::size_t c = 0; c < fd.d_A.size(); ++c)
    CHECK(fd.d_A.data()[c] == 0.0);
  for (std::size_t c = 0; c < fd.d_phi.size(); ++c) {
    CHECK(fd.d_phi[c] == 0.0);
    CHECK(fd.d_pi_phi[c] == 0.0);
  }
  CHECK(fd.d_r.x == 0.0);
  CHECK(fd.d_P.x == 0.0);
}

TEST_CASE("jacobi identity closes on quadratic functionals") {
  Grid g(5, 5, 5, 0.5);
  FieldState s = windowed_state(g, 18, 0.0);

  Functional F = pi_energy();
  F.gradient = [](const FieldState& st) {
    StateGradient out(st.grid());
    const Grid& gg = st.grid();
    for (int k = 1; k < gg.nz() - 1; ++k)
      for (int j = 1; j < gg.ny() - 1; ++j)
        for (int i = 1; i < gg.nx() - 1; ++i)
          out.d_pi.set(i, j, k, (1.0 / st.eps0) * st.pi.vec(i, j, k));
    return out;
  };

  Functional G;
  G.value = [](const FieldState& st) {
    const Grid& gg = st.grid();
    double acc = 0.0;
    for (int k = 1; k < gg.nz() - 1; ++k)
      for (int j = 1; j < gg.ny() - 1; ++j)
        for (int i = 1; i < gg.nx() - 1; ++i)
          acc += st.A.vec(i, j, k).dot(st.A.vec(i, j, k));
    return 0.5 * acc * gg.cell_volume();
  };
  G.gradient = [](const FieldState& st) {
    StateGradient out(st.grid());
    const Grid& gg = st.grid();
    for (int k = 1; k < gg.nz() - 1; ++k)
      for (int j = 1; j < gg.ny() - 1; ++j)
        for (int i = 1; i < gg.nx() - 1; ++i)
          out.d_A.set(i, j, k, st.A.vec(i, j, k));
    return out;
  };

  const Vec3 ca{0.3, -0.2, 0.5}, cp{-0.4, 0.1, 0.2};
  Functional H;
  H.value = [=](const FieldState& st) {
    const Grid& gg = st.grid();
    double acc = 0.0;
    for (int k = 1; k < gg.nz() - 1; ++k)
      for (int j = 1; j < gg.ny() - 1; ++j)
        for (int i = 1; i < gg.nx() - 1; ++i)
          acc += ca.dot(st.A.vec(i, j, k)) + cp.dot(st.pi.vec(i, j, k));
    return acc * gg.cell_volume();
  };

  auto bracket_functional = [&](const Functional& X, const Functional& Y) {
    Functional out;
    out.value = [&X, &Y](const FieldState& st) {
      return poisson_bracket(X, Y, st);
    };
    return out;
  };

  double t1 = poisson_bracket(F, bracket_functional(G, H), s);
  double t2 = poisson_bracket(G, bracket_functional(H, F), s);
  double t3 = poisson_bracket(H, bracket_functional(F, G), s);
  double scale = std::max({std::abs(t1), std::abs(t2), std::abs(t3), 1.0});
  CHECK(std::abs(t1 + t2 + t3) <= 1e-8 * scale);
}

TEST_CASE("flat layout round trips and pairs consistently") {
  Grid g(5, 5, 5, 0.5);
  FieldState s = windowed_state(g, 19, 1.0);
  StateLayout lay(g);
  REQUIRE(lay.dim() == 6 + 8 * g.cell_count());

  SUBCASE("displacing one flat coordinate moves exactly one entry") {
    std::vector<double> before = flatten_state(s);
    std::vector<double> dir(lay.dim(), 0.0);
    std::size_t target = lay.pi_off() + 7;  // some pi entry
    dir[target] = 1.0;
    FieldState moved = s;
    displace_state(moved, dir, 0.5);
    std::vector<double> after = flatten_state(moved);
    for (std::size_t i = 0; i < before.size(); ++i) {
      if (i == target)
        CHECK(after[i] == before[i] + 0.5);
      else
        CHECK(after[i] == before[i]);
    }
  }

  SUBCASE("flat pairing matches the structured pairing") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    StateGradient ga(g), gb(g);
    ga.d_r = Vec3{u(rng), u(rng), u(rng)};
    ga.d_P = Vec3{u(rng), u(rng), u(rng)};
    gb.d_r = Vec3{u(rng), u(rng), u(rng)};
    gb.d_P = Vec3{u(rng), u(rng), u(rng)};
    for (std::size_t c = 0; c < ga.d_A.size(); ++c) {
      ga.d_A.data()[c] = u(rng);
      ga.d_pi.data()[c] = u(rng);
      gb.d_A.data()[c] = u(rng);
      gb.d_pi.data()[c] = u(rng);
    }
    for (std::size_t c = 0; c < ga.d_phi.size(); ++c) {
      ga.d_phi[c] = u(rng);
      ga.d_pi_phi[c] = u(rng);
      gb.d_phi[c] = u(rng);
      gb.d_pi_phi[c] = u(rng);
    }
    double structured = symplectic_pairing(ga, gb);
    double flat =
        symplectic_pairing_flat(flatten_gradient(ga), flatten_gradient(gb), g);
    CHECK(structured == doctest::Approx(flat).epsilon(1e-13));
    // antisymmetry
    CHECK(symplectic_pairing(gb, ga) ==
          doctest::Approx(-structured).epsilon(1e-13));
  }
}
