#include <doctest.h>

#include <cmath>
#include <random>

#include "fieldmech/deposit.hpp"
#include "fieldmech/operators.hpp"
#include "fieldmech/presets.hpp"
#include "test_util.hpp"

using namespace fieldmech;
using testutil::sample_scalar;
using testutil::sample_vector;

TEST_CASE("point deposit at a cell center fills exactly one cell") {
  Grid g(9, 9, 9, 0.25);
  ScalarField rho = deposit_point(1.0, Vec3{0, 0, 0}, g);
  const double h3 = g.cell_volume();
  for (int k = 0; k < 9; ++k)
    for (int j = 0; j < 9; ++j)
      for (int i = 0; i < 9; ++i) {
        if (i == 4 && j == 4 && k == 4)
          CHECK(rho(i, j, k) == 1.0 / h3);
        else
          CHECK(rho(i, j, k) == 0.0);
      }
}

TEST_CASE("point deposit at a cell corner splits into eight equal weights") {
  Grid g(9, 9, 9, 0.25);
  const double h = g.spacing();
  // Half-cell offsets on every axis: all eight weights are exactly 1/8,
  // and 1/(8 h^3) is a power of two at h = 0.25, so equality is exact.
  ScalarField rho = deposit_point(1.0, Vec3{h / 2, h / 2, h / 2}, g);
  int nonzero = 0;
  for (int k = 0; k < 9; ++k)
    for (int j = 0; j < 9; ++j)
      for (int i = 0; i < 9; ++i)
        if (rho(i, j, k) != 0.0) {
          ++nonzero;
          CHECK(rho(i, j, k) == 1.0 / (8.0 * g.cell_volume()));
          CHECK(i >= 4);
          CHECK(i <= 5);
          CHECK(j >= 4);
          CHECK(j <= 5);
          CHECK(k >= 4);
          CHECK(k <= 5);
        }
  CHECK(nonzero == 8);
}

TEST_CASE("point deposit conserves total charge") {
  Grid g(9, 9, 9, 0.25);
  ScalarField rho = deposit_point(-2.0, Vec3{0.125, -0.2, 0.07}, g);
  double total = 0.0;
  for (std::size_t c = 0; c < rho.size(); ++c) total += rho[c];
  total *= g.cell_volume();
  CHECK(total == doctest::Approx(-2.0).epsilon(1e-14));
}

TEST_CASE("point deposit rejects unsafe and non-finite positions") {
  Grid g(9, 9, 9, 0.25);
  CHECK_THROWS_AS(deposit_point(1.0, Vec3{2.0, 0, 0}, g), Error);
  CHECK_THROWS_AS(
      deposit_point(1.0, Vec3{std::nan(""), 0, 0}, g), Error);
  CHECK_THROWS_AS(
      deposit_point(std::numeric_limits<double>::infinity(), Vec3{}, g),
      Error);
}

TEST_CASE("line deposit integrates its weight against the segment") {
  Grid g(15, 15, 15, 0.25);
  const Vec3 r{1.0, 0.0, 0.0};

  SUBCASE("unit weight sums to one") {
    ScalarField lam = deposit_line(1.0, r, g, [](double) { return 1.0; });
    double total = 0.0;
    for (std::size_t c = 0; c < lam.size(); ++c) total += lam[c];
    total *= g.cell_volume();
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
  }

  SUBCASE("weight u sums to one half") {
    ScalarField lam = deposit_line(1.0, r, g, [](double u) { return u; });
    double total = 0.0;
    for (std::size_t c = 0; c < lam.size(); ++c) total += lam[c];
    total *= g.cell_volume();
    CHECK(total == doctest::Approx(0.5).epsilon(1e-10));
  }

  SUBCASE("support hugs the segment") {
    ScalarField lam = deposit_line(1.0, r, g, [](double) { return 1.0; });
    // Segment runs from the origin cell (7,7,7) to (11,7,7); the kernel
    // leaves exact zeros off-axis because the y and z offsets vanish.
    for (int k = 0; k < 15; ++k)
      for (int j = 0; j < 15; ++j)
        for (int i = 0; i < 15; ++i)
          if (lam(i, j, k) != 0.0) {
            CHECK(i >= 7);
            CHECK(i <= 11);
            CHECK(j == 7);
            CHECK(k == 7);
          }
  }

  SUBCASE("segment leaving the safe region throws") {
    CHECK_THROWS_AS(
        deposit_line(1.0, Vec3{5.0, 0, 0}, g, [](double) { return 1.0; }),
        Error);
  }
}

TEST_CASE("interpolation is exact on constant and linear fields") {
  Grid g(9, 9, 9, 0.25);
  ScalarField c = sample_scalar(g, [](Vec3) { return 2.5; });
  CHECK(interpolate(c, Vec3{0.11, -0.07, 0.2}) == doctest::Approx(2.5).epsilon(1e-14));

  ScalarField lin = sample_scalar(
      g, [](Vec3 p) { return 1.0 + 2.0 * p.x - 0.5 * p.y + 0.25 * p.z; });
  Vec3 x{0.1, -0.2, 0.15};
  double want = 1.0 + 2.0 * x.x - 0.5 * x.y + 0.25 * x.z;
  CHECK(interpolate(lin, x) == doctest::Approx(want).epsilon(1e-13));

  VectorField v = sample_vector(
      g, [](Vec3 p) { return Vec3{p.x, 2.0 * p.y, p.z - p.x}; });
  Vec3 got = interpolate(v, x);
  CHECK(got.x == doctest::Approx(x.x).epsilon(1e-13));
  CHECK(got.y == doctest::Approx(2.0 * x.y).epsilon(1e-13));
  CHECK(got.z == doctest::Approx(x.z - x.x).epsilon(1e-13));

  CHECK_THROWS_AS(interpolate(c, Vec3{2.0, 0, 0}), Error);
}

TEST_CASE("interpolation is the transpose of deposit") {
  Grid g(9, 9, 9, 0.25);
  std::mt19937_64 rng(29);
  ScalarField f = random_scalar(g, rng, 1.0);
  Vec3 x{0.12, -0.31, 0.05};
  const double q = 0.7;
  ScalarField rho = deposit_point(q, x, g);
  // sum_c rho_c f_c h^3 = q * interp(f, x): same kernel weights both ways.
  double lhs = 0.0;
  for (std::size_t c = 0; c < f.size(); ++c) lhs += rho[c] * f[c];
  lhs *= g.cell_volume();
  double rhs = q * interpolate(f, x);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
}

TEST_CASE("interpolated jacobian and gradient are exact on linear fields") {
  Grid g(9, 9, 9, 0.25);
  ScalarField lin = sample_scalar(
      g, [](Vec3 p) { return 0.3 * p.x - 1.2 * p.y + 0.9 * p.z; });
  Vec3 x{0.11, 0.04, -0.17};
  Vec3 gr = interpolate_gradient(lin, x);
  CHECK(gr.x == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(gr.y == doctest::Approx(-1.2).epsilon(1e-12));
  CHECK(gr.z == doctest::Approx(0.9).epsilon(1e-12));

  VectorField v = sample_vector(g, [](Vec3 p) {
    return Vec3{p.y, p.z - 2.0 * p.x, 0.5 * p.x};
  });
  auto rows = interpolate_jacobian(v, x);
  // rows[c] = grad of component c
  CHECK(rows[0].x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(rows[0].y == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rows[1].x == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(rows[1].z == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rows[2].x == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("line integral of scalar fields along the radial segment") {
  Grid g(15, 15, 15, 0.25);
  auto unit = [](double) { return 1.0; };

  SUBCASE("constant integrand") {
    ScalarField f = sample_scalar(g, [](Vec3) { return 3.25; });
    double got = line_integral(f, Vec3{1.0, 0, 0}, unit, 64);
    CHECK(got == doctest::Approx(3.25).epsilon(1e-12));
  }

  SUBCASE("u-weighted linear integrand shows the 1/(12 n^2) midpoint tail") {
    // f linear keeps interpolation exact, so the only error left is the
    // composite-midpoint tail on the u^2 integrand: |E| = 1/(12 n^2).
    ScalarField f = sample_scalar(g, [](Vec3 p) { return p.x; });
    auto ramp = [](double u) { return u; };
    double coarse = line_integral(f, Vec3{1.0, 0, 0}, ramp, 8);
    double fine = line_integral(f, Vec3{1.0, 0, 0}, ramp, 4096);
    CHECK(std::abs(coarse - 1.0 / 3.0) <= 1.0 / (12.0 * 8 * 8) + 1e-15);
    CHECK(std::abs(coarse - 1.0 / 3.0) >= 0.5 / (12.0 * 8 * 8));
    CHECK(std::abs(fine - 1.0 / 3.0) <= 1e-8);
  }

  SUBCASE("segment leaving the safe region throws") {
    ScalarField f = sample_scalar(g, [](Vec3) { return 1.0; });
    CHECK_THROWS_AS(line_integral(f, Vec3{5.0, 0, 0}, unit, 64), Error);
  }
}

TEST_CASE("radial moment of a uniform field is exact under midpoint rule") {
  Grid g(15, 15, 15, 0.25);
  const double b0 = 0.8;
  VectorField B = sample_vector(g, [&](Vec3) { return Vec3{0, 0, b0}; });
  Vec3 r{1.0, 0.5, 0.0};
  // -r x (integral u B du) = -r x B/2: linear integrand, no quadrature error.
  Vec3 m = line_integral(B, r, [](double u) { return u; }, 64);
  Vec3 got = Vec3{0, 0, 0} - r.cross(m);
  CHECK(got.x == doctest::Approx(-0.5 * b0 * r.y).epsilon(1e-12));
  CHECK(got.y == doctest::Approx(0.5 * b0 * r.x).epsilon(1e-12));
  CHECK(std::abs(got.z) <= 1e-15);
}
