#include "fieldmech/helmholtz.hpp"

#include <cmath>

#include "fieldmech/operators.hpp"

namespace fieldmech {

namespace {

// Unknowns live on cells with margin >= 1; the boundary layer is pinned to
// zero (homogeneous Dirichlet).
constexpr int kMask = 1;

void zero_boundary_layer(ScalarField& f) {
  const Grid& g = f.grid();
  for (int k = 0; k < g.nz(); ++k)
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i)
        if (!g.interior(i, j, k, kMask)) f(i, j, k) = 0.0;
}

// N = grad^T . mask . grad restricted to the unknown cells.
ScalarField apply_normal_op(const ScalarField& chi) {
  ScalarField r = gradient_adjoint(gradient(chi), kMask);
  zero_boundary_layer(r);
  return r;
}

// diag(N), used as the Jacobi preconditioner. Computed once per grid shape
// by probing the stencil structure: the diagonal entry at cell c is the sum
// of squared gradient coefficients of rows that read c.
ScalarField normal_op_diagonal(const Grid& g) {
  ScalarField d(g);
  const double w = 1.0 / (2.0 * g.spacing());
  // Coefficient with which the gradient row at offset `along` (distance from
  // the probe cell along one axis) reads the probe cell.
  for (int k = 0; k < g.nz(); ++k)
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        if (!g.interior(i, j, k, kMask)) {
          d(i, j, k) = 1.0;  // pinned cells never enter the solve
          continue;
        }
        double acc = 0.0;
        int idx[3] = {i, j, k};
        for (int a = 0; a < 3; ++a) {
          int n = g.dim(a), p = idx[a];
          // central rows at p-1 and p+1 read p with coefficient -+w
          if (p - 1 >= kMask && g.interior(a == 0 ? p - 1 : i, a == 1 ? p - 1 : j,
                                           a == 2 ? p - 1 : k, kMask))
            acc += w * w;
          if (p + 1 <= n - 1 - kMask &&
              g.interior(a == 0 ? p + 1 : i, a == 1 ? p + 1 : j,
                         a == 2 ? p + 1 : k, kMask))
            acc += w * w;
        }
        d(i, j, k) = acc > 0.0 ? acc : 1.0;
      }
  return d;
}

double dot(const ScalarField& a, const ScalarField& b) {
  double s = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) s += a[c] * b[c];
  return s;
}

// Preconditioned CG for N x = b; b must already vanish outside the unknowns.
// floor_abs is the rounding level of the rhs assembly: a b at or below it is
// indistinguishable from a field with no gradient content, so x = 0 is the
// least-squares answer to working precision and chasing a relative target
// would only amplify noise.
ScalarField cg_solve(const ScalarField& b, double tol, int max_iter,
                     double floor_abs, int* iterations,
                     double* final_residual) {
  const Grid& g = b.grid();
  ScalarField x(g), r = b, z(g), p(g);
  ScalarField diag = normal_op_diagonal(g);

  double bnorm = std::sqrt(dot(b, b));
  // Converge well below the caller's tolerance so downstream identities
  // (projector idempotence, interior divergence) hold at that tolerance.
  double target = std::max(tol * 1e-2 * bnorm, floor_abs);
  if (bnorm <= target) {
    *iterations = 0;
    *final_residual = bnorm;
    return x;
  }

  for (std::size_t c = 0; c < z.size(); ++c) z[c] = r[c] / diag[c];
  p = z;
  double rz = dot(r, z);
  double res = bnorm;

  int it = 0;
  for (; it < max_iter; ++it) {
    res = std::sqrt(dot(r, r));
    if (res <= target) break;
    ScalarField np = apply_normal_op(p);
    double p_np = dot(p, np);
    if (p_np <= 0.0) break;  // rounding floor reached
    double alpha = rz / p_np;
    for (std::size_t c = 0; c < x.size(); ++c) {
      x[c] += alpha * p[c];
      r[c] -= alpha * np[c];
    }
    for (std::size_t c = 0; c < z.size(); ++c) z[c] = r[c] / diag[c];
    double rz_new = dot(r, z);
    double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t c = 0; c < p.size(); ++c) p[c] = z[c] + beta * p[c];
  }

  *iterations = it;
  *final_residual = res;
  if (res > std::max(tol * bnorm, floor_abs))
    throw SolverError("conjugate gradients did not reach tolerance: residual " +
                          std::to_string(res) + " after " + std::to_string(it) +
                          " iterations",
                      res, it);
  return x;
}

// Collocation operator for solve_poisson: L = restrict(margin 1) after
// div . grad, acting on potentials that vanish on the boundary layer. The
// normal operator above annihilates the all-odd-index checkerboard (central
// stencils read only matching parities), so it cannot represent a point
// deposit; L's one-sided rows at the margin-1 shell couple the parities and
// make the square system invertible.
ScalarField apply_collocation(const ScalarField& x) {
  ScalarField r = divergence(gradient(x));
  zero_boundary_layer(r);
  return r;
}

ScalarField apply_collocation_t(const ScalarField& w) {
  ScalarField r = gradient_adjoint(divergence_adjoint(w, kMask), 0);
  zero_boundary_layer(r);
  return r;
}

// CGLS: conjugate gradients on the normal equations L^T L x = L^T b without
// forming them. Tracks the true residual b - L x for the stopping test.
ScalarField cgls_solve(const ScalarField& b, double tol, int max_iter,
                       int* iterations, double* final_residual) {
  const Grid& g = b.grid();
  ScalarField x(g), r = b;

  double bnorm = std::sqrt(dot(b, b));
  double target = tol * 1e-2 * bnorm;
  if (bnorm == 0.0) {
    *iterations = 0;
    *final_residual = 0.0;
    return x;
  }

  ScalarField s = apply_collocation_t(r);
  ScalarField p = s;
  double gamma = dot(s, s);
  double res = bnorm;

  int it = 0;
  for (; it < max_iter; ++it) {
    res = std::sqrt(dot(r, r));
    if (res <= target || gamma == 0.0) break;
    ScalarField q = apply_collocation(p);
    double qq = dot(q, q);
    if (qq == 0.0) break;  // least-squares stationary point
    double alpha = gamma / qq;
    for (std::size_t c = 0; c < x.size(); ++c) {
      x[c] += alpha * p[c];
      r[c] -= alpha * q[c];
    }
    s = apply_collocation_t(r);
    double gamma_new = dot(s, s);
    double beta = gamma_new / gamma;
    gamma = gamma_new;
    for (std::size_t c = 0; c < p.size(); ++c) p[c] = s[c] + beta * p[c];
  }

  *iterations = it;
  *final_residual = res;
  if (res > tol * bnorm)
    throw SolverError("conjugate gradients did not reach tolerance: residual " +
                          std::to_string(res) + " after " + std::to_string(it) +
                          " iterations",
                      res, it);
  return x;
}

}  // namespace

Decomposition decompose(const VectorField& f, double tol, int max_iter) {
  if (!f.all_finite()) throw Error("decompose: non-finite input field");
  ScalarField b = gradient_adjoint(f, kMask);
  zero_boundary_layer(b);

  // Assembly rounding level of b for a field of this size: divergence-free
  // inputs produce a pure-noise rhs that no iteration should chase.
  double fraw = 0.0;
  for (std::size_t c = 0; c < f.size(); ++c) fraw += f.data()[c] * f.data()[c];
  double floor_abs = 1e-13 * std::sqrt(fraw) / f.grid().spacing();

  Decomposition d;
  int iters = 0;
  double res = 0.0;
  d.potential = cg_solve(b, tol, max_iter, floor_abs, &iters, &res);
  d.iterations = iters;
  d.residual = res;
  d.longitudinal = gradient(d.potential);
  d.transverse = f - d.longitudinal;
  return d;
}

ScalarField solve_poisson(const ScalarField& rhs, double tol, int max_iter) {
  if (!rhs.all_finite()) throw Error("solve_poisson: non-finite right-hand side");
  ScalarField b = rhs;
  for (std::size_t c = 0; c < b.size(); ++c) b[c] = -b[c];
  zero_boundary_layer(b);
  int iters = 0;
  double res = 0.0;
  return cgls_solve(b, tol, max_iter, &iters, &res);
}

}  // namespace fieldmech
