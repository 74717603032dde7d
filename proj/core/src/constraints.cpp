#include "fieldmech/constraints.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <random>

#include "fieldmech/deposit.hpp"
#include "fieldmech/operators.hpp"

namespace fieldmech {

namespace {

// Deterministic probe used to contract cell-indexed families to scalars for
// the independence test. Values in [0.5, 1.5], no zeros, fixed seed.
ScalarField probe_field(const Grid& g) {
  std::mt19937_64 rng(0x243F6A8885A308D3ull);
  ScalarField w(g);
  for (std::size_t c = 0; c < w.size(); ++c)
    w[c] = 0.5 + (rng() >> 11) * 0x1.0p-53;
  return w;
}

double& flat_coord(FieldState& s, const StateLayout& L, std::size_t k) {
  if (k < 3) return s.particle.r[static_cast<int>(k)];
  if (k < 6) return s.particle.P[static_cast<int>(k - 3)];
  if (k < L.phi_off()) {
    if (k < L.pi_off()) return s.A.data()[k - L.A_off()];
    return s.pi.data()[k - L.pi_off()];
  }
  if (k < L.pi_phi_off()) return s.phi.data()[k - L.phi_off()];
  return s.pi_phi.data()[k - L.pi_phi_off()];
}

bool is_field_coord(const StateLayout& L, std::size_t k) {
  return k >= L.A_off();
}

// Hamiltonian flow direction in flat layout: (dr, dP, dA, dpi, dphi, dpi_phi)
// = (dH/dP, -dH/dr, dH/dpi, -dH/dA, dH/dpi_phi, -dH/dphi).
std::vector<double> flat_flow_direction(const StateGradient& g) {
  StateLayout L(g.d_A.grid());
  std::vector<double> X(L.dim());
  for (int a = 0; a < 3; ++a) {
    X[L.r_off() + a] = g.d_P[a];
    X[L.P_off() + a] = -g.d_r[a];
  }
  for (std::size_t c = 0; c < 3 * L.n; ++c) {
    X[L.A_off() + c] = g.d_pi.data()[c];
    X[L.pi_off() + c] = -g.d_A.data()[c];
  }
  for (std::size_t c = 0; c < L.n; ++c) {
    X[L.phi_off() + c] = g.d_pi_phi[c];
    X[L.pi_phi_off() + c] = -g.d_phi[c];
  }
  return X;
}

double sup_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

using ResidualFn = std::function<ScalarField(const FieldState&)>;

// {chi(cell), H} for every cell at once: central difference of the residual
// family along the Hamiltonian flow direction.
ScalarField bracket_with_hamiltonian(const ResidualFn& residual,
                                     const Functional& H, const FieldState& s,
                                     double fd_step) {
  StateGradient g = functional_gradient(H, s, fd_step);
  std::vector<double> X = flat_flow_direction(g);
  double eps = fd_step / std::max(1.0, sup_abs(X));
  FieldState w = s;
  displace_state(w, X, eps);
  ScalarField plus = residual(w);
  displace_state(w, X, -2.0 * eps);
  ScalarField minus = residual(w);
  ScalarField out(s.grid());
  for (std::size_t c = 0; c < out.size(); ++c)
    out[c] = (plus[c] - minus[c]) / (2.0 * eps);
  return out;
}

// Flat gradient of the probe-contracted scalar sum_c w(c) chi(c) h^3.
Eigen::VectorXd contracted_gradient(const ResidualFn& residual,
                                    const FieldState& s, const ScalarField& w,
                                    double fd_step) {
  StateLayout L(s.grid());
  const double h3 = s.grid().cell_volume();
  auto contract = [&](const FieldState& st) {
    ScalarField R = residual(st);
    double acc = 0.0;
    for (std::size_t c = 0; c < R.size(); ++c) acc += w[c] * R[c];
    return acc * h3;
  };
  Eigen::VectorXd grad(L.dim());
  FieldState work = s;
  for (std::size_t k = 0; k < L.dim(); ++k) {
    double& slot = flat_coord(work, L, k);
    double orig = slot;
    double step = fd_step * std::max(1.0, std::abs(orig));
    slot = orig + step;
    double fp = contract(work);
    slot = orig - step;
    double fm = contract(work);
    slot = orig;
    grad(static_cast<Eigen::Index>(k)) = (fp - fm) / (2.0 * step);
  }
  return grad;
}

Constraint make_generated(const Constraint& parent, const Functional& H,
                          double fd_step) {
  Constraint c;
  c.id = ConstraintId::Generated;
  c.kind = ConstraintKind::Secondary;
  c.generation = parent.generation + 1;
  c.parent = parent.name;
  c.name = parent.name + ":gen" + std::to_string(c.generation);
  ResidualFn parent_res = parent.residual;
  c.residual = [parent_res, H, fd_step](const FieldState& s) {
    return bracket_with_hamiltonian(parent_res, H, s, fd_step);
  };
  return c;
}

}  // namespace

ScalarField eval_constraint(ConstraintId id, const FieldState& s) {
  const Grid& g = s.grid();
  switch (id) {
    case ConstraintId::Chi1:
      return s.pi_phi;
    case ConstraintId::Chi2: {
      ScalarField div = divergence(s.pi);
      ScalarField out(g);
      if (s.particle.q != 0.0) {
        ScalarField dep = deposit_point(s.particle.q, s.particle.r, g);
        for (std::size_t c = 0; c < out.size(); ++c)
          out[c] = -(dep[c] + div[c]);
      } else {
        for (std::size_t c = 0; c < out.size(); ++c) out[c] = -div[c];
      }
      return out;
    }
    case ConstraintId::Chi3: {
      ScalarField out(g);
      for (int k = 0; k < g.nz(); ++k)
        for (int j = 0; j < g.ny(); ++j)
          for (int i = 0; i < g.nx(); ++i)
            out(i, j, k) = g.center(i, j, k).dot(s.A.vec(i, j, k));
      return out;
    }
    case ConstraintId::Chi4: {
      VectorField gp = gradient(s.phi);
      ScalarField out(g);
      for (int k = 0; k < g.nz(); ++k)
        for (int j = 0; j < g.ny(); ++j)
          for (int i = 0; i < g.nx(); ++i) {
            Vec3 w = s.pi.vec(i, j, k) / s.eps0 - gp.vec(i, j, k);
            out(i, j, k) = g.center(i, j, k).dot(w);
          }
      return out;
    }
    case ConstraintId::Generated:
      break;
  }
  throw Error("eval_constraint: Generated has no standalone evaluator");
}

Constraint standard_constraint(ConstraintId id) {
  Constraint c;
  c.id = id;
  switch (id) {
    case ConstraintId::Chi1:
      c.kind = ConstraintKind::Primary;
      c.name = "chi1";
      break;
    case ConstraintId::Chi2:
      c.kind = ConstraintKind::Secondary;
      c.name = "chi2";
      break;
    case ConstraintId::Chi3:
      c.kind = ConstraintKind::Primary;  // imposed gauge condition
      c.name = "chi3";
      break;
    case ConstraintId::Chi4:
      c.kind = ConstraintKind::Secondary;
      c.name = "chi4";
      break;
    case ConstraintId::Generated:
      throw Error("standard_constraint: Generated is not a standard id");
  }
  c.residual = [id](const FieldState& s) { return eval_constraint(id, s); };
  return c;
}

std::vector<Constraint> standard_constraints() {
  return {standard_constraint(ConstraintId::Chi1),
          standard_constraint(ConstraintId::Chi2),
          standard_constraint(ConstraintId::Chi3),
          standard_constraint(ConstraintId::Chi4)};
}

std::vector<Constraint> consistency_chain(const std::vector<Constraint>& seeds,
                                          const Functional& H,
                                          const FieldState& s,
                                          const ChainOptions& opt) {
  s.validate("consistency_chain");
  ScalarField w = probe_field(s.grid());
  std::vector<Constraint> out = seeds;
  std::vector<Eigen::VectorXd> basis;  // orthonormal contracted gradients

  auto add_to_basis = [&](Eigen::VectorXd v) {
    for (const auto& b : basis) v -= b.dot(v) * b;
    double n = v.norm();
    if (n > 0.0) basis.push_back(v / n);
  };

  for (const Constraint& c : out)
    add_to_basis(contracted_gradient(c.residual, s, w, opt.fd_step));

  for (std::size_t pos = 0; pos < out.size(); ++pos) {
    Constraint cand = make_generated(out[pos], H, opt.fd_step);
    ScalarField R = cand.residual(s);
    double norm = interior_l2(R, kVerifyMargin);
    if (norm <= opt.tol) continue;
    if (cand.generation > opt.max_generation)
      throw Error("consistency_chain: generation cap hit, " + cand.name +
                  " still has residual norm " + std::to_string(norm));
    Eigen::VectorXd grad =
        contracted_gradient(cand.residual, s, w, opt.fd_step);
    double orig = grad.norm();
    Eigen::VectorXd rem = grad;
    for (const auto& b : basis) rem -= b.dot(rem) * b;
    if (orig == 0.0 || rem.norm() / orig <= opt.independence_tol)
      continue;  // dependent on the accumulated set: already accounted for
    basis.push_back(rem / rem.norm());
    out.push_back(std::move(cand));
  }
  return out;
}

ConstraintMatrix constraint_matrix(const std::vector<Constraint>& cs,
                                   const FieldState& s, double rank_tol,
                                   double fd_step) {
  s.validate("constraint_matrix");
  const Grid& g = s.grid();
  StateLayout L(g);
  const std::size_t n = L.n;
  const std::size_t N = cs.size() * n;
  const double h3 = g.cell_volume();

  ConstraintMatrix M;
  M.tol_rel = rank_tol;
  M.index.reserve(N);
  for (int a = 0; a < static_cast<int>(cs.size()); ++a)
    for (std::size_t c = 0; c < n; ++c) M.index.emplace_back(a, c);

  M.J.resize(N, L.dim());
  FieldState work = s;
  for (std::size_t a = 0; a < cs.size(); ++a) {
    for (std::size_t k = 0; k < L.dim(); ++k) {
      double& slot = flat_coord(work, L, k);
      double orig = slot;
      double step = fd_step * std::max(1.0, std::abs(orig));
      slot = orig + step;
      ScalarField plus = cs[a].residual(work);
      slot = orig - step;
      ScalarField minus = cs[a].residual(work);
      slot = orig;
      double unit = is_field_coord(L, k) ? 1.0 / h3 : 1.0;
      for (std::size_t c = 0; c < n; ++c)
        M.J(a * n + c, k) = unit * (plus[c] - minus[c]) / (2.0 * step);
    }
  }

  // K row = Omega applied to the matching J row; then C = J K^T.
  Eigen::MatrixXd K(N, L.dim());
  for (int a = 0; a < 3; ++a) {
    K.col(L.r_off() + a) = M.J.col(L.P_off() + a);
    K.col(L.P_off() + a) = -M.J.col(L.r_off() + a);
  }
  for (std::size_t c = 0; c < 3 * L.n; ++c) {
    K.col(L.A_off() + c) = h3 * M.J.col(L.pi_off() + c);
    K.col(L.pi_off() + c) = -h3 * M.J.col(L.A_off() + c);
  }
  for (std::size_t c = 0; c < L.n; ++c) {
    K.col(L.phi_off() + c) = h3 * M.J.col(L.pi_phi_off() + c);
    K.col(L.pi_phi_off() + c) = -h3 * M.J.col(L.phi_off() + c);
  }
  Eigen::MatrixXd C = M.J * K.transpose();

  // Antisymmetry by construction: keep the upper triangle, mirror it.
  M.C.resize(N, N);
  for (std::size_t i = 0; i < N; ++i) {
    M.C(i, i) = 0.0;
    for (std::size_t j = i + 1; j < N; ++j) {
      M.C(i, j) = C(i, j);
      M.C(j, i) = -C(i, j);
    }
  }
  if (N == 0) {
    // No constraints: empty bracket matrix, nothing second class.
    M.svals.resize(0);
    M.U.resize(0, 0);
    M.V.resize(0, 0);
    M.cutoff = 0.0;
    M.rank = 0;
    M.ambiguous = false;
    return M;
  }
  if (!M.C.allFinite())
    throw Error("constraint_matrix: non-finite bracket entries");

  Eigen::BDCSVD<Eigen::MatrixXd> svd(
      M.C, Eigen::ComputeFullU | Eigen::ComputeFullV);
  M.svals = svd.singularValues();
  M.U = svd.matrixU();
  M.V = svd.matrixV();
  double smax = M.svals.size() ? M.svals(0) : 0.0;
  M.cutoff = rank_tol * smax;
  M.rank = 0;
  M.ambiguous = false;
  for (int i = 0; i < M.svals.size(); ++i) {
    if (M.svals(i) > M.cutoff) ++M.rank;
    if (M.svals(i) > 0.1 * M.cutoff && M.svals(i) < 10.0 * M.cutoff)
      M.ambiguous = true;
  }
  return M;
}

Classification classify(const ConstraintMatrix& M) {
  const auto N = M.C.rows();
  Classification cl;
  cl.ambiguous = M.ambiguous;
  cl.per_index.resize(N, ConstraintClass::First);
  for (Eigen::Index i = 0; i < N; ++i)
    if (M.C.col(i).norm() > M.cutoff) cl.per_index[i] = ConstraintClass::Second;
  cl.second_class_basis = M.V.leftCols(M.rank);
  cl.first_class_basis = M.V.rightCols(N - M.rank);
  return cl;
}

double dirac_bracket(const Functional& F, const Functional& G,
                     const std::vector<Constraint>& cs,
                     const ConstraintMatrix& M, const FieldState& s,
                     double fd_step) {
  double pb = poisson_bracket(F, G, s, fd_step);
  if (cs.empty() || M.index.empty()) return pb;

  const Grid& g = s.grid();
  StateLayout L(g);
  const double h3 = g.cell_volume();
  auto omega = [&](const std::vector<double>& v) {
    Eigen::VectorXd y(L.dim());
    for (int a = 0; a < 3; ++a) {
      y(L.r_off() + a) = v[L.P_off() + a];
      y(L.P_off() + a) = -v[L.r_off() + a];
    }
    for (std::size_t c = 0; c < 3 * L.n; ++c) {
      y(L.A_off() + c) = h3 * v[L.pi_off() + c];
      y(L.pi_off() + c) = -h3 * v[L.A_off() + c];
    }
    for (std::size_t c = 0; c < L.n; ++c) {
      y(L.phi_off() + c) = h3 * v[L.pi_phi_off() + c];
      y(L.pi_phi_off() + c) = -h3 * v[L.phi_off() + c];
    }
    return y;
  };

  std::vector<double> gF =
      flatten_gradient(functional_gradient(F, s, fd_step));
  std::vector<double> gG =
      flatten_gradient(functional_gradient(G, s, fd_step));
  Eigen::VectorXd u = -(M.J * omega(gF));  // u_a = {F, chi_a}
  Eigen::VectorXd v = M.J * omega(gG);     // v_b = {chi_b, G}

  // C+ restricted to singular values above the cutoff: the inverse on the
  // second-class subspace.
  Eigen::VectorXd t = M.U.transpose() * v;
  for (int i = 0; i < M.svals.size(); ++i)
    t(i) = M.svals(i) > M.cutoff ? t(i) / M.svals(i) : 0.0;
  double corr = u.dot(M.V * t);
  double result = pb - corr;
  if (!std::isfinite(result)) {
    double smin = M.rank > 0 ? M.svals(M.rank - 1) : 0.0;
    throw Error("dirac_bracket: non-finite result (sigma_max " +
                std::to_string(M.svals.size() ? M.svals(0) : 0.0) +
                ", smallest kept sigma " + std::to_string(smin) + ")");
  }
  return result;
}

Functional constraint_combination(const std::vector<Constraint>& cs,
                                  const ConstraintMatrix& M,
                                  const Eigen::VectorXd& coeffs) {
  if (coeffs.size() != static_cast<Eigen::Index>(M.index.size()))
    throw Error("constraint_combination: coefficient size mismatch");
  std::vector<Constraint> fams = cs;
  Eigen::VectorXd flat = M.J.transpose() * coeffs;
  std::vector<std::pair<int, std::size_t>> index = M.index;
  Eigen::VectorXd cvec = coeffs;

  Functional out;
  out.value = [fams, index, cvec](const FieldState& s) {
    double acc = 0.0;
    std::size_t row = 0;
    for (std::size_t a = 0; a < fams.size(); ++a) {
      ScalarField R = fams[a].residual(s);
      for (std::size_t c = 0; c < R.size(); ++c, ++row)
        acc += cvec(row) * R[c];
    }
    return acc;
  };
  out.gradient = [flat](const FieldState& s) {
    StateLayout L(s.grid());
    if (flat.size() != static_cast<Eigen::Index>(L.dim()))
      throw Error("constraint_combination: gradient grid mismatch");
    StateGradient g(s.grid());
    for (int a = 0; a < 3; ++a) {
      g.d_r[a] = flat(L.r_off() + a);
      g.d_P[a] = flat(L.P_off() + a);
    }
    for (std::size_t c = 0; c < 3 * L.n; ++c) {
      g.d_A.data()[c] = flat(L.A_off() + c);
      g.d_pi.data()[c] = flat(L.pi_off() + c);
    }
    for (std::size_t c = 0; c < L.n; ++c) {
      g.d_phi[c] = flat(L.phi_off() + c);
      g.d_pi_phi[c] = flat(L.pi_phi_off() + c);
    }
    return g;
  };
  return out;
}

AdmissibilityReport psi_admissible(const PsiField& p, GaugeKind gauge,
                                   const FieldState& s, double tol) {
  const Grid& g = p.psi.grid();
  require_same_grid(g, s.grid(), "psi_admissible");
  const std::size_t n = g.cell_count();

  std::vector<char> finite(n);
  for (std::size_t c = 0; c < n; ++c) finite[c] = p.psi.vec(c).finite();

  // Zero-filled working copy: skipped stencils may read these cells, the
  // values never reach a reported number.
  VectorField work = p.psi;
  for (std::size_t c = 0; c < n; ++c)
    if (!finite[c])
      for (int comp = 0; comp < 3; ++comp) work.at(comp, c) = 0.0;

  // A cell is scanned only if no stencil input within one cell is bad.
  auto clean = [&](int i, int j, int k) {
    for (int a = -1; a <= 1; ++a)
      for (int b = -1; b <= 1; ++b)
        for (int c = -1; c <= 1; ++c) {
          int ii = i + a, jj = j + b, kk = k + c;
          if (ii < 0 || jj < 0 || kk < 0 || ii >= g.nx() || jj >= g.ny() ||
              kk >= g.nz())
            continue;
          if (!finite[g.index(ii, jj, kk)]) return false;
        }
    return true;
  };

  AdmissibilityReport rep;
  for (std::size_t c = 0; c < n; ++c)
    if (finite[c]) {
      Vec3 v = p.psi.vec(c);
      rep.scale = std::max(
          {rep.scale, std::abs(v.x), std::abs(v.y), std::abs(v.z)});
    }

  const int oi = (g.nx() - 1) / 2, oj = (g.ny() - 1) / 2, ok = (g.nz() - 1) / 2;
  rep.regular_ok = finite[g.index(oi, oj, ok)] != 0;

  if (gauge == GaugeKind::Poincare) {
    // psi = f e_r: pointwise cross product with the unit radial direction.
    double worst = 0.0;
    for (int k = 0; k < g.nz(); ++k)
      for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
          if (i == oi && j == oj && k == ok) continue;  // e_r undefined
          if (!finite[g.index(i, j, k)]) continue;
          Vec3 x = g.center(i, j, k);
          Vec3 cr = p.psi.vec(i, j, k).cross(x / x.norm());
          worst = std::max(
              {worst, std::abs(cr.x), std::abs(cr.y), std::abs(cr.z)});
        }
    rep.form_residual = worst;
    rep.form_ok = worst <= tol * std::max(1.0, rep.scale);
  } else {
    // psi = grad f: discrete curl must vanish.
    VectorField cw = curl(work);
    double worst = 0.0;
    for (int k = kVerifyMargin; k < g.nz() - kVerifyMargin; ++k)
      for (int j = kVerifyMargin; j < g.ny() - kVerifyMargin; ++j)
        for (int i = kVerifyMargin; i < g.nx() - kVerifyMargin; ++i) {
          if (!clean(i, j, k)) continue;
          Vec3 v = cw.vec(i, j, k);
          worst =
              std::max({worst, std::abs(v.x), std::abs(v.y), std::abs(v.z)});
        }
    rep.form_residual = worst;
    rep.form_ok = worst <= tol * std::max(1.0, rep.scale) / g.spacing();
  }

  ScalarField dv = divergence(work);
  double worst = 0.0;
  for (int k = kVerifyMargin; k < g.nz() - kVerifyMargin; ++k)
    for (int j = kVerifyMargin; j < g.ny() - kVerifyMargin; ++j)
      for (int i = kVerifyMargin; i < g.nx() - kVerifyMargin; ++i) {
        if (!clean(i, j, k)) continue;
        worst = std::max(worst, std::abs(dv(i, j, k)));
      }
  rep.divergence_residual = worst;
  rep.divergence_ok = worst <= tol * std::max(1.0, rep.scale) / g.spacing();
  return rep;
}

}  // namespace fieldmech
