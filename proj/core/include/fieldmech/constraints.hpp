#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "fieldmech/gauges.hpp"
#include "fieldmech/phase_space.hpp"

namespace fieldmech {

// The constraint set of the gauge-fixed theory. Each id names a cell-indexed
// family (one scalar constraint per grid cell):
//   Chi1: pi_phi(x)
//   Chi2: -[q delta(x - r) + div pi]           (Gauss law)
//   Chi3: x . A(x)                             (radial gauge condition)
//   Chi4: x . (pi/eps0 - grad phi)
enum class ConstraintId { Chi1, Chi2, Chi3, Chi4, Generated };
enum class ConstraintKind { Primary, Secondary };

struct Constraint {
  ConstraintId id = ConstraintId::Generated;
  ConstraintKind kind = ConstraintKind::Primary;
  std::string name;
  int generation = 0;  // 0 for seeded constraints
  std::string parent;  // name of the constraint whose time derivative made it
  std::function<ScalarField(const FieldState&)> residual;
};

ScalarField eval_constraint(ConstraintId id, const FieldState& s);

Constraint standard_constraint(ConstraintId id);
std::vector<Constraint> standard_constraints();  // chi1..chi4

struct ChainOptions {
  double tol = 1e-6;              // emission threshold on the residual norm
  int max_generation = 4;
  double fd_step = kDefaultFdStep;
  double independence_tol = 1e-8;  // relative projection remainder
};

/// Dirac consistency pass: brackets each constraint family with H along the
/// Hamiltonian flow direction; a residual that is both sizable and linearly
/// independent of the accumulated set is appended as a secondary. Returns
/// the input constraints plus everything generated, in discovery order.
/// Throws when a residual still wants to emit past the generation cap.
std::vector<Constraint> consistency_chain(const std::vector<Constraint>& seeds,
                                          const Functional& H,
                                          const FieldState& s,
                                          const ChainOptions& opt = {});

/// Dense bracket matrix C[a,b] = {chi_a(cell_a), chi_b(cell_b)} over all
/// (constraint, cell) pairs, with the flat constraint Jacobians and the SVD
/// kept for classification and Dirac brackets.
struct ConstraintMatrix {
  Eigen::MatrixXd C;      // antisymmetric, N x N
  Eigen::MatrixXd J;      // N x dim flat gradients, field entries per volume
  std::vector<std::pair<int, std::size_t>> index;  // row -> (slot in cs, cell)
  double tol_rel = 0.0;   // requested rank tolerance (relative)
  double cutoff = 0.0;    // absolute singular-value cutoff used
  int rank = 0;
  bool ambiguous = false;  // singular value within 10x of the cutoff
  Eigen::VectorXd svals;
  Eigen::MatrixXd U, V;
};

ConstraintMatrix constraint_matrix(const std::vector<Constraint>& cs,
                                   const FieldState& s,
                                   double rank_tol = 1e-10,
                                   double fd_step = kDefaultFdStep);

enum class ConstraintClass { First, Second };

// Null-space combinations of C are first class, the orthogonal complement
// second class. Per-index labels are a row-norm heuristic on top of that:
// combinations are the authoritative answer (the total pi_phi charge, for
// one, is first class even though every pi_phi cell couples to chi4).
struct Classification {
  std::vector<ConstraintClass> per_index;
  Eigen::MatrixXd first_class_basis;   // columns span null(C)
  Eigen::MatrixXd second_class_basis;  // columns span range(C)
  bool ambiguous = false;
};

Classification classify(const ConstraintMatrix& M);

/// {F,G} - {F,chi_a} (C+)_ab {chi_b,G} with the pseudo-inverse cut at
/// M.cutoff, i.e. the inverse on the second-class subspace.
double dirac_bracket(const Functional& F, const Functional& G,
                     const std::vector<Constraint>& cs,
                     const ConstraintMatrix& M, const FieldState& s,
                     double fd_step = kDefaultFdStep);

/// Linear combination sum_a coeffs[a] * chi(row a) as a Functional with the
/// analytic gradient taken from M.J (constraint families are linear, so the
/// Jacobian is state independent).
Functional constraint_combination(const std::vector<Constraint>& cs,
                                  const ConstraintMatrix& M,
                                  const Eigen::VectorXd& coeffs);

/// Static vector field tested for admissibility as a momentum shift.
struct PsiField {
  VectorField psi;
};

struct AdmissibilityReport {
  bool form_ok = false;        // radial alignment (Poincare) / curl-free (Coulomb)
  bool divergence_ok = false;
  bool regular_ok = false;     // finite at the origin cell
  double form_residual = 0.0;
  double divergence_residual = 0.0;
  double scale = 0.0;          // max |psi| over finite cells
  bool admissible() const { return form_ok && divergence_ok && regular_ok; }
};

/// Checks run on the punctured grid: cells with non-finite psi are skipped,
/// as is any stencil that reads one; regularity then reports whether the
/// origin cell itself was finite.
AdmissibilityReport psi_admissible(const PsiField& p, GaugeKind gauge,
                                   const FieldState& s, double tol = 1e-6);

}  // namespace fieldmech
