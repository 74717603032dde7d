#pragma once

#include <string>
#include <vector>

#include "fieldmech/constraints.hpp"
#include "fieldmech/hamiltonians.hpp"

namespace fieldmech {

enum class Integrator { Leapfrog, RK4 };

struct FlowOptions {
  double dt = 1e-3;
  int steps = 100;
  Integrator scheme = Integrator::Leapfrog;
  int nodes = kDefaultQuadratureNodes;
  GaugeKind gauge = GaugeKind::Poincare;  // which residual to monitor
  int monitor_stride = 1;    // diagnostics cadence, in steps
  int snapshot_stride = 0;   // 0: keep initial and final states only
  int fixed_point_iters = 2;
  double blowup_drift = 1e3;  // relative energy drift treated as blow-up
  // The magnetic energy sums over cells of margin kIntegralMargin, so the
  // Gauss functional commutes with the discrete flow only at cells whose
  // divergence stencil reads fully central curl rows: one cell deeper than
  // the usual verification margin. Monitoring any shallower reports a
  // boundary artifact, not constraint drift.
  int constraint_margin = kVerifyMargin + 1;
};

struct StepDiagnostics {
  double t = 0.0;
  double energy = 0.0;
  double chi2_norm = 0.0;       // interior L2 of the Gauss residual
  double gauge_residual = 0.0;  // max |x.A| (Poincare) or max |div A|
};

/// Snapshot states with aligned times and diagnostics, plus the denser
/// monitor sequence. phi is refreshed from the Poisson solve at snapshot
/// times only: the flow never reads it and pi_phi stays pinned at zero, so
/// the cadence is purely a diagnostic choice.
struct Trajectory {
  std::vector<FieldState> states;
  std::vector<double> times;                  // aligned with states
  std::vector<StepDiagnostics> diagnostics;   // aligned with states
  std::vector<StepDiagnostics> monitor;       // every monitor_stride steps
  bool truncated = false;
  std::string failure;

  const FieldState& final_state() const;
};

Trajectory hamiltonian_flow(const FieldState& s0, const HamiltonianKind& kind,
                            const Potential& V, const FlowOptions& opt);

struct MonitorReport {
  double initial = 0.0;
  double max = 0.0;
  double final_value = 0.0;
  double growth() const { return max - initial; }
  bool pass(double tol) const { return growth() <= tol; }
};

/// Gauss-residual preservation along a trajectory, from the monitor rows.
MonitorReport constraint_monitor(const Trajectory& t);

struct PsiCompareResult {
  double max_state_deviation = 0.0;  // sup over steps and coordinates
  double energy_difference = 0.0;    // H_psi - H_0 along the run (max |.|)
  double expected_shift = 0.0;       // -integral psi^2 / (2 eps0)
  double shift_mismatch = 0.0;       // max |difference - expected|
};

/// Flows s0 under the psi-bearing Hamiltonian and under psi = 0, stepping
/// both in lockstep. The psi cross terms cancel algebraically, so the state
/// deviation is rounding-level while the energies differ by the constant
/// -integral psi^2/(2 eps0).
PsiCompareResult psi_trajectory_compare(const FieldState& s0,
                                        const PsiField& psi,
                                        const Potential& V,
                                        const FlowOptions& opt);

struct GaugeCompareResult {
  double e_deviation = 0.0;  // max interior |E_c - E_p|
  double b_deviation = 0.0;
  double e_scale = 0.0;      // max interior |E| across both runs
  double b_scale = 0.0;
  double relative() const;
};

/// Builds Coulomb- and Poincare-gauge representations of the same physical
/// (E0, B0, particle) data, flows both under the final-form Hamiltonian,
/// and compares the reconstructed fields at the end time. Rejects initial
/// data whose Gauss residual is not at solver level.
GaugeCompareResult gauge_equivalence_compare(const VectorField& E0,
                                             const VectorField& B0,
                                             const ParticleState& particle,
                                             const Potential& V,
                                             const FlowOptions& opt);

}  // namespace fieldmech
