#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "fieldmech/constraints.hpp"
#include "fieldmech/dynamics.hpp"
#include "fieldmech/report.hpp"
#include "state_init.hpp"

namespace {

using namespace fieldmech;

int run_verify(const std::string& model_path, const std::string& suite_str,
               const std::string& report_path, const std::string& format_str,
               std::uint64_t seed) {
  ModelConfig cfg = parse_model_file(model_path);
  SuiteName suite = parse_suite(suite_str);
  auto rs = run_suite(cfg, suite, seed);
  for (const auto& r : rs) {
    std::printf("%-4s %-28s measured %-13.6g threshold %-10.4g %.2fs\n",
                r.pass ? "PASS" : "FAIL", r.id.c_str(), r.measured,
                r.threshold, r.runtime_s);
    if (!r.pass && !r.detail.empty())
      std::printf("     %s\n", r.detail.c_str());
  }
  if (!report_path.empty()) {
    ReportFormat fmt;
    if (format_str == "json")
      fmt = ReportFormat::Json;
    else if (format_str == "csv")
      fmt = ReportFormat::Csv;
    else
      throw Error("unknown report format: " + format_str);
    emit_report(rs, fmt, report_path, config_digest(cfg), seed);
    std::printf("report written to %s\n", report_path.c_str());
  }
  return suite_exit_code(rs);
}

void write_traj(const Trajectory& tr, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("simulate: cannot open " + path);
  f << "# time energy chi2_norm gauge_residual\n";
  char buf[160];
  for (const auto& d : tr.monitor) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g %.17g\n", d.t, d.energy,
                  d.chi2_norm, d.gauge_residual);
    f << buf;
  }
  if (!f) throw Error("simulate: write failed for " + path);
}

// Snapshot binary: magic "FMFB", u32 version, i32 dims[3], f64 spacing,
// i32 snapshot count, i32 field count (A and pi), then per snapshot the
// f64 time followed by each field's raw doubles component-major. Native
// endianness; see docs/model_format.md.
void write_fields(const Trajectory& tr, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("simulate: cannot open " + path);
  auto put_i32 = [&](std::int32_t v) {
    f.write(reinterpret_cast<const char*>(&v), sizeof v);
  };
  auto put_f64 = [&](double v) {
    f.write(reinterpret_cast<const char*>(&v), sizeof v);
  };
  const Grid& g = tr.states.front().grid();
  f.write("FMFB", 4);
  put_i32(1);
  put_i32(g.nx());
  put_i32(g.ny());
  put_i32(g.nz());
  put_f64(g.spacing());
  put_i32(static_cast<std::int32_t>(tr.states.size()));
  put_i32(2);
  for (std::size_t n = 0; n < tr.states.size(); ++n) {
    put_f64(tr.times[n]);
    const FieldState& s = tr.states[n];
    f.write(reinterpret_cast<const char*>(s.A.data()),
            static_cast<std::streamsize>(s.A.size() * sizeof(double)));
    f.write(reinterpret_cast<const char*>(s.pi.data()),
            static_cast<std::streamsize>(s.pi.size() * sizeof(double)));
  }
  if (!f) throw Error("simulate: write failed for " + path);
}

int run_simulate(const std::string& model_path, const std::string& prefix,
                 bool dump_fields, int snapshot_stride) {
  ModelConfig cfg = parse_model_file(model_path);
  FieldState s0 = tools::build_state(cfg);
  FlowOptions fo;
  fo.dt = cfg.dt;
  fo.steps = static_cast<int>(cfg.steps);
  fo.scheme = cfg.scheme == IntegratorScheme::RK4 ? Integrator::RK4
                                                  : Integrator::Leapfrog;
  fo.gauge = cfg.gauge;
  fo.nodes = cfg.quadrature_nodes;
  fo.snapshot_stride = snapshot_stride;
  Trajectory tr = hamiltonian_flow(s0, HamiltonianKind::minimal_final(),
                                   Potential{cfg.potential}, fo);
  write_traj(tr, prefix + ".traj");
  if (dump_fields) write_fields(tr, prefix + ".fields");
  std::printf("%s after %d steps: energy %.12g -> %.12g, gauss %.3g -> %.3g\n",
              tr.truncated ? "TRUNCATED" : "completed", fo.steps,
              tr.monitor.front().energy, tr.monitor.back().energy,
              tr.monitor.front().chi2_norm, tr.monitor.back().chi2_norm);
  if (tr.truncated) {
    std::printf("failure: %s\n", tr.failure.c_str());
    return 3;
  }
  return 0;
}

int run_bracket(const std::string& model_path, const std::string& dump_path) {
  ModelConfig cfg = parse_model_file(model_path);
  for (int d : cfg.dims)
    if (d > 7)
      throw Error(
          "bracket: dense assembly is capped at 7 cells per axis; shrink the "
          "grid");
  FieldState s = tools::build_state(cfg);
  auto cs = standard_constraints();
  ConstraintMatrix M = constraint_matrix(cs, s, cfg.rank_tol, cfg.fd_step);
  Classification cls = classify(M);

  std::ofstream f(dump_path, std::ios::binary);
  if (!f) throw Error("bracket: cannot open " + dump_path);
  const auto n = M.C.rows();
  f << "# constraint bracket matrix, entries {chi_row, chi_col}\n";
  f << "# rows " << n << " rank " << M.rank << " cutoff " << M.cutoff
    << " ambiguous " << (M.ambiguous ? 1 : 0) << "\n";
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& [slot, cell] = M.index[static_cast<std::size_t>(i)];
    f << "# row " << i << " " << cs[static_cast<std::size_t>(slot)].name << "["
      << cell << "] "
      << (cls.per_index[static_cast<std::size_t>(i)] == ConstraintClass::First
              ? "first"
              : "second")
      << "\n";
  }
  char buf[96];
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (std::abs(M.C(i, j)) > 1e-14) {
        std::snprintf(buf, sizeof(buf), "%ld %ld %.17g\n",
                      static_cast<long>(i), static_cast<long>(j), M.C(i, j));
        f << buf;
      }
  if (!f) throw Error("bracket: write failed for " + dump_path);
  std::printf("%ld constraints, rank %d, %ld first-class combinations%s\n",
              static_cast<long>(n), M.rank,
              static_cast<long>(cls.first_class_basis.cols()),
              M.ambiguous ? " (AMBIGUOUS rank cut)" : "");
  std::printf("matrix written to %s\n", dump_path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constrained field mechanics: verification suites, flows, and "
               "bracket dumps"};
  app.require_subcommand(1);

  std::string model_path, suite_str = "all", report_path, format_str = "json";
  std::uint64_t seed = 2026;
  auto* verify = app.add_subcommand(
      "verify", "Run claim suites against a model and report pass/fail");
  verify->add_option("--model", model_path, "Model file")
      ->required()
      ->check(CLI::ExistingFile);
  verify->add_option("--suite", suite_str,
                     "all|momentum|constraints|pzw|dynamics");
  verify->add_option("--report", report_path, "Report output path");
  verify->add_option("--format", format_str, "json|csv");
  verify->add_option("--seed", seed, "Seed recorded in the report");

  std::string sim_model, out_prefix;
  bool dump_fields = false;
  int snapshot_stride = 0;
  auto* sim =
      app.add_subcommand("simulate", "Evolve a model and dump the trajectory");
  sim->add_option("--model", sim_model, "Model file")
      ->required()
      ->check(CLI::ExistingFile);
  sim->add_option("--out", out_prefix, "Output prefix (.traj, .fields)")
      ->required();
  sim->add_flag("--fields", dump_fields,
                "Also write the per-snapshot field binary");
  sim->add_option("--snapshot-stride", snapshot_stride,
                  "Keep every Nth state (0: endpoints only)");

  std::string br_model, dump_path;
  auto* br = app.add_subcommand(
      "bracket", "Assemble and dump the dense constraint bracket matrix");
  br->add_option("--model", br_model, "Model file")
      ->required()
      ->check(CLI::ExistingFile);
  br->add_option("--dump", dump_path, "Matrix output path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed())
      return run_verify(model_path, suite_str, report_path, format_str, seed);
    if (sim->parsed())
      return run_simulate(sim_model, out_prefix, dump_fields, snapshot_stride);
    if (br->parsed()) return run_bracket(br_model, dump_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
