#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fieldmech/model_config.hpp"

namespace fieldmech {

struct ClaimResult {
  std::string id;          // stable, unique per report
  double measured = 0.0;   // pass iff measured <= threshold
  double threshold = 0.0;
  bool pass = false;
  double runtime_s = 0.0;
  std::string provenance;  // implementing module/operation
  std::string detail;      // probe description or error text; not in the
                           // serialized schema
};

enum class SuiteName { All, Momentum, Constraints, Pzw, Dynamics };

SuiteName parse_suite(const std::string& name);
const char* suite_name(SuiteName s);

/// Runs the selected claim checks on states derived from the config.
/// Deterministic given (config, seed): randomized checks draw from a
/// generator seeded by `seed` mixed with the claim id, so measured values
/// repeat to the last bit. A check that throws becomes a failing claim
/// carrying the diagnostic and the suite continues. Results are ordered by
/// claim id. Lower-bound claims ("this must be at least X") report the
/// shortfall max(0, floor - value) against threshold 0.
std::vector<ClaimResult> run_suite(const ModelConfig& config, SuiteName suite,
                                   std::uint64_t seed = 2026);

enum class ReportFormat { Json, Csv };

/// {version, config_digest, seed, claims:[{id, measured, threshold, pass,
/// runtime_s, provenance}]} as JSON, or the same columns as CSV.
/// Byte-stable given identical inputs.
std::string render_report(const std::vector<ClaimResult>& rs,
                          ReportFormat format, std::uint64_t config_digest,
                          std::uint64_t seed);

void emit_report(const std::vector<ClaimResult>& rs, ReportFormat format,
                 const std::string& path, std::uint64_t config_digest,
                 std::uint64_t seed);

/// 0 iff every claim passes.
int suite_exit_code(const std::vector<ClaimResult>& rs);

}  // namespace fieldmech
