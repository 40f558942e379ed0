#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "mpr/model.hpp"
#include "mpr/solver.hpp"

namespace mpr {

// Seeded experiment grid over (n, s, m). Parsed from a JSON document;
// unknown keys anywhere in the document are errors.
struct ExperimentConfig {
  std::vector<int> n_grid;
  std::vector<int> s_grid;
  std::vector<long> m_grid;
  Distribution dist = Distribution::gaussian();
  LinkFunction link = LinkFunction::quadratic();
  SignalKind signal_kind = SignalKind::Admissible;
  int trials = 1;
  std::uint64_t base_seed = 0;
  SdpConfig solver;
  bool radius_from_cell = true;  // sparsity radius defaults to the cell's s
  bool record_timing = false;    // wall-time column stays 0 unless enabled
  std::string out_path;

  static ExperimentConfig from_json(const nlohmann::json& j);
  void validate() const;
};

// Per-cell seed derivation; stable across releases and frozen by tests:
// chained combine_seed over (base, n, s, m, trial).
std::uint64_t cell_seed(std::uint64_t base_seed, int n, int s, long m, int trial);

struct SweepRow {
  int n = 0;
  int s = 0;
  long m = 0;
  int trial = 0;
  double error_up_to_sign = 0.0;
  double frobenius_error = 0.0;
  double objective = 0.0;
  int iters = 0;
  bool converged = false;
  double wall_time_ms = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // grid order: n, then s, then m, then trial
};

// Runs generate -> recover per (cell, trial) on a worker pool; rows come
// back in grid order regardless of completion order. Per-trial solver
// failures are recorded in the row, never abort the sweep.
SweepResult run_sweep(const ExperimentConfig& cfg, int threads = 1);

// Fixed column order, header row, shortest round-trip float formatting.
void write_sweep_csv(const SweepResult& result, std::ostream& out);
std::string sweep_csv_header();

struct ScalingSummary {
  double slope = 0.0;
  double ci_lo = 0.0;  // bootstrap 2.5% quantile
  double ci_hi = 0.0;  // bootstrap 97.5% quantile
  std::vector<std::pair<long, double>> medians;  // (m, median error)

  nlohmann::json to_json() const;
};

// Least-squares slope of log(median error) vs log(m) with a bootstrap CI
// over trial resamples. Requires a single (n, s) cell pair and >= 3 values
// of m; throws std::invalid_argument otherwise.
ScalingSummary report_scaling(const SweepResult& result, std::uint64_t bootstrap_seed = 0,
                              int bootstrap_reps = 1000);

// Assumption gate: prints the moment report and verdict as JSON, returns 0
// when mu is positive and 1 otherwise (scriptable exit code).
int report_assumptions(const LinkFunction& link, const Distribution& dist, int s,
                       std::uint64_t seed, std::ostream& out);

double median(std::vector<double> values);

}  // namespace mpr
