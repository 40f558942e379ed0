#include "mpr/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <set>
#include <stdexcept>
#include <thread>

#include "mpr/estimator.hpp"
#include "mpr/textio.hpp"

namespace mpr {

namespace {

void reject_unknown_keys(const nlohmann::json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key()))
      throw std::invalid_argument("config: unknown key '" + item.key() + "' in " + where);
  }
}

template <typename T>
std::vector<T> scalar_or_array(const nlohmann::json& j, const std::string& key) {
  std::vector<T> out;
  if (j.is_array()) {
    for (const auto& v : j) out.push_back(v.get<T>());
  } else {
    out.push_back(j.get<T>());
  }
  if (out.empty()) throw std::invalid_argument("config: '" + key + "' must be non-empty");
  return out;
}

Distribution parse_distribution(const nlohmann::json& j) {
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    if (name == "gaussian") return Distribution::gaussian();
    if (name == "rademacher") return Distribution::rademacher();
    if (name == "uniform_scaled") return Distribution::uniform_scaled();
    throw std::invalid_argument("config: unknown distribution '" + name + "'");
  }
  reject_unknown_keys(j, {"type", "points", "weights"}, "distribution");
  const std::string type = j.at("type").get<std::string>();
  if (type != "discrete_symmetric")
    throw std::invalid_argument("config: unknown distribution type '" + type + "'");
  return Distribution::discrete_symmetric(j.at("points").get<std::vector<double>>(),
                                          j.at("weights").get<std::vector<double>>());
}

LinkFunction parse_link(const nlohmann::json& j) {
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    if (name == "quadratic") return LinkFunction::quadratic();
    if (name == "abs") return LinkFunction::abs_value();
    if (name == "one_bit_intensity") return LinkFunction::one_bit_intensity();
    throw std::invalid_argument("config: unknown link '" + name + "'");
  }
  reject_unknown_keys(j, {"type", "tau", "noise_std"}, "link");
  const std::string type = j.at("type").get<std::string>();
  if (type == "quadratic") return LinkFunction::quadratic();
  if (type == "abs") return LinkFunction::abs_value();
  if (type == "one_bit_intensity")
    return LinkFunction::one_bit_intensity(j.value("tau", 1.0));
  if (type == "noisy_quadratic") return LinkFunction::noisy_quadratic(j.at("noise_std").get<double>());
  throw std::invalid_argument("config: unknown link type '" + type + "'");
}

SignalKind parse_signal_kind(const nlohmann::json& j) {
  const std::string name = j.get<std::string>();
  if (name == "admissible") return SignalKind::Admissible;
  if (name == "sparse_gaussian") return SignalKind::SparseGaussian;
  if (name == "dense_unit") return SignalKind::DenseUnit;
  throw std::invalid_argument("config: unknown signal kind '" + name + "'");
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  reject_unknown_keys(j,
                      {"n", "s", "m", "distribution", "link", "signal", "trials", "base_seed",
                       "solver", "record_timing", "out"},
                      "top level");
  ExperimentConfig cfg;
  cfg.n_grid = scalar_or_array<int>(j.at("n"), "n");
  cfg.s_grid = scalar_or_array<int>(j.at("s"), "s");
  cfg.m_grid = scalar_or_array<long>(j.at("m"), "m");
  cfg.dist = parse_distribution(j.at("distribution"));
  cfg.link = parse_link(j.at("link"));
  if (j.contains("signal")) cfg.signal_kind = parse_signal_kind(j.at("signal"));
  cfg.trials = j.value("trials", 1);
  cfg.base_seed = j.value("base_seed", std::uint64_t{0});
  cfg.record_timing = j.value("record_timing", false);
  if (j.contains("out")) cfg.out_path = j.at("out").get<std::string>();
  if (j.contains("solver")) {
    const auto& js = j.at("solver");
    reject_unknown_keys(js,
                        {"sparsity_radius", "max_iters", "tol_primal", "tol_dual", "rho",
                         "dykstra_max_cycles", "dykstra_tol"},
                        "solver");
    if (js.contains("sparsity_radius")) {
      cfg.solver.sparsity_radius = js.at("sparsity_radius").get<double>();
      cfg.radius_from_cell = false;
    }
    cfg.solver.max_iters = js.value("max_iters", cfg.solver.max_iters);
    cfg.solver.tol_primal = js.value("tol_primal", cfg.solver.tol_primal);
    cfg.solver.tol_dual = js.value("tol_dual", cfg.solver.tol_dual);
    cfg.solver.rho = js.value("rho", cfg.solver.rho);
    cfg.solver.dykstra_max_cycles = js.value("dykstra_max_cycles", cfg.solver.dykstra_max_cycles);
    cfg.solver.dykstra_tol = js.value("dykstra_tol", cfg.solver.dykstra_tol);
  }
  cfg.validate();
  return cfg;
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  for (int n : n_grid) {
    if (n < 1) throw std::invalid_argument("config: n must be >= 1");
    for (int s : s_grid) {
      if (s < 1 || s > n) throw std::invalid_argument("config: require 1 <= s <= n in every cell");
    }
  }
  for (long m : m_grid) {
    if (m < 1) throw std::invalid_argument("config: m must be >= 1");
  }
}

std::uint64_t cell_seed(std::uint64_t base_seed, int n, int s, long m, int trial) {
  std::uint64_t h = combine_seed(base_seed, static_cast<std::uint64_t>(n));
  h = combine_seed(h, static_cast<std::uint64_t>(s));
  h = combine_seed(h, static_cast<std::uint64_t>(m));
  h = combine_seed(h, static_cast<std::uint64_t>(trial));
  return h;
}

namespace {

struct Task {
  int n, s, trial;
  long m;
};

SweepRow run_trial(const ExperimentConfig& cfg, const Task& task) {
  const auto start = std::chrono::steady_clock::now();
  SweepRow row;
  row.n = task.n;
  row.s = task.s;
  row.m = task.m;
  row.trial = task.trial;

  const std::uint64_t seed = cell_seed(cfg.base_seed, task.n, task.s, task.m, task.trial);
  Signal x_star;
  switch (cfg.signal_kind) {
    case SignalKind::Admissible: {
      Rng rng(seed, stream::signal);
      x_star = make_signal(random_admissible_spec(task.n, task.s, rng), seed);
      break;
    }
    case SignalKind::SparseGaussian:
      x_star = make_signal(SignalSpec::sparse_gaussian(task.n, task.s), seed);
      break;
    case SignalKind::DenseUnit:
      x_star = make_signal(SignalSpec::dense_unit(task.n), seed);
      break;
  }

  const MeasurementSet data =
      generate(x_star, cfg.dist, cfg.link, static_cast<int>(task.m), seed);
  SdpConfig solver_cfg = cfg.solver;
  if (cfg.radius_from_cell) solver_cfg.sparsity_radius = static_cast<double>(task.s);

  try {
    const RecoveryReport report = recover(data, solver_cfg, &x_star);
    row.error_up_to_sign = report.error_up_to_sign.value_or(
        std::numeric_limits<double>::quiet_NaN());
    row.frobenius_error = report.frobenius_error.value_or(
        std::numeric_limits<double>::quiet_NaN());
    row.objective = report.objective;
    row.iters = report.iters;
    row.converged = report.converged;
  } catch (const std::exception&) {
    row.error_up_to_sign = std::numeric_limits<double>::quiet_NaN();
    row.frobenius_error = std::numeric_limits<double>::quiet_NaN();
    row.objective = std::numeric_limits<double>::quiet_NaN();
    row.iters = 0;
    row.converged = false;
  }

  if (cfg.record_timing) {
    const auto end = std::chrono::steady_clock::now();
    row.wall_time_ms =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(end - start).count();
  }
  return row;
}

}  // namespace

SweepResult run_sweep(const ExperimentConfig& cfg, int threads) {
  cfg.validate();
  std::vector<Task> tasks;
  for (int n : cfg.n_grid) {
    for (int s : cfg.s_grid) {
      for (long m : cfg.m_grid) {
        for (int trial = 0; trial < cfg.trials; ++trial) tasks.push_back({n, s, trial, m});
      }
    }
  }

  SweepResult result;
  result.rows.resize(tasks.size());
  if (threads < 1) threads = 1;

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      result.rows[i] = run_trial(cfg, tasks[i]);
    }
  };

  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return result;
}

std::string sweep_csv_header() {
  return "n,s,m,trial,error_up_to_sign,frobenius_error,objective,iters,converged,wall_time_ms";
}

void write_sweep_csv(const SweepResult& result, std::ostream& out) {
  out << sweep_csv_header() << '\n';
  for (const SweepRow& row : result.rows) {
    out << row.n << ',' << row.s << ',' << row.m << ',' << row.trial << ','
        << format_double(row.error_up_to_sign) << ',' << format_double(row.frobenius_error) << ','
        << format_double(row.objective) << ',' << row.iters << ',' << (row.converged ? 1 : 0)
        << ',' << format_double(row.wall_time_ms) << '\n';
  }
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median: empty input");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return (n % 2 == 1) ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

namespace {

double fit_slope(const std::vector<double>& log_m, const std::vector<double>& log_err) {
  const double n = static_cast<double>(log_m.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < log_m.size(); ++i) {
    sx += log_m[i];
    sy += log_err[i];
    sxx += log_m[i] * log_m[i];
    sxy += log_m[i] * log_err[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("report_scaling: degenerate m grid");
  return (n * sxy - sx * sy) / denom;
}

}  // namespace

ScalingSummary report_scaling(const SweepResult& result, std::uint64_t bootstrap_seed,
                              int bootstrap_reps) {
  if (result.rows.empty()) throw std::invalid_argument("report_scaling: empty result");

  std::set<std::pair<int, int>> cells;
  for (const SweepRow& row : result.rows) cells.insert({row.n, row.s});
  if (cells.size() != 1)
    throw std::invalid_argument("report_scaling: result must cover a single (n, s) pair");

  // Group errors by m (grid order preserved).
  std::vector<long> ms;
  std::vector<std::vector<double>> errs;
  for (const SweepRow& row : result.rows) {
    auto it = std::find(ms.begin(), ms.end(), row.m);
    std::size_t idx;
    if (it == ms.end()) {
      ms.push_back(row.m);
      errs.emplace_back();
      idx = ms.size() - 1;
    } else {
      idx = static_cast<std::size_t>(it - ms.begin());
    }
    errs[idx].push_back(row.error_up_to_sign);
  }
  if (ms.size() < 3)
    throw std::invalid_argument("report_scaling: need at least 3 values of m");

  ScalingSummary summary;
  std::vector<double> log_m(ms.size()), log_err(ms.size());
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const double med = median(errs[i]);
    if (!(med > 0.0))
      throw std::invalid_argument("report_scaling: non-positive median error");
    summary.medians.emplace_back(ms[i], med);
    log_m[i] = std::log(static_cast<double>(ms[i]));
    log_err[i] = std::log(med);
  }
  summary.slope = fit_slope(log_m, log_err);

  // Bootstrap over trial resamples within each cell.
  Rng rng(bootstrap_seed, stream::monte_carlo + 2);
  std::vector<double> slopes;
  slopes.reserve(static_cast<std::size_t>(bootstrap_reps));
  for (int b = 0; b < bootstrap_reps; ++b) {
    std::vector<double> boot_log_err(ms.size());
    bool valid = true;
    for (std::size_t i = 0; i < ms.size(); ++i) {
      const auto& pool = errs[i];
      std::vector<double> resample(pool.size());
      for (auto& v : resample)
        v = pool[static_cast<std::size_t>(rng.next_u64() % pool.size())];
      const double med = median(resample);
      if (!(med > 0.0)) {
        valid = false;
        break;
      }
      boot_log_err[i] = std::log(med);
    }
    if (valid) slopes.push_back(fit_slope(log_m, boot_log_err));
  }
  if (!slopes.empty()) {
    std::sort(slopes.begin(), slopes.end());
    const auto quantile = [&](double q) {
      const double pos = q * static_cast<double>(slopes.size() - 1);
      const std::size_t lo = static_cast<std::size_t>(pos);
      const std::size_t hi = std::min(lo + 1, slopes.size() - 1);
      const double frac = pos - static_cast<double>(lo);
      return slopes[lo] * (1.0 - frac) + slopes[hi] * frac;
    };
    summary.ci_lo = quantile(0.025);
    summary.ci_hi = quantile(0.975);
  } else {
    summary.ci_lo = summary.ci_hi = summary.slope;
  }
  return summary;
}

nlohmann::json ScalingSummary::to_json() const {
  nlohmann::json j;
  j["slope"] = slope;
  j["ci_lo"] = ci_lo;
  j["ci_hi"] = ci_hi;
  nlohmann::json meds = nlohmann::json::array();
  for (const auto& [m, med] : medians) meds.push_back({{"m", m}, {"median_error", med}});
  j["medians"] = meds;
  return j;
}

int report_assumptions(const LinkFunction& link, const Distribution& dist, int s,
                       std::uint64_t seed, std::ostream& out) {
  MomentReport report;
  if (dist.tag == DistTag::Gaussian) {
    report = estimate_moments_gaussian(link, 1000000, seed);
  } else if (dist.finite_support()) {
    report = estimate_moments_subgaussian(link, dist, s, MomentMethod::Enumeration, seed);
  } else {
    report = estimate_moments_subgaussian(link, dist, s, MomentMethod::MonteCarlo, seed);
  }
  const AssumptionVerdict verdict = check_assumptions(report, link, dist, s, seed);

  nlohmann::json j;
  j["moments"] = report.to_json();
  j["verdict"] = verdict.to_json();
  out << j.dump(2) << '\n';
  return verdict.mu_positive ? 0 : 1;
}

}  // namespace mpr
