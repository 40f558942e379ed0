// Command-line driver: measurement generation, single-instance recovery,
// seeded sweeps, moment reports, the assumption gate, and Gaussian-width
// estimates for named constraint sets.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mpr/eig.hpp"
#include "mpr/estimator.hpp"
#include "mpr/harness.hpp"
#include "mpr/model.hpp"
#include "mpr/projections.hpp"
#include "mpr/solver.hpp"
#include "mpr/textio.hpp"

namespace {

mpr::Distribution distribution_by_name(const std::string& name) {
  if (name == "gaussian") return mpr::Distribution::gaussian();
  if (name == "rademacher") return mpr::Distribution::rademacher();
  if (name == "uniform_scaled") return mpr::Distribution::uniform_scaled();
  throw CLI::ValidationError("--dist", "unknown distribution '" + name + "'");
}

mpr::LinkFunction link_by_name(const std::string& name, double tau, double noise_std) {
  if (name == "quadratic") return mpr::LinkFunction::quadratic();
  if (name == "abs") return mpr::LinkFunction::abs_value();
  if (name == "one_bit_intensity") return mpr::LinkFunction::one_bit_intensity(tau);
  if (name == "noisy_quadratic") return mpr::LinkFunction::noisy_quadratic(noise_std);
  throw CLI::ValidationError("--link", "unknown link '" + name + "'");
}

mpr::Signal make_signal_cli(const std::string& kind, int n, int s, std::uint64_t seed) {
  if (kind == "admissible") {
    mpr::Rng rng(seed, mpr::stream::signal);
    return mpr::make_signal(mpr::random_admissible_spec(n, s, rng), seed);
  }
  if (kind == "sparse_gaussian")
    return mpr::make_signal(mpr::SignalSpec::sparse_gaussian(n, s), seed);
  if (kind == "dense_unit") return mpr::make_signal(mpr::SignalSpec::dense_unit(n), seed);
  throw CLI::ValidationError("--signal", "unknown signal kind '" + kind + "'");
}

void write_vector_csv(const std::vector<double>& v, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  for (double x : v) f << mpr::format_double(x) << '\n';
}

std::vector<double> read_vector_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::vector<double> out;
  std::string line;
  while (std::getline(f, line)) {
    if (!line.empty()) out.push_back(mpr::parse_double(line));
  }
  return out;
}

void emit(const nlohmann::json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    std::ofstream f(out_path);
    if (!f) throw std::runtime_error("cannot open " + out_path);
    f << j.dump(2) << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"misspecified phase retrieval via the sparse-PCA SDP"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "emit a measurement set to disk");
  int gen_n = 32, gen_s = 3, gen_m = 1000;
  std::string gen_dist = "gaussian", gen_link = "quadratic", gen_signal = "admissible";
  double gen_tau = 1.0, gen_noise = 0.0;
  std::uint64_t gen_seed = 0;
  std::string gen_out, gen_truth_out;
  gen->add_option("--n", gen_n, "signal dimension");
  gen->add_option("--s", gen_s, "signal sparsity");
  gen->add_option("--m", gen_m, "number of measurements");
  gen->add_option("--dist", gen_dist, "gaussian|rademacher|uniform_scaled");
  gen->add_option("--link", gen_link, "quadratic|abs|one_bit_intensity|noisy_quadratic");
  gen->add_option("--tau", gen_tau, "one-bit threshold");
  gen->add_option("--noise-std", gen_noise, "noisy-quadratic noise std");
  gen->add_option("--signal", gen_signal, "admissible|sparse_gaussian|dense_unit");
  gen->add_option("--seed", gen_seed, "seed");
  gen->add_option("--out", gen_out, "output base path")->required();
  gen->add_option("--truth-out", gen_truth_out, "also write the ground-truth signal CSV");

  // recover
  auto* rec = app.add_subcommand("recover", "solve one instance, JSON report to stdout");
  std::string rec_data, rec_truth, rec_out;
  double rec_radius = 0.0;
  mpr::SdpConfig rec_cfg;
  rec->add_option("--data", rec_data, "measurement base path")->required();
  rec->add_option("--radius", rec_radius, "l1 radius s")->required();
  rec->add_option("--truth", rec_truth, "ground-truth signal CSV (enables error columns)");
  rec->add_option("--max-iters", rec_cfg.max_iters, "iteration cap");
  rec->add_option("--tol-primal", rec_cfg.tol_primal, "primal tolerance");
  rec->add_option("--tol-dual", rec_cfg.tol_dual, "dual tolerance");
  rec->add_option("--rho", rec_cfg.rho, "step scale");
  rec->add_option("--out", rec_out, "write JSON here instead of stdout");

  // sweep
  auto* swp = app.add_subcommand("sweep", "run a config-driven sweep, write CSV");
  std::string swp_config, swp_out;
  int swp_threads = 1;
  std::optional<std::uint64_t> swp_seed;
  swp->add_option("--config", swp_config, "JSON config file")->required();
  swp->add_option("--out", swp_out, "CSV output path (overrides config)");
  swp->add_option("--threads", swp_threads, "worker threads");
  swp->add_option("--seed", swp_seed, "override base_seed");

  // moments
  auto* mom = app.add_subcommand("moments", "moment report for a link/distribution pair");
  std::string mom_link = "quadratic", mom_dist = "gaussian", mom_mode = "auto", mom_out;
  double mom_tau = 1.0, mom_noise = 0.0;
  int mom_s = 2;
  long mom_samples = 1000000;
  std::uint64_t mom_seed = 0;
  mom->add_option("--link", mom_link, "link name");
  mom->add_option("--tau", mom_tau, "one-bit threshold");
  mom->add_option("--noise-std", mom_noise, "noisy-quadratic noise std");
  mom->add_option("--dist", mom_dist, "distribution name");
  mom->add_option("--s", mom_s, "sparsity parameter");
  mom->add_option("--mode", mom_mode, "auto|enum|mc");
  mom->add_option("--samples", mom_samples, "Monte-Carlo samples");
  mom->add_option("--seed", mom_seed, "seed");
  mom->add_option("--out", mom_out, "write JSON here instead of stdout");

  // check
  auto* chk = app.add_subcommand("check", "assumption gate; exit 1 when mu <= 0");
  std::string chk_link = "quadratic", chk_dist = "rademacher";
  double chk_tau = 1.0, chk_noise = 0.0;
  int chk_s = 2;
  std::uint64_t chk_seed = 0;
  chk->add_option("--link", chk_link, "link name");
  chk->add_option("--tau", chk_tau, "one-bit threshold");
  chk->add_option("--noise-std", chk_noise, "noisy-quadratic noise std");
  chk->add_option("--dist", chk_dist, "distribution name");
  chk->add_option("--s", chk_s, "sparsity parameter");
  chk->add_option("--seed", chk_seed, "seed");

  // width
  auto* wid = app.add_subcommand("width", "Gaussian-width estimate for a named constraint set");
  std::string wid_set = "spectrahedron", wid_out;
  int wid_n = 4;
  double wid_radius = 2.0;
  long wid_samples = 10000;
  std::uint64_t wid_seed = 0;
  wid->add_option("--set", wid_set, "spectrahedron|sparse|singleton|segment");
  wid->add_option("--n", wid_n, "matrix dimension");
  wid->add_option("--radius", wid_radius, "l1 radius for the sparse set");
  wid->add_option("--samples", wid_samples, "Monte-Carlo samples");
  wid->add_option("--seed", wid_seed, "seed");
  wid->add_option("--out", wid_out, "write JSON here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      const mpr::Signal x = make_signal_cli(gen_signal, gen_n, gen_s, gen_seed);
      const mpr::MeasurementSet data = mpr::generate(
          x, distribution_by_name(gen_dist), link_by_name(gen_link, gen_tau, gen_noise), gen_m,
          gen_seed);
      mpr::save_measurements(data, gen_out);
      if (!gen_truth_out.empty()) write_vector_csv(x, gen_truth_out);
      std::cout << "wrote " << gen_out << ".{a.csv,y.csv,meta.json}\n";
      return 0;
    }

    if (*rec) {
      const mpr::MeasurementSet data = mpr::load_measurements(rec_data);
      rec_cfg.sparsity_radius = rec_radius;
      std::optional<mpr::Signal> truth;
      if (!rec_truth.empty()) truth = read_vector_csv(rec_truth);
      const mpr::RecoveryReport report =
          mpr::recover(data, rec_cfg, truth ? &*truth : nullptr);
      emit(report.to_json(), rec_out);
      return 0;
    }

    if (*swp) {
      std::ifstream f(swp_config);
      if (!f) throw std::runtime_error("cannot open config " + swp_config);
      mpr::ExperimentConfig cfg = mpr::ExperimentConfig::from_json(nlohmann::json::parse(f));
      if (swp_seed) cfg.base_seed = *swp_seed;
      if (!swp_out.empty()) cfg.out_path = swp_out;
      if (cfg.out_path.empty()) throw std::runtime_error("no output path (config 'out' or --out)");
      const mpr::SweepResult result = mpr::run_sweep(cfg, swp_threads);
      std::ofstream out(cfg.out_path);
      if (!out) throw std::runtime_error("cannot open " + cfg.out_path);
      mpr::write_sweep_csv(result, out);
      std::cout << "wrote " << cfg.out_path << " (" << result.rows.size() << " rows)\n";
      return 0;
    }

    if (*mom) {
      const mpr::LinkFunction link = link_by_name(mom_link, mom_tau, mom_noise);
      const mpr::Distribution dist = distribution_by_name(mom_dist);
      mpr::MomentReport report;
      if (mom_mode == "enum") {
        report = mpr::estimate_moments_subgaussian(link, dist, mom_s,
                                                   mpr::MomentMethod::Enumeration, mom_seed);
      } else if (mom_mode == "mc") {
        if (dist.tag == mpr::DistTag::Gaussian) {
          report = mpr::estimate_moments_gaussian(link, mom_samples, mom_seed, true);
        } else {
          report = mpr::estimate_moments_subgaussian(
              link, dist, mom_s, mpr::MomentMethod::MonteCarlo, mom_seed, mom_samples);
        }
      } else if (mom_mode == "auto") {
        if (dist.tag == mpr::DistTag::Gaussian) {
          report = mpr::estimate_moments_gaussian(link, mom_samples, mom_seed);
        } else if (dist.finite_support()) {
          report = mpr::estimate_moments_subgaussian(link, dist, mom_s,
                                                     mpr::MomentMethod::Enumeration, mom_seed);
        } else {
          report = mpr::estimate_moments_subgaussian(
              link, dist, mom_s, mpr::MomentMethod::MonteCarlo, mom_seed, mom_samples);
        }
      } else {
        throw CLI::ValidationError("--mode", "unknown mode '" + mom_mode + "'");
      }
      emit(report.to_json(), mom_out);
      return 0;
    }

    if (*chk) {
      return mpr::report_assumptions(link_by_name(chk_link, chk_tau, chk_noise),
                                     distribution_by_name(chk_dist), chk_s, chk_seed, std::cout);
    }

    if (*wid) {
      mpr::WidthEstimate est;
      if (wid_set == "spectrahedron") {
        est = mpr::estimate_gaussian_width(
            mpr::ProjectionOracle([](const mpr::SymMatrix& m) { return mpr::project_psd_trace1(m); }),
            wid_n, wid_samples, wid_seed);
      } else if (wid_set == "sparse") {
        const double radius = wid_radius;
        est = mpr::estimate_gaussian_width(
            mpr::ProjectionOracle([radius](const mpr::SymMatrix& m) {
              return mpr::project_spectrahedron_l1(m, radius);
            }),
            wid_n, wid_samples, wid_seed);
      } else if (wid_set == "singleton") {
        std::vector<double> e1(static_cast<std::size_t>(wid_n), 0.0);
        e1[0] = 1.0;
        const mpr::SymMatrix point = mpr::SymMatrix::rank_one(e1);
        est = mpr::estimate_gaussian_width(
            mpr::ProjectionOracle([point](const mpr::SymMatrix&) { return point; }), wid_n,
            wid_samples, wid_seed);
      } else if (wid_set == "segment") {
        if (wid_n < 2) throw CLI::ValidationError("--n", "segment set needs n >= 2");
        std::vector<double> e1(static_cast<std::size_t>(wid_n), 0.0), e2 = e1;
        e1[0] = 1.0;
        e2[1] = 1.0;
        const mpr::SymMatrix p = mpr::SymMatrix::rank_one(e1);
        const mpr::SymMatrix q = mpr::SymMatrix::rank_one(e2);
        mpr::SymMatrix d = q;
        d -= p;
        const double d2 = mpr::frobenius_inner(d, d);
        auto project = [p, d, d2](const mpr::SymMatrix& m) {
          double t = mpr::frobenius_inner(m - p, d) / d2;
          t = std::min(1.0, std::max(0.0, t));
          mpr::SymMatrix out = p;
          out.add_scaled(d, t);
          return out;
        };
        est = mpr::estimate_gaussian_width(mpr::ProjectionOracle(project), wid_n, wid_samples,
                                           wid_seed);
      } else {
        throw CLI::ValidationError("--set", "unknown set '" + wid_set + "'");
      }
      nlohmann::json j;
      j["set"] = wid_set;
      j["n"] = wid_n;
      j["width"] = est.width;
      j["stderr"] = est.stderr_;
      j["samples"] = est.samples;
      emit(j, wid_out);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
