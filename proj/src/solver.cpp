#include "mpr/solver.hpp"

#include <cmath>

#include "mpr/eig.hpp"
#include "mpr/projections.hpp"
#include "mpr/textio.hpp"

namespace mpr {

namespace {

void validate_config(const SdpConfig& cfg) {
  if (!(cfg.sparsity_radius >= 1.0))
    throw std::invalid_argument("SdpConfig: sparsity radius must be >= 1");
  if (cfg.max_iters < 1) throw std::invalid_argument("SdpConfig: max_iters must be >= 1");
  if (!(cfg.tol_primal > 0.0) || !(cfg.tol_dual > 0.0))
    throw std::invalid_argument("SdpConfig: tolerances must be positive");
  if (!(cfg.rho > 0.0)) throw std::invalid_argument("SdpConfig: rho must be positive");
}

double step_size(const SymMatrix& sigma_hat, double rho) {
  const double opnorm = operator_norm(sigma_hat);
  // A zero objective matrix makes the step irrelevant; any scale works.
  return (opnorm > 1e-300) ? rho / opnorm : 1.0;
}

void finalize_report(RecoveryReport& report, const SymMatrix& sigma_hat) {
  const LeadingVector lead = leading_eigenvector(report.X_hat);
  report.x_hat = lead.v;
  report.degenerate = lead.degenerate;
  report.objective = frobenius_inner(report.X_hat, sigma_hat);
}

void attach_truth_errors(RecoveryReport& report, const Signal& truth) {
  double dplus = 0.0, dminus = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double a = report.x_hat[i] - truth[i];
    const double b = report.x_hat[i] + truth[i];
    dplus += a * a;
    dminus += b * b;
  }
  report.error_up_to_sign = std::sqrt(std::min(dplus, dminus));
  report.frobenius_error = frobenius_distance(report.X_hat, SymMatrix::rank_one(truth));
}

SymMatrix initial_point(const SdpConfig& cfg, int n) {
  if (cfg.warm_start) {
    if (cfg.warm_start->dim() != n)
      throw std::invalid_argument("SdpConfig: warm start dimension mismatch");
    return *cfg.warm_start;
  }
  // Barycenter I/n: feasible for every radius >= 1 since ||I/n||_1 = 1.
  SymMatrix x0 = SymMatrix::identity(n);
  x0 *= 1.0 / static_cast<double>(n);
  return x0;
}

// Shared ascent loop; `project` must map onto the feasible set.
template <typename Project>
RecoveryReport ascend(const SymMatrix& sigma_hat, const SdpConfig& cfg, Project&& project) {
  const int n = sigma_hat.dim();
  const double eta = step_size(sigma_hat, cfg.rho);

  SymMatrix x = project(initial_point(cfg, n));
  double obj = frobenius_inner(x, sigma_hat);

  RecoveryReport report;
  report.converged = false;
  for (int k = 1; k <= cfg.max_iters; ++k) {
    SymMatrix target = x;
    target.add_scaled(sigma_hat, eta);
    SymMatrix next = project(target);

    const double dx = frobenius_distance(next, x);
    const double obj_next = frobenius_inner(next, sigma_hat);
    const double dobj = std::abs(obj_next - obj) / (1.0 + std::abs(obj));

    x = std::move(next);
    obj = obj_next;
    report.iters = k;
    report.primal_residual = dx;
    report.dual_residual = dobj;
    if (dx <= cfg.tol_primal && dobj <= cfg.tol_dual) {
      report.converged = true;
      break;
    }
  }
  report.X_hat = std::move(x);
  return report;
}

}  // namespace

SymMatrix project_spectrahedron_l1(const SymMatrix& a, double radius, int max_cycles, double tol) {
  SymMatrix z = a;
  SymMatrix p(a.dim());
  SymMatrix q(a.dim());
  SymMatrix y = a;
  for (int cycle = 0; cycle < max_cycles; ++cycle) {
    SymMatrix t = z + p;
    y = project_psd_trace1(t);
    p = t - y;

    t = y + q;
    z = project_l1_ball(t, radius);
    q = t - z;

    if (frobenius_distance(y, z) <= tol) break;
  }
  return y;  // PSD side: trace and positivity exact at exit
}

RecoveryReport solve_sparse_pca(const SymMatrix& sigma_hat, const SdpConfig& cfg) {
  validate_config(cfg);
  if (!sigma_hat.all_finite())
    throw std::invalid_argument("solve_sparse_pca: non-finite objective matrix");

  RecoveryReport report = ascend(sigma_hat, cfg, [&](const SymMatrix& m) {
    return project_spectrahedron_l1(m, cfg.sparsity_radius, cfg.dykstra_max_cycles,
                                    cfg.dykstra_tol);
  });
  finalize_report(report, sigma_hat);
  return report;
}

RecoveryReport solve_k_pca(const SymMatrix& sigma_hat, const ProjectionOracle& oracle,
                           const SdpConfig& cfg) {
  validate_config(cfg);
  if (!sigma_hat.all_finite())
    throw std::invalid_argument("solve_k_pca: non-finite objective matrix");
  const int n = sigma_hat.dim();

  // Probe the oracle before iterating: unit trace, PSD, idempotent.
  {
    SymMatrix probe = SymMatrix::identity(n);
    probe *= 1.0 / static_cast<double>(n);
    Rng rng(0x70726f6265ull, 0);
    SymMatrix wild(n);
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) wild.set(i, j, 2.0 * rng.uniform01() - 1.0);
    }
    for (const SymMatrix& input : {probe, wild}) {
      const SymMatrix out = oracle(input);
      if (out.dim() != n) throw OracleError("projection oracle: dimension mismatch");
      if (std::abs(out.trace() - 1.0) > 1e-6)
        throw OracleError("projection oracle: output trace differs from 1");
      const EigenDecomposition d = eigh(out);
      if (d.eigenvalues.back() < -1e-6)
        throw OracleError("projection oracle: output not PSD within tolerance");
      if (frobenius_distance(oracle(out), out) > 1e-8)
        throw OracleError("projection oracle: not idempotent on probe input");
    }
  }

  RecoveryReport report = ascend(sigma_hat, cfg, [&](const SymMatrix& m) { return oracle(m); });
  finalize_report(report, sigma_hat);
  return report;
}

RecoveryReport recover(const MeasurementSet& data, const SdpConfig& cfg, const Signal* truth) {
  const SymMatrix sigma_hat = reweighted_covariance(data);
  RecoveryReport report = solve_sparse_pca(sigma_hat, cfg);
  if (truth != nullptr) attach_truth_errors(report, *truth);
  return report;
}

WidthEstimate estimate_gaussian_width(const LinearMaxOracle& maximize, const SymMatrix& reference,
                                      int n, long mc_samples, std::uint64_t seed) {
  if (mc_samples < 1) throw std::invalid_argument("estimate_gaussian_width: need samples >= 1");
  Rng rng(seed, stream::width);
  double sum = 0.0, sum2 = 0.0;
  for (long i = 0; i < mc_samples; ++i) {
    // G = (H + H^T)/sqrt(2), H i.i.d. standard normal.
    SymMatrix g(n);
    constexpr double inv_root2 = 0.7071067811865476;
    for (int r = 0; r < n; ++r) {
      for (int c = r; c < n; ++c) {
        const double h1 = rng.gaussian();
        const double h2 = (r == c) ? h1 : rng.gaussian();
        g.set(r, c, (h1 + h2) * inv_root2);
      }
    }
    const SymMatrix xstar = maximize(g);
    const double w = frobenius_inner(g, xstar) - frobenius_inner(g, reference);
    sum += w;
    sum2 += w * w;
  }
  WidthEstimate est;
  est.samples = mc_samples;
  est.width = sum / static_cast<double>(mc_samples);
  const double var = sum2 / static_cast<double>(mc_samples) - est.width * est.width;
  est.stderr_ = std::sqrt(std::max(var, 0.0) / static_cast<double>(mc_samples));
  return est;
}

WidthEstimate estimate_gaussian_width(const ProjectionOracle& oracle, int n, long mc_samples,
                                      std::uint64_t seed, const SdpConfig& inner_cfg) {
  const SymMatrix reference = oracle(SymMatrix(n));
  LinearMaxOracle maximize = [&](const SymMatrix& g) {
    return solve_k_pca(g, oracle, inner_cfg).X_hat;
  };
  return estimate_gaussian_width(maximize, reference, n, mc_samples, seed);
}

nlohmann::json RecoveryReport::to_json() const {
  nlohmann::json j;
  const int n = X_hat.dim();
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < n; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < n; ++k) row.push_back(X_hat(i, k));
    rows.push_back(row);
  }
  j["X_hat"] = rows;
  j["x_hat"] = x_hat;
  j["objective"] = objective;
  j["iters"] = iters;
  j["primal_residual"] = primal_residual;
  j["dual_residual"] = dual_residual;
  j["converged"] = converged;
  j["degenerate"] = degenerate;
  j["error_up_to_sign"] = error_up_to_sign ? nlohmann::json(*error_up_to_sign) : nlohmann::json();
  j["frobenius_error"] = frobenius_error ? nlohmann::json(*frobenius_error) : nlohmann::json();
  return j;
}

std::string RecoveryReport::csv_header() {
  return "objective,iters,primal_residual,dual_residual,converged,degenerate,"
         "error_up_to_sign,frobenius_error";
}

std::string RecoveryReport::csv_row() const {
  std::string row = format_double(objective);
  row += ',' + std::to_string(iters);
  row += ',' + format_double(primal_residual);
  row += ',' + format_double(dual_residual);
  row += converged ? ",1" : ",0";
  row += degenerate ? ",1" : ",0";
  row += ',' + (error_up_to_sign ? format_double(*error_up_to_sign) : std::string("nan"));
  row += ',' + (frobenius_error ? format_double(*frobenius_error) : std::string("nan"));
  return row;
}

}  // namespace mpr
