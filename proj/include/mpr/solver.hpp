#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "mpr/estimator.hpp"
#include "mpr/matrix.hpp"
#include "mpr/model.hpp"

namespace mpr {

// Solver configuration for the sparse-PCA SDP
//   max <X, Sigma_hat>  s.t.  X >= 0, Tr X = 1, ||X||_1 <= s.
struct SdpConfig {
  double sparsity_radius = 1.0;  // the l1 radius s; must be >= 1
  int max_iters = 5000;
  double tol_primal = 1e-7;
  double tol_dual = 1e-7;
  double rho = 1.0;  // step scale; step size is rho / ||Sigma_hat||
  std::optional<SymMatrix> warm_start;
  int dykstra_max_cycles = 200;
  double dykstra_tol = 1e-9;
};

// Frobenius projection map onto a convex subset of the unit-trace PSD
// matrices. Must be idempotent and produce feasible output; solve_k_pca
// probes these invariants before iterating.
using ProjectionOracle = std::function<SymMatrix(const SymMatrix&)>;

class OracleError : public std::runtime_error {
 public:
  explicit OracleError(const std::string& what) : std::runtime_error(what) {}
};

struct RecoveryReport {
  SymMatrix X_hat;
  std::vector<double> x_hat;
  double objective = 0.0;  // <X_hat, Sigma_hat>
  int iters = 0;
  double primal_residual = 0.0;  // ||X_{k+1} - X_k||_F at exit
  double dual_residual = 0.0;    // |obj_{k+1} - obj_k| / (1 + |obj_k|) at exit
  bool converged = false;
  bool degenerate = false;  // eigengap of X_hat below 1e-12
  std::optional<double> error_up_to_sign;  // min(||x_hat -+ x*||_2), when truth given
  std::optional<double> frobenius_error;   // ||X_hat - x* x*^T||_F, when truth given

  nlohmann::json to_json() const;
  static std::string csv_header();
  std::string csv_row() const;
};

// Dykstra's alternating projections onto
// {X >= 0, Tr X = 1} and {||X||_1 <= radius}: converges to the exact
// Frobenius projection onto the intersection. Returns the PSD-side iterate
// so trace and positivity are exact at exit.
SymMatrix project_spectrahedron_l1(const SymMatrix& a, double radius, int max_cycles = 200,
                                   double tol = 1e-9);

// Algorithm: projected gradient ascent X <- P(X + eta * Sigma_hat) with the
// Dykstra intersection projection; eta = rho / ||Sigma_hat||.
RecoveryReport solve_sparse_pca(const SymMatrix& sigma_hat, const SdpConfig& cfg);

// Same ascent loop against a user-supplied projection oracle. Probes the
// oracle (trace, PSD, idempotence) before iterating and throws OracleError
// on violation.
RecoveryReport solve_k_pca(const SymMatrix& sigma_hat, const ProjectionOracle& oracle,
                           const SdpConfig& cfg);

// Full pipeline: reweighted covariance -> sparse-PCA SDP -> leading
// eigenvector. With ground truth supplied, fills the up-to-sign and
// Frobenius errors.
RecoveryReport recover(const MeasurementSet& data, const SdpConfig& cfg,
                       const Signal* truth = nullptr);

struct WidthEstimate {
  double width = 0.0;
  double stderr_ = 0.0;
  long samples = 0;
};

// Linear-maximization oracle: returns an approximate argmax of <G, X> over
// the constraint set.
using LinearMaxOracle = std::function<SymMatrix(const SymMatrix& g)>;

// Monte-Carlo Gaussian width: mean over symmetric Gaussian G of
// sup_{X in K} <G, X - X0>. G is drawn as (H + H^T)/sqrt(2) with H i.i.d.
// standard normal, the standard Gaussian ensemble on symmetric matrices.
WidthEstimate estimate_gaussian_width(const LinearMaxOracle& maximize, const SymMatrix& reference,
                                      int n, long mc_samples, std::uint64_t seed);

// Convenience overload: builds the maximizer by running solve_k_pca with
// Sigma_hat := G, and uses oracle(0) as the reference point.
WidthEstimate estimate_gaussian_width(const ProjectionOracle& oracle, int n, long mc_samples,
                                      std::uint64_t seed, const SdpConfig& inner_cfg = {});

}  // namespace mpr
