#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mpr/matrix.hpp"
#include "mpr/model.hpp"

namespace mpr {

// Reweighted sample covariance (1/m) sum_i y_i (a_i a_i^T - I_n).
SymMatrix reweighted_covariance(const MeasurementSet& data);

// Population covariance for Gaussian sampling vectors: mu * x x^T.
SymMatrix population_covariance_gaussian(const Signal& x_star, double mu);

// Population covariance for independent subgaussian entries and an
// admissible signal with support I, |I| = s >= 2:
//   Sigma = mu * x x^T + sigma/(s-1) * (P_I - x x^T).
// The sign of the second term follows the trace identity
// alpha + (n-1) beta = Tr(Sigma) = sigma + mu, i.e. beta = +sigma/(s-1);
// the enumeration oracle in the tests confirms this choice.
SymMatrix population_covariance_subgaussian(const Signal& x_star, double mu, double sigma, int s);

enum class MomentMethod { Analytic, Enumeration, MonteCarlo };

// Moment functionals of the link against the standardized mean
// T = sqrt(s) * Zbar_s: mu = Cov(T^2, f(T)) and, in the subgaussian case,
// sigma = Cov(||r||_2^2, f(T)) for the residual vector r.
struct MomentReport {
  double mu = 0.0;
  std::optional<double> sigma;  // absent in the Gaussian case (identically 0)
  MomentMethod method = MomentMethod::Analytic;
  long samples = 0;           // Monte-Carlo only
  double mu_stderr = 0.0;     // Monte-Carlo only
  double sigma_stderr = 0.0;  // Monte-Carlo only
  int s = 0;                  // sparsity parameter (0 marks the Gaussian case)

  nlohmann::json to_json() const;
};

// mu(f, g) = Cov(g^2, f(g)) for standard Gaussian g. Closed forms for the
// built-in links unless force_monte_carlo; Monte-Carlo otherwise.
MomentReport estimate_moments_gaussian(const LinkFunction& link, long mc_samples,
                                       std::uint64_t seed, bool force_monte_carlo = false);

// mu(f,Z,s) and sigma(f,Z,s) computed jointly over the s-tuple
// distribution. Enumeration requires finite support and at most 2^24
// patterns, and evaluates only the deterministic part of the link
// (additive independent noise contributes nothing to either covariance).
MomentReport estimate_moments_subgaussian(const LinkFunction& link, const Distribution& dist,
                                          int s, MomentMethod mode, std::uint64_t seed,
                                          long mc_samples = 1000000);

struct PsiMomentRow {
  int p;
  double moment;  // empirical (E|f|^p)^(1/p)
  double bound;   // C * p with C the empirical first moment
};

// Heuristic assumption check. The psi_1 row list compares moment growth of
// |f(T)| against linear growth in p; it never gates the solver.
struct AssumptionVerdict {
  bool mu_positive = false;
  double mu_margin = 0.0;  // point estimate minus 3 * stderr
  bool sigma_nonpositive = false;
  double sigma_margin = 0.0;  // -(point estimate plus 3 * stderr)
  std::vector<PsiMomentRow> psi1_moment_growth;

  nlohmann::json to_json() const;
};

AssumptionVerdict check_assumptions(const MomentReport& report, const LinkFunction& link,
                                    const Distribution& dist, int s, std::uint64_t seed,
                                    long psi_samples = 100000);

}  // namespace mpr
