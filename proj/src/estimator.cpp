#include "mpr/estimator.hpp"

#include <cmath>
#include <stdexcept>

namespace mpr {

namespace {

// Double-double accumulation for the enumeration path. The Rademacher
// identity sigma = -mu is asserted exactly by tests, so the pattern sums
// are carried with compensated arithmetic and rounded once at the end.
struct DD {
  double hi = 0.0;
  double lo = 0.0;
};

DD two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  const double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}

DD two_prod(double a, double b) {
  const double p = a * b;
  const double err = std::fma(a, b, -p);
  return {p, err};
}

DD dd_add(DD a, DD b) {
  DD s = two_sum(a.hi, b.hi);
  s.lo += a.lo + b.lo;
  const DD t = two_sum(s.hi, s.lo);
  return t;
}

DD dd_add(DD a, double b) { return dd_add(a, DD{b, 0.0}); }

DD dd_mul(DD a, double b) {
  DD p = two_prod(a.hi, b);
  p.lo += a.lo * b;
  return two_sum(p.hi, p.lo);
}

DD dd_mul(DD a, DD b) {
  DD p = two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return two_sum(p.hi, p.lo);
}

DD dd_sub(DD a, DD b) { return dd_add(a, DD{-b.hi, -b.lo}); }

DD dd_div(DD a, double b) {
  const double q1 = a.hi / b;
  const DD r = dd_sub(a, dd_mul(DD{q1, 0.0}, b));
  const double q2 = (r.hi + r.lo) / b;
  return two_sum(q1, q2);
}

double dd_value(DD a) { return a.hi + a.lo; }

constexpr double kPi = 3.141592653589793238462643383279502884;

double std_normal_pdf(double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * kPi); }

double std_normal_upper_tail(double t) { return 0.5 * std::erfc(t / std::sqrt(2.0)); }

// Closed-form mu(f, g) = Cov(g^2, f(g)) for the built-in links.
std::optional<double> analytic_gaussian_mu(const LinkFunction& link) {
  switch (link.tag) {
    case LinkTag::Quadratic:
    case LinkTag::NoisyQuadratic:
      // Var(g^2) = E g^4 - 1 = 2; independent noise drops out.
      return 2.0;
    case LinkTag::AbsValue:
      // E|g|^3 - E|g| = 2 sqrt(2/pi) - sqrt(2/pi).
      return std::sqrt(2.0 / kPi);
    case LinkTag::OneBitIntensity:
      // E g^2 1{|g|>tau} - P(|g|>tau) = 2 tau phi(tau).
      return 2.0 * link.tau * std_normal_pdf(link.tau);
    case LinkTag::Custom:
      return std::nullopt;
  }
  return std::nullopt;
}

struct CovEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
};

// Sample covariance with standard error from the variance of the centered
// product terms.
CovEstimate sample_covariance(const std::vector<double>& x, const std::vector<double>& f) {
  const std::size_t n = x.size();
  double mx = 0.0, mf = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    mf += f[i];
  }
  mx /= static_cast<double>(n);
  mf /= static_cast<double>(n);
  double cov = 0.0, cov2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = (x[i] - mx) * (f[i] - mf);
    cov += p;
    cov2 += p * p;
  }
  cov /= static_cast<double>(n);
  const double var_p = cov2 / static_cast<double>(n) - cov * cov;
  CovEstimate est;
  est.value = cov;
  est.stderr_ = std::sqrt(std::max(var_p, 0.0) / static_cast<double>(n));
  return est;
}

}  // namespace

SymMatrix reweighted_covariance(const MeasurementSet& data) {
  const int m = data.m();
  const int n = data.n();
  if (m < 1) throw std::invalid_argument("reweighted_covariance: empty measurement set");

  // Accumulate the upper triangle of sum_i y_i a_i a_i^T, then subtract
  // (sum_i y_i) I and divide by m; exact symmetry by construction.
  std::vector<double> upper(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
  double ysum = 0.0;
  for (int i = 0; i < m; ++i) {
    const double* r = data.a.row(i);
    const double yi = data.y[static_cast<std::size_t>(i)];
    ysum += yi;
    for (int j = 0; j < n; ++j) {
      const double w = yi * r[j];
      double* dst = upper.data() + static_cast<std::size_t>(j) * static_cast<std::size_t>(n);
      for (int k = j; k < n; ++k) dst[k] += w * r[k];
    }
  }
  SymMatrix out(n);
  const double inv_m = 1.0 / static_cast<double>(m);
  for (int j = 0; j < n; ++j) {
    for (int k = j; k < n; ++k) {
      double v = upper[static_cast<std::size_t>(j) * static_cast<std::size_t>(n) +
                       static_cast<std::size_t>(k)];
      if (j == k) v -= ysum;
      out.set(j, k, v * inv_m);
    }
  }
  return out;
}

SymMatrix population_covariance_gaussian(const Signal& x_star, double mu) {
  SymMatrix out = SymMatrix::rank_one(x_star);
  out *= mu;
  return out;
}

SymMatrix population_covariance_subgaussian(const Signal& x_star, double mu, double sigma, int s) {
  if (s < 2) throw std::invalid_argument("population_covariance_subgaussian: s must be >= 2");
  const std::vector<int> support = signal_support(x_star);
  if (static_cast<int>(support.size()) != s)
    throw std::invalid_argument("population_covariance_subgaussian: support size != s");
  const double mag = 1.0 / std::sqrt(static_cast<double>(s));
  for (int idx : support) {
    if (std::abs(std::abs(x_star[static_cast<std::size_t>(idx)]) - mag) > 1e-12)
      throw std::invalid_argument("population_covariance_subgaussian: signal not admissible");
  }

  const double beta = sigma / static_cast<double>(s - 1);
  SymMatrix out = SymMatrix::rank_one(x_star);
  out *= (mu - beta);
  for (int idx : support) out.set(idx, idx, out(idx, idx) + beta);  // + beta * P_I
  return out;
}

MomentReport estimate_moments_gaussian(const LinkFunction& link, long mc_samples,
                                       std::uint64_t seed, bool force_monte_carlo) {
  MomentReport report;
  report.s = 0;
  if (!force_monte_carlo) {
    if (const auto mu = analytic_gaussian_mu(link)) {
      report.mu = *mu;
      report.method = MomentMethod::Analytic;
      return report;
    }
  }
  if (mc_samples < 1000)
    throw std::invalid_argument("estimate_moments_gaussian: need at least 1e3 samples");

  Rng rng(seed, stream::monte_carlo);
  std::vector<double> g2(static_cast<std::size_t>(mc_samples));
  std::vector<double> fv(static_cast<std::size_t>(mc_samples));
  for (long i = 0; i < mc_samples; ++i) {
    const double g = rng.gaussian();
    double y = link.deterministic(g);
    if (link.has_noise()) y += link.noise_std * rng.gaussian();
    g2[static_cast<std::size_t>(i)] = g * g;
    fv[static_cast<std::size_t>(i)] = y;
  }
  const CovEstimate est = sample_covariance(g2, fv);
  report.mu = est.value;
  report.mu_stderr = est.stderr_;
  report.method = MomentMethod::MonteCarlo;
  report.samples = mc_samples;
  return report;
}

MomentReport estimate_moments_subgaussian(const LinkFunction& link, const Distribution& dist,
                                          int s, MomentMethod mode, std::uint64_t seed,
                                          long mc_samples) {
  if (s < 1) throw std::invalid_argument("estimate_moments_subgaussian: s must be >= 1");
  MomentReport report;
  report.s = s;

  if (mode == MomentMethod::Enumeration) {
    if (!dist.finite_support())
      throw std::invalid_argument(
          "estimate_moments_subgaussian: enumeration needs a finite-support distribution; "
          "use MonteCarlo");
    const auto atoms = dist.support_atoms();
    const std::size_t k = atoms.size();
    double budget = 1.0;
    for (int i = 0; i < s; ++i) budget *= static_cast<double>(k);
    if (budget > static_cast<double>(1 << 24))
      throw std::invalid_argument(
          "estimate_moments_subgaussian: enumeration budget k^s > 2^24 exceeded; use MonteCarlo");
    const std::uint64_t total = static_cast<std::uint64_t>(budget);

    const double sd = static_cast<double>(s);
    DD sum_wf, sum_wq, sum_wr, sum_wqf, sum_wrf;
    std::vector<std::size_t> odo(static_cast<std::size_t>(s), 0);
    for (std::uint64_t pat = 0; pat < total; ++pat) {
      double weight = 1.0;
      double zsum = 0.0;
      double z2sum = 0.0;
      for (int i = 0; i < s; ++i) {
        const auto& atom = atoms[odo[static_cast<std::size_t>(i)]];
        weight *= atom.second;
        zsum += atom.first;
        z2sum += atom.first * atom.first;
      }
      // T = sqrt(s) Zbar, q = T^2, ||r||^2 = sum z^2 - q; q and its
      // complement share one rounding so q + r2 == z2sum exactly.
      const DD q = dd_div(dd_mul(DD{zsum, 0.0}, DD{zsum, 0.0}), sd);
      const DD r2 = dd_sub(DD{z2sum, 0.0}, q);
      const double t = zsum / std::sqrt(sd);
      const double f = link.deterministic(t);

      sum_wf = dd_add(sum_wf, two_prod(weight, f));
      sum_wq = dd_add(sum_wq, dd_mul(q, weight));
      sum_wr = dd_add(sum_wr, dd_mul(r2, weight));
      sum_wqf = dd_add(sum_wqf, dd_mul(dd_mul(q, weight), f));
      sum_wrf = dd_add(sum_wrf, dd_mul(dd_mul(r2, weight), f));

      for (int i = 0; i < s; ++i) {
        if (++odo[static_cast<std::size_t>(i)] < k) break;
        odo[static_cast<std::size_t>(i)] = 0;
      }
    }
    const DD mu = dd_sub(sum_wqf, dd_mul(sum_wq, sum_wf));
    const DD sg = dd_sub(sum_wrf, dd_mul(sum_wr, sum_wf));
    report.mu = dd_value(mu);
    report.sigma = dd_value(sg);
    report.method = MomentMethod::Enumeration;
    return report;
  }

  if (mode != MomentMethod::MonteCarlo)
    throw std::invalid_argument("estimate_moments_subgaussian: mode must be Enumeration or MonteCarlo");
  if (mc_samples < 1000)
    throw std::invalid_argument("estimate_moments_subgaussian: need at least 1e3 samples");

  Rng rng(seed, stream::monte_carlo);
  const double sd = static_cast<double>(s);
  std::vector<double> qv(static_cast<std::size_t>(mc_samples));
  std::vector<double> rv(static_cast<std::size_t>(mc_samples));
  std::vector<double> fv(static_cast<std::size_t>(mc_samples));
  for (long i = 0; i < mc_samples; ++i) {
    double zsum = 0.0, z2sum = 0.0;
    for (int j = 0; j < s; ++j) {
      const double z = dist.sample(rng);
      zsum += z;
      z2sum += z * z;
    }
    const double q = zsum * zsum / sd;
    const double t = zsum / std::sqrt(sd);
    double y = link.deterministic(t);
    if (link.has_noise()) y += link.noise_std * rng.gaussian();
    qv[static_cast<std::size_t>(i)] = q;
    rv[static_cast<std::size_t>(i)] = z2sum - q;
    fv[static_cast<std::size_t>(i)] = y;
  }
  const CovEstimate mu_est = sample_covariance(qv, fv);
  const CovEstimate sg_est = sample_covariance(rv, fv);
  report.mu = mu_est.value;
  report.mu_stderr = mu_est.stderr_;
  report.sigma = sg_est.value;
  report.sigma_stderr = sg_est.stderr_;
  report.method = MomentMethod::MonteCarlo;
  report.samples = mc_samples;
  return report;
}

nlohmann::json MomentReport::to_json() const {
  nlohmann::json j;
  j["mu"] = mu;
  if (sigma) {
    j["sigma"] = *sigma;
  } else {
    j["sigma"] = nullptr;
  }
  switch (method) {
    case MomentMethod::Analytic:
      j["method"] = "analytic";
      break;
    case MomentMethod::Enumeration:
      j["method"] = "enumeration";
      break;
    case MomentMethod::MonteCarlo:
      j["method"] = "monte_carlo";
      j["samples"] = samples;
      j["mu_stderr"] = mu_stderr;
      if (sigma) j["sigma_stderr"] = sigma_stderr;
      break;
  }
  j["s"] = s;
  return j;
}

AssumptionVerdict check_assumptions(const MomentReport& report, const LinkFunction& link,
                                    const Distribution& dist, int s, std::uint64_t seed,
                                    long psi_samples) {
  AssumptionVerdict verdict;

  const double mu_slack = (report.method == MomentMethod::MonteCarlo) ? 3.0 * report.mu_stderr : 0.0;
  verdict.mu_margin = report.mu - mu_slack;
  verdict.mu_positive = verdict.mu_margin > 0.0;

  if (report.sigma) {
    const double sg_slack =
        (report.method == MomentMethod::MonteCarlo) ? 3.0 * report.sigma_stderr : 0.0;
    verdict.sigma_margin = -(*report.sigma + sg_slack);
    verdict.sigma_nonpositive = verdict.sigma_margin >= 0.0;
  } else {
    // Gaussian case: sigma is identically zero.
    verdict.sigma_margin = 0.0;
    verdict.sigma_nonpositive = true;
  }

  // Moment growth of |f(T)|, T = sqrt(s) Zbar_s, against C*p with
  // C = E|f(T)|. A psi_1 variable keeps (E|f|^p)^(1/p) below a line in p.
  Rng rng(seed, stream::monte_carlo + 1);
  const double sd = static_cast<double>(std::max(s, 1));
  const int ps[4] = {1, 2, 4, 8};
  double sums[4] = {0.0, 0.0, 0.0, 0.0};
  for (long i = 0; i < psi_samples; ++i) {
    double t;
    if (dist.tag == DistTag::Gaussian) {
      t = rng.gaussian();  // sqrt(s) Zbar is standard Gaussian for every s
    } else {
      double zsum = 0.0;
      for (int j = 0; j < s; ++j) zsum += dist.sample(rng);
      t = zsum / std::sqrt(sd);
    }
    double y = link.deterministic(t);
    if (link.has_noise()) y += link.noise_std * rng.gaussian();
    const double af = std::abs(y);
    double pw = af;
    sums[0] += pw;
    pw *= pw;
    sums[1] += pw;
    pw *= pw;
    sums[2] += pw;
    pw *= pw;
    sums[3] += pw;
  }
  const double c = sums[0] / static_cast<double>(psi_samples);
  for (int k = 0; k < 4; ++k) {
    const double moment =
        std::pow(sums[k] / static_cast<double>(psi_samples), 1.0 / static_cast<double>(ps[k]));
    verdict.psi1_moment_growth.push_back({ps[k], moment, c * static_cast<double>(ps[k])});
  }
  return verdict;
}

nlohmann::json AssumptionVerdict::to_json() const {
  nlohmann::json j;
  j["mu_positive"] = mu_positive;
  j["mu_margin"] = mu_margin;
  j["sigma_nonpositive"] = sigma_nonpositive;
  j["sigma_margin"] = sigma_margin;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : psi1_moment_growth) {
    rows.push_back({{"p", row.p}, {"moment", row.moment}, {"bound", row.bound}});
  }
  j["psi1_moment_growth"] = rows;
  return j;
}

}  // namespace mpr
