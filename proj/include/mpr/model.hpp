#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mpr/matrix.hpp"
#include "mpr/rng.hpp"

namespace mpr {

using Signal = std::vector<double>;

enum class SignalKind { Admissible, SparseGaussian, DenseUnit };

// Ground-truth signal description. Admissible signals have entries
// +-1/sqrt(|I|) on the support I and zero elsewhere; the other kinds are
// random unit-norm vectors.
struct SignalSpec {
  int dim = 0;
  SignalKind kind = SignalKind::DenseUnit;
  std::vector<int> support;  // Admissible: indices into [0, dim)
  std::vector<int> signs;    // Admissible: +-1 per support entry
  int sparsity = 0;          // SparseGaussian: number of nonzeros

  static SignalSpec admissible(int dim, std::vector<int> support, std::vector<int> signs);
  static SignalSpec sparse_gaussian(int dim, int sparsity);
  static SignalSpec dense_unit(int dim);
};

// Admissible spec with random support and signs, |I| = sparsity.
SignalSpec random_admissible_spec(int dim, int sparsity, Rng& rng);

// Unit-norm signal realizing the spec; deterministic given the seed.
Signal make_signal(const SignalSpec& spec, std::uint64_t seed);

// Support (indices of nonzero entries) of a signal.
std::vector<int> signal_support(const Signal& x, double tol = 0.0);

enum class DistTag { Gaussian, Rademacher, UniformScaled, DiscreteSymmetric };

// Entry distribution for the sampling vectors: centered, symmetric, unit
// variance. Built-ins satisfy this analytically; discrete_symmetric()
// validates it numerically (mean 0, variance 1, weight sum 1, all within
// 1e-12, mirrored support).
struct Distribution {
  DistTag tag = DistTag::Gaussian;
  std::vector<double> points;   // DiscreteSymmetric only
  std::vector<double> weights;  // DiscreteSymmetric only

  static Distribution gaussian();
  static Distribution rademacher();
  static Distribution uniform_scaled();
  static Distribution discrete_symmetric(std::vector<double> points, std::vector<double> weights);

  double sample(Rng& rng) const;
  bool finite_support() const;
  // (point, weight) pairs for enumeration; throws for continuous tags.
  std::vector<std::pair<double, double>> support_atoms() const;
  std::string name() const;
  std::uint64_t stream_tag() const;  // keeps measurement streams distinct per distribution
};

enum class LinkTag { Quadratic, AbsValue, OneBitIntensity, NoisyQuadratic, Custom };

// Scalar link y = f(t) (+ optional centered Gaussian noise). Custom links
// must declare whether they are claimed to satisfy the positive
// correlation condition; the library only ever estimates it.
struct LinkFunction {
  LinkTag tag = LinkTag::Quadratic;
  double tau = 1.0;        // OneBitIntensity threshold
  double noise_std = 0.0;  // NoisyQuadratic / Custom additive noise
  std::function<double(double)> custom_fn;
  std::optional<bool> declares_positive_correlation;

  static LinkFunction quadratic();
  static LinkFunction abs_value();
  static LinkFunction one_bit_intensity(double tau = 1.0);
  static LinkFunction noisy_quadratic(double noise_std);
  static LinkFunction custom(std::function<double(double)> fn, bool declares_positive_correlation,
                             double noise_std = 0.0);

  double deterministic(double t) const;
  bool has_noise() const { return noise_std > 0.0; }
  std::string name() const;
};

// Sampling vectors (rows of a), responses y, and generation metadata.
struct MeasurementSet {
  Matrix a;  // m x n
  std::vector<double> y;
  std::string dist_name;
  std::string link_name;
  std::uint64_t seed = 0;

  int m() const { return a.rows(); }
  int n() const { return a.cols(); }
};

// m x n matrix with i.i.d. entries from dist; deterministic given seed.
Matrix sample_vectors(const Distribution& dist, int m, int n, std::uint64_t seed);

// Measurements y_i = f(<a_i, x*>) with independent noise draws.
MeasurementSet generate(const Signal& x_star, const Distribution& dist, const LinkFunction& link,
                        int m, std::uint64_t seed);

// Flat on-disk form: <base>.a.csv (row-major), <base>.y.csv (one column),
// <base>.meta.json. Doubles are written in shortest round-trip form.
void save_measurements(const MeasurementSet& data, const std::string& base_path);
MeasurementSet load_measurements(const std::string& base_path);

}  // namespace mpr
