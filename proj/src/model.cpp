#include "mpr/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "mpr/textio.hpp"

namespace mpr {

SignalSpec SignalSpec::admissible(int dim, std::vector<int> support, std::vector<int> signs) {
  if (support.empty()) throw std::invalid_argument("SignalSpec: empty admissible support");
  if (support.size() != signs.size())
    throw std::invalid_argument("SignalSpec: support/sign size mismatch");
  if (static_cast<int>(support.size()) > dim)
    throw std::invalid_argument("SignalSpec: support larger than dimension");
  for (int idx : support) {
    if (idx < 0 || idx >= dim) throw std::invalid_argument("SignalSpec: support index out of range");
  }
  for (int s : signs) {
    if (s != 1 && s != -1) throw std::invalid_argument("SignalSpec: signs must be +-1");
  }
  SignalSpec spec;
  spec.dim = dim;
  spec.kind = SignalKind::Admissible;
  spec.support = std::move(support);
  spec.signs = std::move(signs);
  return spec;
}

SignalSpec SignalSpec::sparse_gaussian(int dim, int sparsity) {
  if (sparsity < 1 || sparsity > dim)
    throw std::invalid_argument("SignalSpec: sparsity out of range");
  SignalSpec spec;
  spec.dim = dim;
  spec.kind = SignalKind::SparseGaussian;
  spec.sparsity = sparsity;
  return spec;
}

SignalSpec SignalSpec::dense_unit(int dim) {
  if (dim < 1) throw std::invalid_argument("SignalSpec: dimension must be positive");
  SignalSpec spec;
  spec.dim = dim;
  spec.kind = SignalKind::DenseUnit;
  return spec;
}

SignalSpec random_admissible_spec(int dim, int sparsity, Rng& rng) {
  if (sparsity < 1 || sparsity > dim)
    throw std::invalid_argument("random_admissible_spec: sparsity out of range");
  std::vector<int> support = rng.sample_without_replacement(dim, sparsity);
  std::sort(support.begin(), support.end());
  std::vector<int> signs(support.size());
  for (auto& s : signs) s = rng.rademacher() > 0 ? 1 : -1;
  return SignalSpec::admissible(dim, std::move(support), std::move(signs));
}

Signal make_signal(const SignalSpec& spec, std::uint64_t seed) {
  Signal x(static_cast<std::size_t>(spec.dim), 0.0);
  switch (spec.kind) {
    case SignalKind::Admissible: {
      const double mag = 1.0 / std::sqrt(static_cast<double>(spec.support.size()));
      for (std::size_t k = 0; k < spec.support.size(); ++k) {
        x[static_cast<std::size_t>(spec.support[k])] = spec.signs[k] * mag;
      }
      return x;
    }
    case SignalKind::SparseGaussian: {
      Rng rng(seed, stream::signal);
      const std::vector<int> support = rng.sample_without_replacement(spec.dim, spec.sparsity);
      for (int idx : support) x[static_cast<std::size_t>(idx)] = rng.gaussian();
      normalize(x);
      // A zero draw across the whole support is impossible in practice but
      // would leave a zero vector; fall back to the first support index.
      if (norm2(x) == 0.0) x[static_cast<std::size_t>(support[0])] = 1.0;
      return x;
    }
    case SignalKind::DenseUnit: {
      Rng rng(seed, stream::signal);
      for (double& v : x) v = rng.gaussian();
      normalize(x);
      if (norm2(x) == 0.0) x[0] = 1.0;
      return x;
    }
  }
  throw std::invalid_argument("make_signal: unknown kind");
}

std::vector<int> signal_support(const Signal& x, double tol) {
  std::vector<int> out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::abs(x[i]) > tol) out.push_back(static_cast<int>(i));
  }
  return out;
}

Distribution Distribution::gaussian() { return Distribution{DistTag::Gaussian, {}, {}}; }

Distribution Distribution::rademacher() { return Distribution{DistTag::Rademacher, {}, {}}; }

Distribution Distribution::uniform_scaled() { return Distribution{DistTag::UniformScaled, {}, {}}; }

Distribution Distribution::discrete_symmetric(std::vector<double> points,
                                              std::vector<double> weights) {
  if (points.empty() || points.size() != weights.size())
    throw std::invalid_argument("discrete_symmetric: points/weights mismatch");
  double wsum = 0.0, mean = 0.0, var = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(weights[i] > 0.0)) throw std::invalid_argument("discrete_symmetric: weights must be positive");
    wsum += weights[i];
    mean += weights[i] * points[i];
    var += weights[i] * points[i] * points[i];
  }
  if (std::abs(wsum - 1.0) > 1e-12)
    throw std::invalid_argument("discrete_symmetric: weights must sum to 1");
  if (std::abs(mean) > 1e-12) throw std::invalid_argument("discrete_symmetric: mean must be 0");
  if (std::abs(var - 1.0) > 1e-12)
    throw std::invalid_argument("discrete_symmetric: variance must be 1");
  // Symmetry: every atom needs a mirrored atom of equal weight.
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool mirrored = false;
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (std::abs(points[j] + points[i]) <= 1e-12 && std::abs(weights[j] - weights[i]) <= 1e-12) {
        mirrored = true;
        break;
      }
    }
    if (!mirrored) throw std::invalid_argument("discrete_symmetric: support not symmetric");
  }
  return Distribution{DistTag::DiscreteSymmetric, std::move(points), std::move(weights)};
}

double Distribution::sample(Rng& rng) const {
  switch (tag) {
    case DistTag::Gaussian:
      return rng.gaussian();
    case DistTag::Rademacher:
      return rng.rademacher();
    case DistTag::UniformScaled:
      return rng.uniform_scaled();
    case DistTag::DiscreteSymmetric: {
      // Inverse CDF over the atom weights.
      double u = rng.uniform01();
      double acc = 0.0;
      for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        acc += weights[i];
        if (u < acc) return points[i];
      }
      return points.back();
    }
  }
  throw std::invalid_argument("Distribution: unknown tag");
}

bool Distribution::finite_support() const {
  return tag == DistTag::Rademacher || tag == DistTag::DiscreteSymmetric;
}

std::vector<std::pair<double, double>> Distribution::support_atoms() const {
  switch (tag) {
    case DistTag::Rademacher:
      return {{-1.0, 0.5}, {1.0, 0.5}};
    case DistTag::DiscreteSymmetric: {
      std::vector<std::pair<double, double>> atoms;
      for (std::size_t i = 0; i < points.size(); ++i) atoms.emplace_back(points[i], weights[i]);
      return atoms;
    }
    default:
      throw std::invalid_argument("support_atoms: distribution has continuous support");
  }
}

std::string Distribution::name() const {
  switch (tag) {
    case DistTag::Gaussian:
      return "gaussian";
    case DistTag::Rademacher:
      return "rademacher";
    case DistTag::UniformScaled:
      return "uniform_scaled";
    case DistTag::DiscreteSymmetric:
      return "discrete_symmetric";
  }
  return "unknown";
}

std::uint64_t Distribution::stream_tag() const {
  return combine_seed(stream::measurement, static_cast<std::uint64_t>(tag));
}

LinkFunction LinkFunction::quadratic() { return LinkFunction{}; }

LinkFunction LinkFunction::abs_value() {
  LinkFunction f;
  f.tag = LinkTag::AbsValue;
  return f;
}

LinkFunction LinkFunction::one_bit_intensity(double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("one_bit_intensity: tau must be positive");
  LinkFunction f;
  f.tag = LinkTag::OneBitIntensity;
  f.tau = tau;
  return f;
}

LinkFunction LinkFunction::noisy_quadratic(double noise_std) {
  if (noise_std < 0.0) throw std::invalid_argument("noisy_quadratic: negative noise std");
  LinkFunction f;
  f.tag = LinkTag::NoisyQuadratic;
  f.noise_std = noise_std;
  return f;
}

LinkFunction LinkFunction::custom(std::function<double(double)> fn,
                                  bool declares_positive_correlation, double noise_std) {
  if (!fn) throw std::invalid_argument("custom link: missing function");
  if (noise_std < 0.0) throw std::invalid_argument("custom link: negative noise std");
  LinkFunction f;
  f.tag = LinkTag::Custom;
  f.custom_fn = std::move(fn);
  f.declares_positive_correlation = declares_positive_correlation;
  f.noise_std = noise_std;
  return f;
}

double LinkFunction::deterministic(double t) const {
  switch (tag) {
    case LinkTag::Quadratic:
    case LinkTag::NoisyQuadratic:
      return t * t;
    case LinkTag::AbsValue:
      return std::abs(t);
    case LinkTag::OneBitIntensity:
      return std::abs(t) > tau ? 1.0 : 0.0;
    case LinkTag::Custom:
      return custom_fn(t);
  }
  throw std::invalid_argument("LinkFunction: unknown tag");
}

std::string LinkFunction::name() const {
  switch (tag) {
    case LinkTag::Quadratic:
      return "quadratic";
    case LinkTag::AbsValue:
      return "abs";
    case LinkTag::OneBitIntensity:
      return "one_bit_intensity(tau=" + format_double(tau) + ")";
    case LinkTag::NoisyQuadratic:
      return "noisy_quadratic(std=" + format_double(noise_std) + ")";
    case LinkTag::Custom:
      return "custom";
  }
  return "unknown";
}

Matrix sample_vectors(const Distribution& dist, int m, int n, std::uint64_t seed) {
  if (m < 1 || n < 1) throw std::invalid_argument("sample_vectors: m, n must be >= 1");
  Rng rng(seed, dist.stream_tag());
  Matrix a(m, n);
  for (int i = 0; i < m; ++i) {
    double* r = a.row(i);
    for (int j = 0; j < n; ++j) r[j] = dist.sample(rng);
  }
  return a;
}

MeasurementSet generate(const Signal& x_star, const Distribution& dist, const LinkFunction& link,
                        int m, std::uint64_t seed) {
  const int n = static_cast<int>(x_star.size());
  MeasurementSet data;
  data.a = sample_vectors(dist, m, n, seed);
  data.y.resize(static_cast<std::size_t>(m));
  Rng noise_rng(seed, stream::noise);
  for (int i = 0; i < m; ++i) {
    const double* r = data.a.row(i);
    double t = 0.0;
    for (int j = 0; j < n; ++j) t += r[j] * x_star[static_cast<std::size_t>(j)];
    double y = link.deterministic(t);
    if (link.has_noise()) y += link.noise_std * noise_rng.gaussian();
    data.y[static_cast<std::size_t>(i)] = y;
  }
  data.dist_name = dist.name();
  data.link_name = link.name();
  data.seed = seed;
  return data;
}

void save_measurements(const MeasurementSet& data, const std::string& base_path) {
  {
    std::ofstream fa(base_path + ".a.csv");
    if (!fa) throw std::runtime_error("save_measurements: cannot open " + base_path + ".a.csv");
    for (int i = 0; i < data.m(); ++i) {
      const double* r = data.a.row(i);
      for (int j = 0; j < data.n(); ++j) {
        if (j) fa << ',';
        fa << format_double(r[j]);
      }
      fa << '\n';
    }
  }
  {
    std::ofstream fy(base_path + ".y.csv");
    if (!fy) throw std::runtime_error("save_measurements: cannot open " + base_path + ".y.csv");
    for (double v : data.y) fy << format_double(v) << '\n';
  }
  {
    nlohmann::json meta;
    meta["distribution"] = data.dist_name;
    meta["link"] = data.link_name;
    meta["seed"] = data.seed;
    meta["m"] = data.m();
    meta["n"] = data.n();
    std::ofstream fm(base_path + ".meta.json");
    if (!fm) throw std::runtime_error("save_measurements: cannot open " + base_path + ".meta.json");
    fm << meta.dump(2) << '\n';
  }
}

MeasurementSet load_measurements(const std::string& base_path) {
  MeasurementSet data;

  std::ifstream fm(base_path + ".meta.json");
  if (!fm) throw std::runtime_error("load_measurements: cannot open " + base_path + ".meta.json");
  nlohmann::json meta = nlohmann::json::parse(fm);
  const int m = meta.at("m").get<int>();
  const int n = meta.at("n").get<int>();
  data.dist_name = meta.at("distribution").get<std::string>();
  data.link_name = meta.at("link").get<std::string>();
  data.seed = meta.at("seed").get<std::uint64_t>();

  std::ifstream fa(base_path + ".a.csv");
  if (!fa) throw std::runtime_error("load_measurements: cannot open " + base_path + ".a.csv");
  data.a = Matrix(m, n);
  std::string line;
  for (int i = 0; i < m; ++i) {
    if (!std::getline(fa, line)) throw std::runtime_error("load_measurements: truncated a.csv");
    const std::vector<double> row = parse_csv_doubles(line);
    if (static_cast<int>(row.size()) != n)
      throw std::runtime_error("load_measurements: bad row width in a.csv");
    for (int j = 0; j < n; ++j) data.a(i, j) = row[static_cast<std::size_t>(j)];
  }

  std::ifstream fy(base_path + ".y.csv");
  if (!fy) throw std::runtime_error("load_measurements: cannot open " + base_path + ".y.csv");
  data.y.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    if (!std::getline(fy, line)) throw std::runtime_error("load_measurements: truncated y.csv");
    data.y.push_back(parse_double(line));
  }
  return data;
}

}  // namespace mpr
