#include "mpr/projections.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mpr/eig.hpp"

namespace mpr {

std::vector<double> project_simplex(const std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<double> u(v);
  std::sort(u.begin(), u.end(), std::greater<double>());

  // Largest k with u_(k) > (sum of top k - 1)/k gives the active set.
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    cumulative += u[k];
    const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (u[k] - candidate > 0.0) {
      theta = candidate;
    } else {
      break;
    }
  }

  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = std::max(v[i] - theta, 0.0);
  return w;
}

SymMatrix project_psd_trace1(const SymMatrix& a) {
  const int n = a.dim();
  const EigenDecomposition d = eigh(a);
  const std::vector<double> w = project_simplex(d.eigenvalues);

  // Reconstruct sum_k w_k v_k v_k^T over the active eigenvalues only.
  SymMatrix out(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) {
        const double wk = w[static_cast<std::size_t>(k)];
        if (wk == 0.0) continue;
        acc += wk * d.eigenvectors(i, k) * d.eigenvectors(j, k);
      }
      out.set(i, j, acc);
    }
  }
  return out;
}

SymMatrix project_l1_ball(const SymMatrix& a, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("project_l1_ball: radius must be positive");
  const int n = a.dim();
  if (a.entrywise_l1() <= radius) return a;

  // The pair weights make the matrix look like the vector the entrywise
  // norm sees: each off-diagonal magnitude counts twice.
  struct Entry {
    double mag;
    double weight;
  };
  std::vector<Entry> entries;
  entries.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n + 1) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      entries.push_back({std::abs(a(i, j)), i == j ? 1.0 : 2.0});
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& x, const Entry& y) { return x.mag > y.mag; });

  // Uniform shrinkage theta solves sum_k w_k * max(m_k - theta, 0) = radius.
  double weight_sum = 0.0;
  double mag_sum = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    weight_sum += entries[k].weight;
    mag_sum += entries[k].weight * entries[k].mag;
    const double candidate = (mag_sum - radius) / weight_sum;
    const double next_mag = (k + 1 < entries.size()) ? entries[k + 1].mag : 0.0;
    if (candidate >= next_mag) {
      theta = candidate;
      break;
    }
  }

  SymMatrix out(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double v = a(i, j);
      const double shrunk = std::max(std::abs(v) - theta, 0.0);
      out.set(i, j, v < 0.0 ? -shrunk : shrunk);
    }
  }
  return out;
}

}  // namespace mpr
