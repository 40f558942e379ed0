#include "mpr/eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mpr/rng.hpp"

namespace mpr {

namespace {

double off_diagonal_frobenius(const std::vector<double>& a, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double v = a[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                         static_cast<std::size_t>(j)];
      s += v * v;
    }
  }
  return std::sqrt(2.0 * s);
}

}  // namespace

EigenDecomposition eigh(const SymMatrix& input, int max_sweeps, double tol) {
  if (!input.all_finite()) throw std::invalid_argument("eigh: non-finite entries");
  const int n = input.dim();
  const std::size_t un = static_cast<std::size_t>(n);

  std::vector<double> a(input.data());
  std::vector<double> v(un * un, 0.0);
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i) * un + static_cast<std::size_t>(i)] = 1.0;

  auto at = [&](int i, int j) -> double& {
    return a[static_cast<std::size_t>(i) * un + static_cast<std::size_t>(j)];
  };
  auto vt = [&](int i, int j) -> double& {
    return v[static_cast<std::size_t>(i) * un + static_cast<std::size_t>(j)];
  };

  const double scale = std::max(1.0, input.frobenius_norm());
  const double off_tol = tol * scale;

  double off = off_diagonal_frobenius(a, n);
  bool converged = (off <= off_tol) || n <= 1;

  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double app = at(p, p);
        const double aqq = at(q, q);

        // Rotation angle from the stable half-angle formulas.
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                      : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // A <- J^T A J on rows/columns p and q.
        at(p, p) = app - t * apq;
        at(q, q) = aqq + t * apq;
        at(p, q) = 0.0;
        at(q, p) = 0.0;
        for (int k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = at(k, p);
          const double akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(p, k) = at(k, p);
          at(k, q) = s * akp + c * akq;
          at(q, k) = at(k, q);
        }
        // V <- V J (columns p, q).
        for (int k = 0; k < n; ++k) {
          const double vkp = vt(k, p);
          const double vkq = vt(k, q);
          vt(k, p) = c * vkp - s * vkq;
          vt(k, q) = s * vkp + c * vkq;
        }
      }
    }
    off = off_diagonal_frobenius(a, n);
    converged = off <= off_tol;
  }

  if (!converged) {
    throw EighError("eigh: Jacobi did not converge within sweep cap, off-diagonal residual " +
                        std::to_string(off),
                    off);
  }

  // Sort eigenvalues non-increasing, ties by original index.
  std::vector<int> order(un);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return at(i, i) > at(j, j); });

  EigenDecomposition out;
  out.eigenvalues.resize(un);
  out.eigenvectors = Matrix(n, n);
  for (int j = 0; j < n; ++j) {
    const int src = order[static_cast<std::size_t>(j)];
    out.eigenvalues[static_cast<std::size_t>(j)] = at(src, src);
    for (int i = 0; i < n; ++i) out.eigenvectors(i, j) = vt(i, src);
  }
  return out;
}

LeadingVector leading_eigenvector(const SymMatrix& a) {
  const int n = a.dim();
  LeadingVector out;
  out.v.assign(static_cast<std::size_t>(n), 0.0);

  if (a.frobenius_norm() == 0.0) {
    out.v[0] = 1.0;
    out.value = 0.0;
    out.degenerate = true;
    return out;
  }

  const EigenDecomposition d = eigh(a);
  out.value = d.eigenvalues[0];
  out.degenerate = (n >= 2) && (d.eigenvalues[0] - d.eigenvalues[1] < 1e-12);
  for (int i = 0; i < n; ++i) out.v[static_cast<std::size_t>(i)] = d.eigenvectors(i, 0);
  normalize(out.v);

  // Sign convention: largest-magnitude coordinate positive, lowest index wins ties.
  int pivot = 0;
  for (int i = 1; i < n; ++i) {
    if (std::abs(out.v[static_cast<std::size_t>(i)]) > std::abs(out.v[static_cast<std::size_t>(pivot)]))
      pivot = i;
  }
  if (out.v[static_cast<std::size_t>(pivot)] < 0.0) {
    for (double& x : out.v) x = -x;
  }
  return out;
}

double operator_norm(const SymMatrix& a, int max_iters, double tol) {
  const int n = a.dim();
  if (a.frobenius_norm() == 0.0) return 0.0;

  // Fixed pseudo-random start so results are reproducible.
  Rng rng(0x6f706e6f726dull, 0);
  std::vector<double> x(static_cast<std::size_t>(n));
  for (double& v : x) v = rng.uniform01() + 0.5;
  normalize(x);

  double est = 0.0;
  for (int k = 0; k < max_iters; ++k) {
    std::vector<double> y = a.multiply(x);
    const double ny = norm2(y);
    if (ny == 0.0) {
      // Start vector landed in the kernel; re-seed once.
      for (double& v : x) v = rng.uniform01() + 0.5;
      normalize(x);
      continue;
    }
    const double prev = est;
    est = ny;  // ||A x_k|| with unit x_k -> max |lambda|
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = y[i] / ny;
    if (k > 0 && std::abs(est - prev) <= tol * std::max(1.0, est)) break;
  }
  return est;
}

}  // namespace mpr
