#include "mpr/matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace mpr {

std::vector<double> Matrix::column(int j) const {
  std::vector<double> out(static_cast<std::size_t>(rows_));
  for (int i = 0; i < rows_; ++i) out[static_cast<std::size_t>(i)] = (*this)(i, j);
  return out;
}

SymMatrix SymMatrix::identity(int n) {
  SymMatrix m(n);
  for (int i = 0; i < n; ++i) m.set(i, i, 1.0);
  return m;
}

SymMatrix SymMatrix::rank_one(const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  SymMatrix m(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      m.set(i, j, x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(j)]);
    }
  }
  return m;
}

SymMatrix SymMatrix::from_matrix(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("SymMatrix: input not square");
  const int n = m.rows();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (m(i, j) != m(j, i)) throw std::invalid_argument("SymMatrix: input not symmetric");
    }
  }
  SymMatrix out(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) out.set(i, j, m(i, j));
  }
  return out;
}

double SymMatrix::trace() const {
  double t = 0.0;
  for (int i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

double SymMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

double SymMatrix::entrywise_l1() const {
  double s = 0.0;
  for (double v : data_) s += std::abs(v);
  return s;
}

double SymMatrix::max_abs() const {
  double s = 0.0;
  for (double v : data_) s = std::max(s, std::abs(v));
  return s;
}

bool SymMatrix::all_finite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

std::vector<double> SymMatrix::multiply(const std::vector<double>& x) const {
  std::vector<double> y(static_cast<std::size_t>(n_), 0.0);
  for (int i = 0; i < n_; ++i) {
    const double* r = row(i);
    double acc = 0.0;
    for (int j = 0; j < n_; ++j) acc += r[j] * x[static_cast<std::size_t>(j)];
    y[static_cast<std::size_t>(i)] = acc;
  }
  return y;
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& other) {
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& other) {
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

SymMatrix& SymMatrix::operator*=(double c) {
  for (double& v : data_) v *= c;
  return *this;
}

void SymMatrix::add_scaled(const SymMatrix& other, double c) {
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += c * other.data_[k];
}

SymMatrix operator+(SymMatrix a, const SymMatrix& b) {
  a += b;
  return a;
}

SymMatrix operator-(SymMatrix a, const SymMatrix& b) {
  a -= b;
  return a;
}

SymMatrix operator*(double c, SymMatrix a) {
  a *= c;
  return a;
}

double frobenius_inner(const SymMatrix& a, const SymMatrix& b) {
  double s = 0.0;
  const auto& da = a.data();
  const auto& db = b.data();
  for (std::size_t k = 0; k < da.size(); ++k) s += da[k] * db[k];
  return s;
}

double frobenius_distance(const SymMatrix& a, const SymMatrix& b) {
  double s = 0.0;
  const auto& da = a.data();
  const auto& db = b.data();
  for (std::size_t k = 0; k < da.size(); ++k) {
    const double d = da[k] - db[k];
    s += d * d;
  }
  return std::sqrt(s);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

void normalize(std::vector<double>& a) {
  const double n = norm2(a);
  if (n == 0.0) return;
  for (double& v : a) v /= n;
}

}  // namespace mpr
