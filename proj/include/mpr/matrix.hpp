#pragma once

#include <cstddef>
#include <vector>

namespace mpr {

// Dense row-major matrix. Only the operations this project needs.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols)
      : rows_(rows), cols_(cols),
        data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0.0) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double operator()(int i, int j) const {
    return data_[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) +
                 static_cast<std::size_t>(j)];
  }
  double& operator()(int i, int j) {
    return data_[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) +
                 static_cast<std::size_t>(j)];
  }

  const double* row(int i) const {
    return data_.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_);
  }
  double* row(int i) {
    return data_.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_);
  }

  std::vector<double> column(int j) const;

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

// Dense real symmetric matrix. Symmetry is structural: set() writes both
// mirror entries and the validating factory rejects asymmetric input, so
// entry(i,j) == entry(j,i) holds exactly at all times.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int n)
      : n_(n), data_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0) {}

  static SymMatrix identity(int n);
  static SymMatrix rank_one(const std::vector<double>& x);  // x x^T
  // Validates exact symmetry; throws std::invalid_argument otherwise.
  static SymMatrix from_matrix(const Matrix& m);

  int dim() const { return n_; }

  double operator()(int i, int j) const {
    return data_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
                 static_cast<std::size_t>(j)];
  }
  void set(int i, int j, double v) {
    data_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
          static_cast<std::size_t>(j)] = v;
    data_[static_cast<std::size_t>(j) * static_cast<std::size_t>(n_) +
          static_cast<std::size_t>(i)] = v;
  }

  const double* row(int i) const {
    return data_.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(n_);
  }
  const std::vector<double>& data() const { return data_; }

  double trace() const;
  double frobenius_norm() const;
  double entrywise_l1() const;
  double max_abs() const;  // entrywise l-infinity
  bool all_finite() const;

  std::vector<double> multiply(const std::vector<double>& x) const;  // A x

  SymMatrix& operator+=(const SymMatrix& other);
  SymMatrix& operator-=(const SymMatrix& other);
  SymMatrix& operator*=(double c);
  // this += c * other
  void add_scaled(const SymMatrix& other, double c);

 private:
  int n_ = 0;
  std::vector<double> data_;
};

SymMatrix operator+(SymMatrix a, const SymMatrix& b);
SymMatrix operator-(SymMatrix a, const SymMatrix& b);
SymMatrix operator*(double c, SymMatrix a);

// <A, B> = Tr(A^T B) = sum of entrywise products.
double frobenius_inner(const SymMatrix& a, const SymMatrix& b);
double frobenius_distance(const SymMatrix& a, const SymMatrix& b);

// Vector helpers.
double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm2(const std::vector<double>& a);
void normalize(std::vector<double>& a);  // no-op on the zero vector

}  // namespace mpr
