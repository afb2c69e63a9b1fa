#pragma once

#include <vector>

#include "divstat/scalar.hpp"

namespace divstat {

// Dense m x n matrix over a fixed division algebra, beta <= 4.
// Storage is row-major with the beta coefficients of each entry contiguous.
class Matrix {
 public:
  Matrix() : beta_(1), rows_(0), cols_(0) {}
  Matrix(int beta, int rows, int cols);

  static Matrix identity(int beta, int n);

  int beta() const { return beta_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Scalar at(int i, int j) const;
  void set(int i, int j, const Scalar& s);

  double coeff(int i, int j, int k) const {
    return data_[offset(i, j) + static_cast<std::size_t>(k)];
  }
  void set_coeff(int i, int j, int k, double v) {
    data_[offset(i, j) + static_cast<std::size_t>(k)] = v;
  }

  Matrix block(int row0, int col0, int nrows, int ncols) const;

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(double s);
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, double s) { return a *= s; }
  friend Matrix operator*(double s, Matrix a) { return a *= s; }

  double frobenius_norm() const;

 private:
  std::size_t offset(int i, int j) const {
    return (static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) +
            static_cast<std::size_t>(j)) *
           static_cast<std::size_t>(beta_);
  }

  int beta_, rows_, cols_;
  std::vector<double> data_;
};

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix adjoint(const Matrix& a);

// Hermitian matrix over the algebra; only the lower triangle is stored and the
// diagonal is kept exactly real, so Hermitian symmetry holds by construction.
// Positive definiteness is a property of the values, checked where required.
class HermMatrix {
 public:
  HermMatrix() : beta_(1), dim_(0) {}
  HermMatrix(int beta, int dim);

  static HermMatrix identity(int beta, int dim);
  // Validates Hermitian symmetry of a full matrix within tol and packs it.
  static HermMatrix from_matrix(const Matrix& a, double tol = 1e-12);

  int beta() const { return beta_; }
  int dim() const { return dim_; }

  // Works for any (i, j); upper-triangle reads return the conjugate.
  Scalar at(int i, int j) const;
  // Requires i >= j; diagonal writes zero the imaginary coefficients.
  void set(int i, int j, const Scalar& s);

  double diag(int i) const;
  void set_diag(int i, double v);

  double trace() const;
  Matrix to_matrix() const;

  HermMatrix& operator+=(const HermMatrix& o);
  HermMatrix& operator-=(const HermMatrix& o);
  HermMatrix& operator*=(double s);
  friend HermMatrix operator+(HermMatrix a, const HermMatrix& b) { return a += b; }
  friend HermMatrix operator-(HermMatrix a, const HermMatrix& b) { return a -= b; }
  friend HermMatrix operator*(HermMatrix a, double s) { return a *= s; }
  friend HermMatrix operator*(double s, HermMatrix a) { return a *= s; }

 private:
  std::size_t offset(int i, int j) const {
    return (static_cast<std::size_t>(i) * (static_cast<std::size_t>(i) + 1) / 2 +
            static_cast<std::size_t>(j)) *
           static_cast<std::size_t>(beta_);
  }

  int beta_, dim_;
  std::vector<double> data_;  // packed lower triangle, diagonal real
};

// Gram matrix A A*; diagonal computed as real norms, so exactly Hermitian.
HermMatrix gram(const Matrix& a);
// A* A.
HermMatrix gram_reverse(const Matrix& a);

// Real part of tr(A B) for Hermitian A, B of equal dim (the trace of a product
// of Hermitian matrices is real; this evaluates it without forming the product).
double trace_product(const HermMatrix& a, const HermMatrix& b);

// Solve L Y = B for lower-triangular L (forward substitution), or U Y = B for
// upper-triangular U (back substitution). Triangular matrices produced by this
// library have nonzero diagonal by construction.
Matrix solve_lower_left(const Matrix& l, const Matrix& b);
Matrix solve_upper_left(const Matrix& u, const Matrix& b);
// Solve Y U = B (right division by upper-triangular U): Y = B U^{-1}.
Matrix solve_upper_right(const Matrix& u, const Matrix& b);

}  // namespace divstat
