#include "divstat/matrix.hpp"

#include <cmath>
#include <string>

namespace divstat {

namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (a.beta() != b.beta() || a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string("matrix shape/beta mismatch in ") + op);
  }
}

}  // namespace

Matrix::Matrix(int beta, int rows, int cols) : beta_(beta), rows_(rows), cols_(cols) {
  require_matrix_beta(beta);
  if (rows < 1 || cols < 1) {
    throw DimensionError("matrix dimensions must be >= 1, got " +
                         std::to_string(rows) + "x" + std::to_string(cols));
  }
  data_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols) *
                   static_cast<std::size_t>(beta),
               0.0);
}

Matrix Matrix::identity(int beta, int n) {
  Matrix a(beta, n, n);
  for (int i = 0; i < n; ++i) a.set_coeff(i, i, 0, 1.0);
  return a;
}

Scalar Matrix::at(int i, int j) const {
  Scalar s(beta_);
  for (int k = 0; k < beta_; ++k) s.set_coeff(k, coeff(i, j, k));
  return s;
}

void Matrix::set(int i, int j, const Scalar& s) {
  if (s.beta() != beta_) throw DimensionError("scalar beta mismatch in Matrix::set");
  for (int k = 0; k < beta_; ++k) set_coeff(i, j, k, s.coeff(k));
}

Matrix Matrix::block(int row0, int col0, int nrows, int ncols) const {
  if (row0 < 0 || col0 < 0 || row0 + nrows > rows_ || col0 + ncols > cols_) {
    throw DimensionError("block out of range");
  }
  Matrix b(beta_, nrows, ncols);
  for (int i = 0; i < nrows; ++i)
    for (int j = 0; j < ncols; ++j)
      for (int k = 0; k < beta_; ++k)
        b.set_coeff(i, j, k, coeff(row0 + i, col0 + j, k));
  return b;
}

Matrix& Matrix::operator+=(const Matrix& o) {
  require_same_shape(*this, o, "+");
  for (std::size_t t = 0; t < data_.size(); ++t) data_[t] += o.data_[t];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  require_same_shape(*this, o, "-");
  for (std::size_t t = 0; t < data_.size(); ++t) data_[t] -= o.data_[t];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

double Matrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.beta() != b.beta()) throw DimensionError("matmul beta mismatch");
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul shape mismatch: " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " * " + std::to_string(b.rows()) +
                         "x" + std::to_string(b.cols()));
  }
  Matrix c(a.beta(), a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < b.cols(); ++j) {
      Scalar acc(a.beta());
      for (int k = 0; k < a.cols(); ++k) acc += a.at(i, k) * b.at(k, j);
      c.set(i, j, acc);
    }
  }
  return c;
}

Matrix adjoint(const Matrix& a) {
  Matrix t(a.beta(), a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) t.set(j, i, a.at(i, j).conj());
  return t;
}

HermMatrix::HermMatrix(int beta, int dim) : beta_(beta), dim_(dim) {
  require_matrix_beta(beta);
  if (dim < 1) throw DimensionError("HermMatrix dim must be >= 1");
  data_.assign(static_cast<std::size_t>(dim) * (static_cast<std::size_t>(dim) + 1) /
                   2 * static_cast<std::size_t>(beta),
               0.0);
}

HermMatrix HermMatrix::identity(int beta, int dim) {
  HermMatrix h(beta, dim);
  for (int i = 0; i < dim; ++i) h.set_diag(i, 1.0);
  return h;
}

HermMatrix HermMatrix::from_matrix(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) throw DimensionError("Hermitian matrix must be square");
  double scale = a.frobenius_norm();
  if (scale == 0.0) scale = 1.0;
  HermMatrix h(a.beta(), a.rows());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j <= i; ++j) {
      const Scalar lower = a.at(i, j);
      const Scalar mirror = a.at(j, i).conj();
      if (!approx_equal(lower, mirror, tol * scale)) {
        throw DomainError("matrix is not Hermitian within tolerance at entry (" +
                             std::to_string(i) + "," + std::to_string(j) + ")");
      }
      Scalar avg = lower + mirror;
      avg *= 0.5;
      h.set(i, j, avg);
    }
  }
  return h;
}

Scalar HermMatrix::at(int i, int j) const {
  const bool upper = i < j;
  const std::size_t off = upper ? offset(j, i) : offset(i, j);
  Scalar s(beta_);
  for (int k = 0; k < beta_; ++k) s.set_coeff(k, data_[off + static_cast<std::size_t>(k)]);
  return upper ? s.conj() : s;
}

void HermMatrix::set(int i, int j, const Scalar& s) {
  if (i < j) throw DimensionError("HermMatrix::set expects lower-triangle indices");
  if (s.beta() != beta_) throw DimensionError("scalar beta mismatch in HermMatrix::set");
  const std::size_t off = offset(i, j);
  data_[off] = s.coeff(0);
  for (int k = 1; k < beta_; ++k)
    data_[off + static_cast<std::size_t>(k)] = (i == j) ? 0.0 : s.coeff(k);
}

double HermMatrix::diag(int i) const { return data_[offset(i, i)]; }

void HermMatrix::set_diag(int i, double v) {
  const std::size_t off = offset(i, i);
  data_[off] = v;
  for (int k = 1; k < beta_; ++k) data_[off + static_cast<std::size_t>(k)] = 0.0;
}

double HermMatrix::trace() const {
  double t = 0.0;
  for (int i = 0; i < dim_; ++i) t += diag(i);
  return t;
}

Matrix HermMatrix::to_matrix() const {
  Matrix a(beta_, dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) a.set(i, j, at(i, j));
  return a;
}

HermMatrix& HermMatrix::operator+=(const HermMatrix& o) {
  if (beta_ != o.beta_ || dim_ != o.dim_) throw DimensionError("HermMatrix shape mismatch in +");
  for (std::size_t t = 0; t < data_.size(); ++t) data_[t] += o.data_[t];
  return *this;
}

HermMatrix& HermMatrix::operator-=(const HermMatrix& o) {
  if (beta_ != o.beta_ || dim_ != o.dim_) throw DimensionError("HermMatrix shape mismatch in -");
  for (std::size_t t = 0; t < data_.size(); ++t) data_[t] -= o.data_[t];
  return *this;
}

HermMatrix& HermMatrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

HermMatrix gram(const Matrix& a) {
  HermMatrix h(a.beta(), a.rows());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < i; ++j) {
      Scalar acc(a.beta());
      for (int k = 0; k < a.cols(); ++k) acc += a.at(i, k) * a.at(j, k).conj();
      h.set(i, j, acc);
    }
    double d = 0.0;
    for (int k = 0; k < a.cols(); ++k) d += a.at(i, k).norm_sq();
    h.set_diag(i, d);
  }
  return h;
}

HermMatrix gram_reverse(const Matrix& a) { return gram(adjoint(a)); }

double trace_product(const HermMatrix& a, const HermMatrix& b) {
  if (a.beta() != b.beta() || a.dim() != b.dim()) {
    throw DimensionError("trace_product shape mismatch");
  }
  // tr(AB) = sum_{i,k} A_ik conj(B_ik); real because both are Hermitian.
  double t = 0.0;
  for (int i = 0; i < a.dim(); ++i) {
    t += a.diag(i) * b.diag(i);
    for (int k = 0; k < i; ++k) {
      const Scalar x = a.at(i, k);
      const Scalar y = b.at(i, k);
      double dot = 0.0;
      for (int c = 0; c < a.beta(); ++c) dot += x.coeff(c) * y.coeff(c);
      t += 2.0 * dot;
    }
  }
  return t;
}

namespace {

void require_square_match(const Matrix& t, const Matrix& b, const char* op) {
  if (t.rows() != t.cols()) throw DimensionError(std::string(op) + ": triangular factor must be square");
  if (t.beta() != b.beta()) throw DimensionError(std::string(op) + ": beta mismatch");
}

}  // namespace

Matrix solve_lower_left(const Matrix& l, const Matrix& b) {
  require_square_match(l, b, "solve_lower_left");
  if (l.cols() != b.rows()) throw DimensionError("solve_lower_left: shape mismatch");
  Matrix y(b.beta(), b.rows(), b.cols());
  for (int j = 0; j < b.cols(); ++j) {
    for (int i = 0; i < b.rows(); ++i) {
      Scalar acc = b.at(i, j);
      for (int k = 0; k < i; ++k) acc -= l.at(i, k) * y.at(k, j);
      y.set(i, j, l.at(i, i).inverse() * acc);
    }
  }
  return y;
}

Matrix solve_upper_left(const Matrix& u, const Matrix& b) {
  require_square_match(u, b, "solve_upper_left");
  if (u.cols() != b.rows()) throw DimensionError("solve_upper_left: shape mismatch");
  Matrix y(b.beta(), b.rows(), b.cols());
  for (int j = 0; j < b.cols(); ++j) {
    for (int i = b.rows() - 1; i >= 0; --i) {
      Scalar acc = b.at(i, j);
      for (int k = i + 1; k < b.rows(); ++k) acc -= u.at(i, k) * y.at(k, j);
      y.set(i, j, u.at(i, i).inverse() * acc);
    }
  }
  return y;
}

Matrix solve_upper_right(const Matrix& u, const Matrix& b) {
  require_square_match(u, b, "solve_upper_right");
  if (b.cols() != u.rows()) throw DimensionError("solve_upper_right: shape mismatch");
  Matrix y(b.beta(), b.rows(), b.cols());
  for (int i = 0; i < b.rows(); ++i) {
    for (int j = 0; j < b.cols(); ++j) {
      Scalar acc = b.at(i, j);
      for (int k = 0; k < j; ++k) acc -= y.at(i, k) * u.at(k, j);
      y.set(i, j, acc * u.at(j, j).inverse());
    }
  }
  return y;
}

}  // namespace divstat
