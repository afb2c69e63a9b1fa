#include "divstat/scalar.hpp"

#include <cmath>
#include <ostream>
#include <string>

namespace divstat {

void require_valid_beta(int beta) {
  if (!valid_beta(beta)) {
    throw ParameterError("beta must be one of {1,2,4,8}, got " +
                         std::to_string(beta));
  }
}

void require_matrix_beta(int beta) {
  require_valid_beta(beta);
  if (beta == 8) {
    throw ParameterError(
        "octonion (beta=8) matrix operations are unsupported: the algebra is "
        "nonassociative; only scalar arithmetic is available");
  }
}

namespace {

// Cayley-Dickson conjugation: negate every coefficient except the real part.
void cd_conj(const double* a, double* out, int dim) {
  out[0] = a[0];
  for (int k = 1; k < dim; ++k) out[k] = -a[k];
}

// Cayley-Dickson product on coefficient arrays:
//   (a1, a2)(b1, b2) = (a1 b1 - conj(b2) a2,  b2 a1 + a2 conj(b1)).
// The recursion bottoms out at the reals and reproduces ij = k.
void cd_mul(const double* a, const double* b, double* out, int dim) {
  if (dim == 1) {
    out[0] = a[0] * b[0];
    return;
  }
  const int h = dim / 2;
  const double* a1 = a;
  const double* a2 = a + h;
  const double* b1 = b;
  const double* b2 = b + h;

  double t1[4], t2[4], cj[4];

  cd_mul(a1, b1, t1, h);        // a1 b1
  cd_conj(b2, cj, h);
  cd_mul(cj, a2, t2, h);        // conj(b2) a2
  for (int k = 0; k < h; ++k) out[k] = t1[k] - t2[k];

  cd_mul(b2, a1, t1, h);        // b2 a1
  cd_conj(b1, cj, h);
  cd_mul(a2, cj, t2, h);        // a2 conj(b1)
  for (int k = 0; k < h; ++k) out[h + k] = t1[k] + t2[k];
}

}  // namespace

Scalar Scalar::unit(int beta, int k) {
  Scalar s(beta);
  if (k < 0 || k >= beta) {
    throw DimensionError("basis index " + std::to_string(k) +
                         " out of range for beta=" + std::to_string(beta));
  }
  s.c_[static_cast<std::size_t>(k)] = 1.0;
  return s;
}

double Scalar::norm_sq() const {
  double s = 0.0;
  for (int k = 0; k < beta_; ++k) s += c_[static_cast<std::size_t>(k)] * c_[static_cast<std::size_t>(k)];
  return s;
}

double Scalar::norm() const { return std::sqrt(norm_sq()); }

bool Scalar::is_zero() const {
  for (int k = 0; k < beta_; ++k)
    if (c_[static_cast<std::size_t>(k)] != 0.0) return false;
  return true;
}

Scalar Scalar::conj() const {
  Scalar r(beta_);
  cd_conj(c_.data(), r.c_.data(), beta_);
  return r;
}

Scalar Scalar::inverse() const {
  const double n2 = norm_sq();
  if (n2 == 0.0) throw DomainError("inverse of zero scalar");
  Scalar r = conj();
  r *= 1.0 / n2;
  return r;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  if (beta_ != o.beta_) throw DimensionError("scalar beta mismatch in +");
  for (int k = 0; k < beta_; ++k) c_[static_cast<std::size_t>(k)] += o.c_[static_cast<std::size_t>(k)];
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  if (beta_ != o.beta_) throw DimensionError("scalar beta mismatch in -");
  for (int k = 0; k < beta_; ++k) c_[static_cast<std::size_t>(k)] -= o.c_[static_cast<std::size_t>(k)];
  return *this;
}

Scalar& Scalar::operator*=(double s) {
  for (int k = 0; k < beta_; ++k) c_[static_cast<std::size_t>(k)] *= s;
  return *this;
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  if (a.beta_ != b.beta_) throw DimensionError("scalar beta mismatch in *");
  Scalar r(a.beta_);
  cd_mul(a.c_.data(), b.c_.data(), r.c_.data(), a.beta_);
  return r;
}

Scalar mul_scalars(const Scalar& a, const Scalar& b) { return a * b; }

bool approx_equal(const Scalar& a, const Scalar& b, double tol) {
  if (a.beta() != b.beta()) return false;
  for (int k = 0; k < a.beta(); ++k)
    if (std::abs(a.coeff(k) - b.coeff(k)) > tol) return false;
  return true;
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) {
  os << '(';
  for (int k = 0; k < s.beta(); ++k) {
    if (k) os << ", ";
    os << s.coeff(k);
  }
  return os << ')';
}

}  // namespace divstat
