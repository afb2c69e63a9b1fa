#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>

#include "divstat/errors.hpp"

namespace divstat {

// Real dimension of the coefficient algebra: 1 (real), 2 (complex),
// 4 (quaternion), 8 (octonion).
inline constexpr int kMaxBeta = 8;

inline bool valid_beta(int beta) {
  return beta == 1 || beta == 2 || beta == 4 || beta == 8;
}

void require_valid_beta(int beta);

// beta values admitting associative matrix algebra. Octonion entries are
// scalar-only throughout the library.
void require_matrix_beta(int beta);

// Element of a real normed division algebra, stored as beta coefficients on
// the basis (1, i, j, k, ...) in Cayley-Dickson order with ij = k.
class Scalar {
 public:
  Scalar() : beta_(1), c_{} {}
  explicit Scalar(int beta) : beta_(beta), c_{} { require_valid_beta(beta); }
  Scalar(int beta, double real) : Scalar(beta) { c_[0] = real; }

  // Basis element e_k, k in [0, beta).
  static Scalar unit(int beta, int k);

  int beta() const { return beta_; }
  double coeff(int k) const { return c_[static_cast<std::size_t>(k)]; }
  void set_coeff(int k, double v) { c_[static_cast<std::size_t>(k)] = v; }
  double real() const { return c_[0]; }

  double norm_sq() const;
  double norm() const;
  bool is_zero() const;

  Scalar conj() const;
  // Multiplicative inverse conj(x)/|x|^2; zero input is a domain error.
  Scalar inverse() const;

  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(double s);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, double s) { return a *= s; }
  friend Scalar operator*(double s, Scalar a) { return a *= s; }
  friend Scalar operator-(Scalar a) { return a *= -1.0; }

  // Algebra product. Associative for beta <= 4; alternative (nonassociative)
  // for beta = 8.
  friend Scalar operator*(const Scalar& a, const Scalar& b);

 private:
  int beta_;
  std::array<double, kMaxBeta> c_;
};

Scalar mul_scalars(const Scalar& a, const Scalar& b);

bool approx_equal(const Scalar& a, const Scalar& b, double tol);

std::ostream& operator<<(std::ostream& os, const Scalar& s);

}  // namespace divstat
