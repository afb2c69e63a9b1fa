#pragma once

#include <complex>
#include <vector>

#include "divstat/matrix.hpp"

namespace divstat {

// Minimal dense complex matrix used as the factorization backend for all
// algebras: beta=1,2 map entrywise, beta=4 maps to 2x2 blocks
//   w + xi + yj + zk  ->  [[w+xi, y+zi], [-(y-zi), w-xi]]
// so that the map is an algebra homomorphism and j -> [[0,1],[-1,0]].
struct CMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<std::complex<double>> data;

  CMatrix() = default;
  CMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c) {}
  std::complex<double>& at(int i, int j) {
    return data[static_cast<std::size_t>(i) * cols + j];
  }
  const std::complex<double>& at(int i, int j) const {
    return data[static_cast<std::size_t>(i) * cols + j];
  }
};

CMatrix cmat_mul(const CMatrix& a, const CMatrix& b);
std::complex<double> cmat_trace(const CMatrix& a);

CMatrix complex_embed(const Matrix& a);
CMatrix complex_embed(const HermMatrix& h);

// Eigenvalues of a complex Hermitian matrix, descending, by cyclic Jacobi.
// If vectors != nullptr it receives unit eigenvectors as columns, in the same
// order, so that A = V diag(values) V*.
std::vector<double> complex_hermitian_eigenvalues(const CMatrix& a,
                                                  CMatrix* vectors = nullptr);

// Eigenvalues over the algebra, descending. For beta=4 they are computed from
// the complex embedding, where each eigenvalue appears twice; pairs are
// deduplicated at 1e-8 relative tolerance.
std::vector<double> herm_eigenvalues(const HermMatrix& h);

bool is_positive_definite(const HermMatrix& h, double rel_tol = 1e-12);

// Sum of log eigenvalues (one per deduplicated pair for beta=4).
double logdet_hpd(const HermMatrix& h);

// Lower-triangular L with real positive diagonal and L L* = H.
Matrix cholesky(const HermMatrix& h);

HermMatrix inverse_hpd(const HermMatrix& h);

// Unique Hermitian PD square root, via the complex embedding's spectral
// decomposition (the PD root of an embedded matrix is itself embedded).
HermMatrix sqrt_hpd(const HermMatrix& h);

struct SvdResult {
  Matrix left;                    // m x m unitary V; X = V* diag(singulars) right_rows
  std::vector<double> singulars;  // descending, positive
  Matrix right_rows;              // m x n, orthonormal rows
  bool degenerate_ties = false;   // some gap below 1e-12 relative
};

// Thin SVD of a full-rank m x n matrix, m <= n, by one-sided Jacobi over the
// algebra (the Jacobi rotation angle is real; the phase is a unit scalar of
// the algebra, so the factors stay inside it).
SvdResult svd(const Matrix& x);

}  // namespace divstat
