#pragma once

#include <vector>

#include "divstat/factor.hpp"
#include "divstat/matrix.hpp"

namespace divstat {

// Which member of the Pearson type II pair a parameter set describes:
//   matricvariate      - determinant kernel  det[B^-1 - (Q-mu) D^-1 (Q-mu)*]
//   matrix_multivariate - trace kernel       1 - tr[B (Q-mu) D (Q-mu)*]
// (B = scale_left, D = scale_right in the conventions documented below).
enum class PearsonKind { matricvariate, matrix_multivariate };

// Parameters of an m x n Pearson type II family over the algebra of dimension
// beta (1, 2 or 4; dimensions and beta are carried by the matrices).
//
// Conventions, fixed once for the whole library:
//  * scale_left  (m x m, PD) enters the density as  det(scale_left)^(beta n/2),
//    i.e. it plays the role of an inverse row covariance;
//  * scale_right (n x n, PD) enters the matricvariate kernel *inverted*,
//      det[scale_left^-1 - (Q-mu) scale_right^-1 (Q-mu)*],
//    and the matrix-multivariate kernel *uninverted*,
//      1 - tr[scale_left (Q-mu) scale_right (Q-mu)*].
//  * The standard member (mu = 0, identity scales) has support
//    I - Q Q* positive definite (matricvariate) or tr Q Q* < 1 (trace kind).
//
// Degrees of freedom nu is real and must satisfy nu > beta*(min(m,n)-1) for
// the matricvariate kind and nu > 0 for the matrix-multivariate kind.  The
// min(m, n) form makes validity invariant under transposition, which the
// evaluator uses to define tall (m > n) inputs:
//   logpdf(Q; nu, mu, B, D) with m > n  :=  logpdf(Q*; nu, mu*, D^-1, B^-1),
// the transpose-duality extension of the wide-case density.
struct PearsonIIParams {
  double nu = 0.0;
  Matrix mu;              // m x n location
  HermMatrix scale_left;  // m x m, positive definite
  HermMatrix scale_right; // n x n, positive definite
  PearsonKind kind = PearsonKind::matricvariate;

  int beta() const { return mu.beta(); }
  int rows() const { return mu.rows(); }
  int cols() const { return mu.cols(); }

  // mu = 0 and identity scales.
  static PearsonIIParams standard(int beta, int m, int n, double nu,
                                  PearsonKind kind = PearsonKind::matricvariate);

  // Throws ParameterError / DimensionError / NotPositiveDefiniteError on
  // malformed parameters; cheap checks first, definiteness last.
  void validate() const;
};

// Log density of the matricvariate Pearson type II law at Q (m x n, m <= n
// evaluated directly; m > n defined by transposition as documented above):
//   log Gamma_m[beta(n+nu)/2] - log Gamma_m[beta nu/2] - (m n beta/2) log pi
//   + (beta(nu+n-m+1)/2 - 1) logdet scale_left
//   - (beta m/2)            logdet scale_right
//   + (beta(nu-m+1)/2 - 1)  logdet[scale_left^-1 - W scale_right^-1 W*],
// W = Q - mu.  Returns -infinity when the kernel matrix is not PD (outside
// the support); throws on malformed inputs.  Requires kind == matricvariate.
double pearson2_logpdf(const Matrix& q, const PearsonIIParams& p);

// Same law, evaluated through the equivalent n x n determinant expression
//   log Gamma_n[beta(n+nu)/2] - log Gamma_n[beta(nu+n-m)/2]
//   - (m n beta/2) log pi
//   + (beta n/2)             logdet scale_left
//   - (beta(nu+1)/2 - 1)     logdet scale_right
//   + (beta(nu-m+1)/2 - 1)   logdet[scale_right - W* scale_left W].
// Agrees with pearson2_logpdf to rounding; kept separate as a cross-check.
double pearson2_logpdf_dual(const Matrix& q, const PearsonIIParams& p);

// Log density of the matrix-multivariate (trace-kernel) Pearson type II law:
//   log Gamma[beta(nu+mn)/2] - log Gamma[beta nu/2] - (m n beta/2) log pi
//   + (beta n/2) logdet scale_left + (beta m/2) logdet scale_right
//   + (beta nu/2 - 1) log(1 - tr[scale_left W scale_right W*]).
// Orientation-free (the trace kernel is invariant under transposition with
// the scales swapped uninverted).  Requires kind == matrix_multivariate.
double mmpearson2_logpdf(const Matrix& q1, const PearsonIIParams& p);

// Orientation of the matrix underlying a beta type I matrix:
//   wide: B = R R* (m x m) from an m x n matrix with n >= m,
//   tall: B = R* R (n x n) from an m x n matrix with m > n.
enum class BetaOrientation { wide, tall };

// Parameters of the matricvariate / matrix-multivariate beta type I laws on
// Hermitian PD matrices.  m and n are the row/column counts of the underlying
// matrix; n_dof is n as a real (kept real because it enters only through
// gamma functions in the wide orientation), nu the Pearson degrees of
// freedom, beta in {1,2,4}.
struct BetaIParams {
  double n_dof = 0.0;
  double nu = 0.0;
  int m = 0;
  int beta = 1;
  BetaOrientation orientation = BetaOrientation::wide;
  void validate(bool trace_kind) const;
};

// Log density of the matricvariate beta type I law at b.
// Wide (b is m x m):
//   -log B_m[beta nu/2, beta n/2] + (beta(n-m+1)/2 - 1) logdet b
//                                 + (beta(nu-m+1)/2 - 1) logdet(I - b)
// Tall (b is n x n, n integral < m):
//   -log B_n[beta(nu+n-m)/2, beta m/2] + (beta(m-n+1)/2 - 1) logdet b
//                                      + (beta(nu-m+1)/2 - 1) logdet(I - b).
// Returns -infinity unless both b and I - b are positive definite.
double beta1_logpdf(const HermMatrix& b, const BetaIParams& p);

// Log density of the matrix-multivariate beta type I law at b1.
// Wide: log Gamma[beta(nu+mn)/2] - log Gamma[beta nu/2] - log Gamma_m[beta n/2]
//       + (beta(n-m+1)/2 - 1) logdet b1 + (beta nu/2 - 1) log(1 - tr b1),
// support b1 PD and tr b1 < 1; tall swaps the roles of m and n.
double mmbeta1_logpdf(const HermMatrix& b1, const BetaIParams& p);

// Joint law evaluated on the spectrum:
//   singular_pearson - singular values of a matricvariate Pearson II matrix
//   singular_mm      - singular values of a matrix-multivariate Pearson II
//   eigen_beta       - eigenvalues of a matricvariate beta type I matrix
//   eigen_mm         - eigenvalues of a matrix-multivariate beta type I matrix
enum class SpectralFlavor { singular_pearson, singular_mm, eigen_beta, eigen_mm };

// values must be strictly decreasing in (0, 1); their count plays the role of
// m and n_dof >= count the ambient dimension.  beta may be ANY positive real:
// the densities are analytic in beta, and beta = 8 is meaningful here even
// though matrix sampling is not.  For a tall underlying matrix pass the
// transposed-parameter form (count = n, n_dof = m, nu + n - m) yourself;
// the evaluator always reads the wide convention.
struct SpectralConfig {
  std::vector<double> values;
  double n_dof = 0.0;
  double nu = 0.0;
  double beta = 1.0;
  SpectralFlavor flavor = SpectralFlavor::singular_pearson;

  int count() const { return static_cast<int>(values.size()); }
};

// Log of the exact joint density of the ordered spectrum.  With p = count,
// q = nu - p + 1 and V = prod_{i<j} of the squared-value gaps (singular
// flavors) or value gaps (eigen flavors), the four flavors are
//   singular_pearson: 2^p pi^(beta p^2/2 + tau) / (Gamma_p[beta p/2] B_p[beta nu/2, beta n/2])
//                     * prod v_i^(beta(n-p+1)-1) (1-v_i^2)^(beta q/2-1) * V^beta
//   singular_mm:      2^p pi^(beta p^2/2 + tau) Gamma[beta(nu+pn)/2]
//                     / (Gamma[beta nu/2] Gamma_p[beta p/2] Gamma_p[beta n/2])
//                     * (1 - sum v_i^2)^(beta nu/2 - 1) prod v_i^(beta(n-p+1)-1) * V^beta
//   eigen_beta:       pi^(beta p^2/2 + tau) / (Gamma_p[beta p/2] B_p[beta nu/2, beta n/2])
//                     * prod v_i^(beta(n-p+1)/2-1) (1-v_i)^(beta q/2-1) * V^beta
//   eigen_mm:         pi^(beta p^2/2 + tau) Gamma[beta(nu+pn)/2]
//                     / (Gamma[beta nu/2] Gamma_p[beta p/2] Gamma_p[beta n/2])
//                     * (1 - sum v_i)^(beta nu/2 - 1) prod v_i^(beta(n-p+1)/2-1) * V^beta
// where pi^tau is the continuous form -(p beta/2) log pi + p log Gamma(beta/2).
// Throws DegenerateInputError on tied values and SupportError on any other
// support violation (ordering, range, trace/sum constraint).
double spectral_logpdf(const SpectralConfig& c);

// Same value inside the support but returns -infinity instead of throwing on
// support violations (ties included); used by Monte Carlo integration and by
// the sampler's Metropolis chain.  Malformed configs still throw.
double spectral_logpdf_total(const SpectralConfig& c);

// For a singular-value config c, evaluates both sides of the exact
// change-of-variables identity lambda_i = v_i^2 between the singular value
// density and the matching eigenvalue density:
//   returns  spectral_logpdf(c) - spectral_logpdf(eigen form at v^2)
//            - sum_i log(2 v_i),
// which is identically zero up to rounding.  Throws ParameterError if c is
// not a singular flavor.
double change_of_variables_check(const SpectralConfig& c);

}  // namespace divstat
