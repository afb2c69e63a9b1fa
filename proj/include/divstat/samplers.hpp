#pragma once

#include <cstdint>
#include <vector>

#include "divstat/densities.hpp"
#include "divstat/matrix.hpp"
#include "divstat/rng.hpp"

namespace divstat {

// Generator of the elliptical family used by the invariance tests: either the
// Gaussian itself or the matrix-t scale mixture Z / sqrt(G/df) with G a real
// chi-square with df degrees of freedom (the mixing variable is scalar and
// algebra-independent).
struct EllipticalGenerator {
  enum class Kind { normal, matrix_t };
  Kind kind = Kind::normal;
  double df = 0.0;

  static EllipticalGenerator normal() { return {}; }
  static EllipticalGenerator matrix_t(double df) {
    return {Kind::matrix_t, df};
  }
  void validate() const;
};

// Parameters of the Wishart law over the algebra: Gram of nu standardized
// Gaussian columns (integer nu) scaled by sigma, extended to real nu by the
// Bartlett construction.  Requires nu > beta*(m-1).
struct WishartParams {
  double nu = 0.0;
  HermMatrix sigma;

  int beta() const { return sigma.beta(); }
  int dim() const { return sigma.dim(); }
  void validate() const;
};

enum class WishartConstruction {
  automatic,  // Gram when nu is an integer, Bartlett otherwise
  gram,       // requires integer nu
  bartlett,
};

// Standardized Gaussian matrix scaled on both sides: L_sigma Z L_theta*, where
// each coefficient of Z is an independent real N(0, 1/beta) draw (so each
// entry has unit total variance; this variance convention is what makes the
// downstream density constants exact).
Matrix sample_normal(RngStream& rng, int beta, int m, int n,
                     const HermMatrix& sigma_left, const HermMatrix& theta_right);

// Identity-scale convenience form.
Matrix sample_standard_normal(RngStream& rng, int beta, int m, int n);

// chi^2-type scalar: Gamma(shape beta*nu/2, rate beta/2).  Accepts beta=8
// (a scalar law needs no matrix algebra).
double sample_chi2beta(RngStream& rng, int beta, double nu);

HermMatrix sample_wishart(RngStream& rng, const WishartParams& p,
                          WishartConstruction how = WishartConstruction::automatic);

// How to realize a standard determinant-kernel Pearson II draw.
struct PearsonConstruction {
  enum class Method {
    left_quotient,   // R0 = chol(U1 + X X*)^{-1} X, U1 Wishart(nu)
    right_quotient,  // R0 = Y (chol(V1 + Y* Y)*)^{-1}, V1 Wishart(nu + n - m) on the right
    elliptical,      // R0 = chol(W W*)^{-1} W[:, :n] from an m x (n + nu) elliptical block
  };
  // Root used for the left_quotient denominator; the law is the same for any root
  // (checked by test), the option exists to demonstrate exactly that.
  enum class Root { cholesky_factor, symmetric_root };

  Method method = Method::left_quotient;
  Root root = Root::cholesky_factor;
  EllipticalGenerator generator;  // only read when method == elliptical

  static PearsonConstruction left_quotient() { return {}; }
  static PearsonConstruction right_quotient() {
    PearsonConstruction c;
    c.method = Method::right_quotient;
    return c;
  }
  static PearsonConstruction elliptical(EllipticalGenerator g) {
    PearsonConstruction c;
    c.method = Method::elliptical;
    c.generator = g;
    return c;
  }
};

// Standard (mu = 0, identity scales) wide draw plus the construction's
// denominator matrix, exposed so independence and marginal claims can be
// tested: left_quotient and elliptical fill an m x m denominator (U = U1 + X X*,
// resp. W W*), right_quotient an n x n one (V = V1 + Y* Y).
struct Pearson2Internal {
  Matrix r0;
  HermMatrix denominator;
};

// Requires m <= n (the public sampler transposes tall parameter sets before
// reaching this point).
Pearson2Internal sample_pearson2_internal(RngStream& rng, int beta, int m, int n,
                                          double nu, const PearsonConstruction& how);

// Draw from the matricvariate (determinant-kernel) Pearson II law.  The
// standard draw R0 is mapped to Q = (M*)^{-1} R0 N* + mu with M, N the
// Cholesky factors of scale_left and scale_right; this is the inverse of the
// standardizing map R0 = M* (Q - mu) (N*)^{-1} under which pearson2_logpdf
// transforms with Jacobian offset (beta n/2) logdet B - (beta m/2) logdet D.
// Tall parameter sets are sampled by transposition, matching the evaluator.
Matrix sample_pearson2(RngStream& rng, const PearsonIIParams& p,
                       const PearsonConstruction& how = PearsonConstruction::left_quotient());

// Standard trace-kernel draw R0 = (S + tr Y Y*)^{-1/2} Y together with
// S1 = S + tr Y Y*, which is itself chi^2-type with nu + m n degrees of
// freedom and independent of R0.
struct MMPearson2Internal {
  Matrix r0;
  double s1 = 0.0;
};

MMPearson2Internal sample_mmpearson2_internal(RngStream& rng, int beta, int m, int n,
                                              double nu);

// Draw from the matrix-multivariate (trace-kernel) Pearson II law; the affine
// map here is Q = (M*)^{-1} R0 N^{-1} + mu, the inverse of R0 = M* (Q - mu) N.
Matrix sample_mmpearson2(RngStream& rng, const PearsonIIParams& p);

// Gram-map samplers for the beta type I laws.  n must be an integer.
// wide:  B = R0 R0* from the m x n standard Pearson draw of the flavor;
// tall (determinant flavor): B = W W* with W the n x m standard draw at
//   nu + n - m degrees of freedom (equivalently R* R for the tall Pearson
//   draw in the convention of beta1_logpdf);
// tall (trace flavor): B = R0* R0 from the m x n standard trace-kernel draw.
HermMatrix sample_beta1(RngStream& rng, const BetaIParams& p,
                        PearsonKind flavor = PearsonKind::matricvariate);

HermMatrix sample_mmbeta1(RngStream& rng, const BetaIParams& p);

struct SpectralSampleOptions {
  int burn_in = 1000;
  int thin = 10;
  // Initial random-walk scale; values <= 0 select 0.15/sqrt(count) and enable
  // tuning toward 20-40% acceptance during burn-in (frozen afterwards).
  double step_size = 0.0;
};

struct SpectralSampleResult {
  std::vector<std::vector<double>> draws;  // each strictly decreasing
  double acceptance_rate = 0.0;            // measured after burn-in
  double step_size = 0.0;                  // step actually used
};

// Random-walk Metropolis targeting spectral_logpdf_total of c's flavor and
// parameters (c.values, when in support, seed the chain; otherwise a default
// interior point is used).  Proposals leaving the ordered support are
// rejected.  Throws DiagnosticsError if nothing is accepted after burn-in.
SpectralSampleResult sample_spectral(RngStream& rng, const SpectralConfig& c, int count,
                                     const SpectralSampleOptions& options = {});

}  // namespace divstat
