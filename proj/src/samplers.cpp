#include "divstat/samplers.hpp"

#include <cmath>
#include <cstddef>
#include <string>

#include "divstat/errors.hpp"
#include "divstat/factor.hpp"

namespace divstat {

namespace {

double require_integer(double x, const char* what) {
  const double rounded = std::round(x);
  if (!std::isfinite(x) || std::abs(x - rounded) > 1e-9) {
    throw ParameterError(std::string(what) + " must be an integer, got " +
                         std::to_string(x));
  }
  return rounded;
}

Matrix standard_gaussian(RngStream& rng, int beta, int m, int n) {
  const double sd = 1.0 / std::sqrt(static_cast<double>(beta));
  Matrix z(beta, m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < beta; ++k) z.set_coeff(i, j, k, sd * rng.normal());
  return z;
}

// Identity-scale Wishart draw by the requested construction.
HermMatrix standard_wishart(RngStream& rng, int beta, int m, double nu,
                            WishartConstruction how) {
  if (how == WishartConstruction::automatic) {
    how = std::abs(nu - std::round(nu)) <= 1e-9 ? WishartConstruction::gram
                                                : WishartConstruction::bartlett;
  }
  if (how == WishartConstruction::gram) {
    const int k = static_cast<int>(require_integer(nu, "Gram construction: nu"));
    return gram(standard_gaussian(rng, beta, m, k));
  }
  // Bartlett: lower-triangular T, t_ii^2 ~ Gamma(beta (nu - i)/2, beta/2)
  // (0-based i), strict lower entries standardized Gaussians.
  const double sd = 1.0 / std::sqrt(static_cast<double>(beta));
  Matrix t(beta, m, m);
  for (int i = 0; i < m; ++i) {
    const double shape = 0.5 * beta * (nu - i);
    t.set_coeff(i, i, 0, std::sqrt(rng.gamma(shape, 0.5 * beta)));
    for (int j = 0; j < i; ++j)
      for (int k = 0; k < beta; ++k) t.set_coeff(i, j, k, sd * rng.normal());
  }
  return gram(t);
}

PearsonIIParams transpose_params(const PearsonIIParams& p) {
  PearsonIIParams d;
  d.nu = p.nu;
  d.mu = adjoint(p.mu);
  d.scale_left = inverse_hpd(p.scale_right);
  d.scale_right = inverse_hpd(p.scale_left);
  d.kind = p.kind;
  return d;
}

// Y N^{-1} for lower-triangular N, via the adjoint system N* (Y N^{-1})* = Y*.
Matrix right_divide_lower(const Matrix& y, const Matrix& n_lower) {
  return adjoint(solve_upper_left(adjoint(n_lower), adjoint(y)));
}

}  // namespace

void EllipticalGenerator::validate() const {
  if (kind == Kind::matrix_t && (!(df > 0.0) || !std::isfinite(df))) {
    throw ParameterError("matrix_t generator needs df > 0, got " + std::to_string(df));
  }
}

void WishartParams::validate() const {
  if (dim() < 1) throw DimensionError("Wishart scale must be nonempty");
  if (!std::isfinite(nu) || !(nu > static_cast<double>(beta()) * (dim() - 1))) {
    throw ParameterError("Wishart nu must exceed beta*(m-1) = " +
                         std::to_string(static_cast<double>(beta()) * (dim() - 1)) +
                         ", got " + std::to_string(nu));
  }
  if (!is_positive_definite(sigma)) {
    throw NotPositiveDefiniteError("Wishart scale must be positive definite");
  }
}

Matrix sample_normal(RngStream& rng, int beta, int m, int n,
                     const HermMatrix& sigma_left, const HermMatrix& theta_right) {
  if (sigma_left.beta() != beta || theta_right.beta() != beta) {
    throw DimensionError("sample_normal: scales must live in the requested algebra");
  }
  if (sigma_left.dim() != m || theta_right.dim() != n) {
    throw DimensionError("sample_normal: scale dimensions must be m x m and n x n");
  }
  if (!is_positive_definite(sigma_left) || !is_positive_definite(theta_right)) {
    throw NotPositiveDefiniteError("sample_normal: scales must be positive definite");
  }
  const Matrix z = standard_gaussian(rng, beta, m, n);
  return matmul(matmul(cholesky(sigma_left), z), adjoint(cholesky(theta_right)));
}

Matrix sample_standard_normal(RngStream& rng, int beta, int m, int n) {
  require_matrix_beta(beta);
  if (m < 1 || n < 1) throw DimensionError("sample_standard_normal: empty shape");
  return standard_gaussian(rng, beta, m, n);
}

double sample_chi2beta(RngStream& rng, int beta, double nu) {
  require_valid_beta(beta);
  if (!(nu > 0.0) || !std::isfinite(nu)) {
    throw ParameterError("chi^2 nu must be positive, got " + std::to_string(nu));
  }
  return rng.chi2beta(beta, nu);
}

HermMatrix sample_wishart(RngStream& rng, const WishartParams& p,
                          WishartConstruction how) {
  p.validate();
  const Matrix l = cholesky(p.sigma);
  const HermMatrix u0 = standard_wishart(rng, p.beta(), p.dim(), p.nu, how);
  return gram(matmul(l, cholesky(u0)));
}

Pearson2Internal sample_pearson2_internal(RngStream& rng, int beta, int m, int n,
                                          double nu, const PearsonConstruction& how) {
  require_matrix_beta(beta);
  if (m < 1 || n < m) {
    throw DimensionError("standard Pearson draws are generated wide (1 <= m <= n); "
                         "tall parameter sets are transposed before sampling");
  }

  switch (how.method) {
    case PearsonConstruction::Method::left_quotient: {
      if (!(nu > static_cast<double>(beta) * (m - 1))) {
        throw ParameterError("left-quotient construction needs nu > beta*(m-1), got nu = " +
                             std::to_string(nu));
      }
      const Matrix x = standard_gaussian(rng, beta, m, n);
      const HermMatrix u = standard_wishart(rng, beta, m, nu,
                                            WishartConstruction::automatic) +
                           gram(x);
      Matrix r0;
      if (how.root == PearsonConstruction::Root::cholesky_factor) {
        r0 = solve_lower_left(cholesky(u), x);
      } else {
        r0 = matmul(inverse_hpd(sqrt_hpd(u)).to_matrix(), x);
      }
      return {r0, u};
    }
    case PearsonConstruction::Method::right_quotient: {
      if (!(nu + n - m > static_cast<double>(beta) * (n - 1))) {
        throw ParameterError(
            "right-quotient construction needs nu + n - m > beta*(n-1), got nu + n - m = " +
            std::to_string(nu + n - m));
      }
      const Matrix y = standard_gaussian(rng, beta, m, n);
      const HermMatrix v = standard_wishart(rng, beta, n, nu + n - m,
                                            WishartConstruction::automatic) +
                           gram_reverse(y);
      return {solve_upper_right(adjoint(cholesky(v)), y), v};
    }
    case PearsonConstruction::Method::elliptical: {
      how.generator.validate();
      if (!(nu > static_cast<double>(beta) * (m - 1))) {
        throw ParameterError("elliptical construction needs nu > beta*(m-1), got nu = " +
                             std::to_string(nu));
      }
      const int extra = static_cast<int>(require_integer(nu, "elliptical construction: nu"));
      Matrix w = standard_gaussian(rng, beta, m, n + extra);
      if (how.generator.kind == EllipticalGenerator::Kind::matrix_t) {
        const double g = rng.gamma(0.5 * how.generator.df, 0.5);
        w *= std::sqrt(how.generator.df / g);
      }
      const HermMatrix u = gram(w);
      return {solve_lower_left(cholesky(u), w.block(0, 0, m, n)), u};
    }
  }
  throw InternalConsistencyError("unreachable Pearson construction");
}

Matrix sample_pearson2(RngStream& rng, const PearsonIIParams& p,
                       const PearsonConstruction& how) {
  p.validate();
  if (p.kind != PearsonKind::matricvariate) {
    throw ParameterError("sample_pearson2 draws the matricvariate kind; "
                         "use sample_mmpearson2 for kind=matrix_multivariate");
  }
  if (p.rows() > p.cols()) {
    return adjoint(sample_pearson2(rng, transpose_params(p), how));
  }
  const Pearson2Internal draw =
      sample_pearson2_internal(rng, p.beta(), p.rows(), p.cols(), p.nu, how);
  const Matrix a = solve_upper_left(adjoint(cholesky(p.scale_left)), draw.r0);
  return matmul(a, adjoint(cholesky(p.scale_right))) + p.mu;
}

MMPearson2Internal sample_mmpearson2_internal(RngStream& rng, int beta, int m, int n,
                                              double nu) {
  require_matrix_beta(beta);
  if (m < 1 || n < 1) throw DimensionError("empty shape");
  if (!(nu > 0.0)) {
    throw ParameterError("trace-kernel nu must be positive, got " + std::to_string(nu));
  }
  const Matrix y = standard_gaussian(rng, beta, m, n);
  const double fro = y.frobenius_norm();
  const double s1 = sample_chi2beta(rng, beta, nu) + fro * fro;
  return {y * (1.0 / std::sqrt(s1)), s1};
}

Matrix sample_mmpearson2(RngStream& rng, const PearsonIIParams& p) {
  p.validate();
  if (p.kind != PearsonKind::matrix_multivariate) {
    throw ParameterError("sample_mmpearson2 draws the matrix-multivariate kind; "
                         "use sample_pearson2 for kind=matricvariate");
  }
  const MMPearson2Internal draw =
      sample_mmpearson2_internal(rng, p.beta(), p.rows(), p.cols(), p.nu);
  const Matrix a = solve_upper_left(adjoint(cholesky(p.scale_left)), draw.r0);
  return right_divide_lower(a, cholesky(p.scale_right)) + p.mu;
}

HermMatrix sample_beta1(RngStream& rng, const BetaIParams& p, PearsonKind flavor) {
  const bool trace_kind = flavor == PearsonKind::matrix_multivariate;
  p.validate(trace_kind);
  const int n = static_cast<int>(
      require_integer(p.n_dof, "sampling the beta type I law: n"));

  if (p.orientation == BetaOrientation::wide) {
    if (trace_kind) {
      return gram(sample_mmpearson2_internal(rng, p.beta, p.m, n, p.nu).r0);
    }
    return gram(sample_pearson2_internal(rng, p.beta, p.m, n, p.nu,
                                         PearsonConstruction::left_quotient())
                    .r0);
  }
  if (trace_kind) {
    return gram_reverse(sample_mmpearson2_internal(rng, p.beta, p.m, n, p.nu).r0);
  }
  // Tall determinant flavor: the n x n Gram of the wide standard draw at
  // nu + n - m degrees of freedom (see beta1_logpdf's tall convention).
  return gram(sample_pearson2_internal(rng, p.beta, n, p.m, p.nu + n - p.m,
                                       PearsonConstruction::left_quotient())
                  .r0);
}

HermMatrix sample_mmbeta1(RngStream& rng, const BetaIParams& p) {
  return sample_beta1(rng, p, PearsonKind::matrix_multivariate);
}

namespace {

std::vector<double> default_spectral_state(const SpectralConfig& c) {
  const int p = c.count();
  std::vector<double> v(static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) {
    const double mass = static_cast<double>(p - i) / (static_cast<double>(p) * (p + 1));
    const bool singular = c.flavor == SpectralFlavor::singular_pearson ||
                          c.flavor == SpectralFlavor::singular_mm;
    v[static_cast<std::size_t>(i)] = singular ? std::sqrt(mass) : mass;
  }
  return v;
}

}  // namespace

SpectralSampleResult sample_spectral(RngStream& rng, const SpectralConfig& c, int count,
                                     const SpectralSampleOptions& options) {
  if (count < 1) throw ParameterError("sample_spectral: count must be positive");
  if (options.burn_in < 0 || options.thin < 1) {
    throw ParameterError("sample_spectral: burn_in must be >= 0 and thin >= 1");
  }

  SpectralConfig state = c;
  double cur_lp = spectral_logpdf_total(state);  // also validates the config
  if (!std::isfinite(cur_lp)) {
    state.values = default_spectral_state(c);
    cur_lp = spectral_logpdf_total(state);
  }
  const int p = state.count();

  double step = options.step_size > 0.0 ? options.step_size : 0.15 / std::sqrt(p);
  const bool tune = !(options.step_size > 0.0);

  SpectralConfig proposal = state;
  auto advance = [&](bool allow_tune, int steps, long* accepted) {
    int window_accepts = 0;
    int window_size = 0;
    for (int s = 0; s < steps; ++s) {
      for (int i = 0; i < p; ++i) {
        proposal.values[static_cast<std::size_t>(i)] =
            state.values[static_cast<std::size_t>(i)] + step * rng.normal();
      }
      const double lp = spectral_logpdf_total(proposal);
      const double u = rng.uniform01();
      if (lp - cur_lp > std::log(u)) {
        state.values = proposal.values;
        cur_lp = lp;
        ++window_accepts;
        if (accepted) ++(*accepted);
      }
      ++window_size;
      if (allow_tune && tune && window_size == 100) {
        const double rate = window_accepts / 100.0;
        if (rate > 0.40) step = std::min(step * 1.3, 1.0);
        if (rate < 0.20) step = std::max(step / 1.3, 1e-6);
        window_accepts = 0;
        window_size = 0;
      }
    }
  };

  advance(true, options.burn_in, nullptr);

  SpectralSampleResult result;
  result.draws.reserve(static_cast<std::size_t>(count));
  long accepted = 0;
  const long total = static_cast<long>(count) * options.thin;
  for (int d = 0; d < count; ++d) {
    advance(false, options.thin, &accepted);
    result.draws.push_back(state.values);
  }
  if (accepted == 0) {
    throw DiagnosticsError(
        "sample_spectral: no proposals accepted after warm-up (step size " +
        std::to_string(step) + "); the chain is stuck");
  }
  result.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(total);
  result.step_size = step;
  return result;
}

}  // namespace divstat
