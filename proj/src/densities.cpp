#include "divstat/densities.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>

#include "divstat/errors.hpp"
#include "divstat/special.hpp"

namespace divstat {

namespace {

constexpr double kLogPi = 1.1447298858494001741;  // log(pi)
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_finite(double x, const char* name) {
  if (!std::isfinite(x)) {
    throw ParameterError(std::string(name) + " must be finite, got " + std::to_string(x));
  }
}

void require_pd_scale(const HermMatrix& h, const char* name) {
  if (!is_positive_definite(h)) {
    throw NotPositiveDefiniteError(std::string(name) + " must be positive definite");
  }
}

// (Q - mu) scale_right^{-1} (Q - mu)* as an exactly Hermitian Gram matrix:
// with L the Cholesky factor of scale_right, T = W (L*)^{-1} gives T T*.
HermMatrix quad_form_inverse_right(const Matrix& w, const HermMatrix& scale_right) {
  const Matrix lt = adjoint(cholesky(scale_right));
  return gram(solve_upper_right(lt, w));
}

}  // namespace

PearsonIIParams PearsonIIParams::standard(int beta, int m, int n, double nu,
                                          PearsonKind kind) {
  PearsonIIParams p;
  p.nu = nu;
  p.mu = Matrix(beta, m, n);
  p.scale_left = HermMatrix::identity(beta, m);
  p.scale_right = HermMatrix::identity(beta, n);
  p.kind = kind;
  return p;
}

void PearsonIIParams::validate() const {
  const int m = mu.rows();
  const int n = mu.cols();
  if (m < 1 || n < 1) {
    throw DimensionError("location matrix must be nonempty, got " + std::to_string(m) +
                         "x" + std::to_string(n));
  }
  if (scale_left.beta() != mu.beta() || scale_right.beta() != mu.beta()) {
    throw DimensionError("location and scale matrices must share one algebra");
  }
  if (scale_left.dim() != m) {
    throw DimensionError("scale_left must be " + std::to_string(m) + "x" +
                         std::to_string(m) + ", got dim " +
                         std::to_string(scale_left.dim()));
  }
  if (scale_right.dim() != n) {
    throw DimensionError("scale_right must be " + std::to_string(n) + "x" +
                         std::to_string(n) + ", got dim " +
                         std::to_string(scale_right.dim()));
  }
  require_finite(nu, "nu");
  if (kind == PearsonKind::matricvariate) {
    const int small = m < n ? m : n;
    const double bound = static_cast<double>(beta()) * (small - 1);
    if (!(nu > bound)) {
      throw ParameterError("nu must exceed beta*(min(m,n)-1) = " + std::to_string(bound) +
                           " for the matricvariate kind, got " + std::to_string(nu));
    }
  } else {
    if (!(nu > 0.0)) {
      throw ParameterError("nu must be positive for the matrix-multivariate kind, got " +
                           std::to_string(nu));
    }
  }
  require_pd_scale(scale_left, "scale_left");
  require_pd_scale(scale_right, "scale_right");
}

namespace {

void check_point_shape(const Matrix& q, const PearsonIIParams& p, const char* fn) {
  if (q.beta() != p.beta()) {
    throw DimensionError(std::string(fn) + ": point and parameters must share one algebra");
  }
  if (q.rows() != p.rows() || q.cols() != p.cols()) {
    throw DimensionError(std::string(fn) + ": point is " + std::to_string(q.rows()) + "x" +
                         std::to_string(q.cols()) + " but parameters describe " +
                         std::to_string(p.rows()) + "x" + std::to_string(p.cols()));
  }
}

// A tall point is evaluated through its adjoint: the law of Q* is the wide
// family with location mu*, scales (scale_right^{-1}, scale_left^{-1}) and the
// same nu (this transposition rule is exact, not approximate).
PearsonIIParams transpose_params(const PearsonIIParams& p) {
  PearsonIIParams d;
  d.nu = p.nu;
  d.mu = adjoint(p.mu);
  d.scale_left = inverse_hpd(p.scale_right);
  d.scale_right = inverse_hpd(p.scale_left);
  d.kind = p.kind;
  return d;
}

}  // namespace

double pearson2_logpdf(const Matrix& q, const PearsonIIParams& p) {
  p.validate();
  if (p.kind != PearsonKind::matricvariate) {
    throw ParameterError(
        "pearson2_logpdf evaluates the matricvariate (determinant-kernel) kind; "
        "use mmpearson2_logpdf for kind=matrix_multivariate");
  }
  check_point_shape(q, p, "pearson2_logpdf");
  const int m = p.rows();
  const int n = p.cols();
  if (m > n) return pearson2_logpdf(adjoint(q), transpose_params(p));

  const int beta = p.beta();
  const double b2 = 0.5 * beta;
  const Matrix w = q - p.mu;
  const HermMatrix kernel = inverse_hpd(p.scale_left) - quad_form_inverse_right(w, p.scale_right);
  if (!is_positive_definite(kernel)) return kNegInf;

  return log_mgamma(beta, m, b2 * (n + p.nu)) - log_mgamma(beta, m, b2 * p.nu) -
         b2 * m * n * kLogPi + (b2 * (p.nu + n - m + 1) - 1.0) * logdet_hpd(p.scale_left) -
         b2 * m * logdet_hpd(p.scale_right) +
         (b2 * (p.nu - m + 1) - 1.0) * logdet_hpd(kernel);
}

double pearson2_logpdf_dual(const Matrix& q, const PearsonIIParams& p) {
  p.validate();
  if (p.kind != PearsonKind::matricvariate) {
    throw ParameterError(
        "pearson2_logpdf_dual evaluates the matricvariate (determinant-kernel) kind; "
        "use mmpearson2_logpdf for kind=matrix_multivariate");
  }
  check_point_shape(q, p, "pearson2_logpdf_dual");
  const int m = p.rows();
  const int n = p.cols();
  if (m > n) return pearson2_logpdf_dual(adjoint(q), transpose_params(p));

  const int beta = p.beta();
  const double b2 = 0.5 * beta;
  const Matrix w = q - p.mu;
  // scale_right - W* scale_left W, with the quadratic form as a Gram matrix:
  // scale_left = M M*  =>  W* scale_left W = (M* W)* (M* W).
  const Matrix mw = matmul(adjoint(cholesky(p.scale_left)), w);
  const HermMatrix kernel = p.scale_right - gram_reverse(mw);
  if (!is_positive_definite(kernel)) return kNegInf;

  return log_mgamma(beta, n, b2 * (n + p.nu)) - log_mgamma(beta, n, b2 * (p.nu + n - m)) -
         b2 * m * n * kLogPi + b2 * n * logdet_hpd(p.scale_left) -
         (b2 * (p.nu + 1) - 1.0) * logdet_hpd(p.scale_right) +
         (b2 * (p.nu - m + 1) - 1.0) * logdet_hpd(kernel);
}

double mmpearson2_logpdf(const Matrix& q1, const PearsonIIParams& p) {
  p.validate();
  if (p.kind != PearsonKind::matrix_multivariate) {
    throw ParameterError(
        "mmpearson2_logpdf evaluates the matrix-multivariate (trace-kernel) kind; "
        "use pearson2_logpdf for kind=matricvariate");
  }
  check_point_shape(q1, p, "mmpearson2_logpdf");
  const int m = p.rows();
  const int n = p.cols();
  const int beta = p.beta();
  const double b2 = 0.5 * beta;

  // tr[scale_left W scale_right W*] with W scale_right W* as a Gram matrix:
  // scale_right = N N*  =>  W scale_right W* = (W N)(W N)*.
  const Matrix wn = matmul(q1 - p.mu, cholesky(p.scale_right));
  const double t = trace_product(p.scale_left, gram(wn));
  if (!(t < 1.0)) return kNegInf;

  return log_mgamma(beta, 1, b2 * (p.nu + m * n)) - log_mgamma(beta, 1, b2 * p.nu) -
         b2 * m * n * kLogPi + b2 * n * logdet_hpd(p.scale_left) +
         b2 * m * logdet_hpd(p.scale_right) + (b2 * p.nu - 1.0) * std::log1p(-t);
}

void BetaIParams::validate(bool trace_kind) const {
  require_matrix_beta(beta);
  if (m < 1) throw ParameterError("row count m must be positive, got " + std::to_string(m));
  require_finite(n_dof, "n");
  require_finite(nu, "nu");
  const double bd = static_cast<double>(beta);
  if (orientation == BetaOrientation::wide) {
    if (!(n_dof > bd * (m - 1))) {
      throw ParameterError("wide orientation requires n > beta*(m-1) = " +
                           std::to_string(bd * (m - 1)) + ", got n = " +
                           std::to_string(n_dof));
    }
    if (trace_kind) {
      if (!(nu > 0.0)) {
        throw ParameterError("nu must be positive, got " + std::to_string(nu));
      }
    } else if (!(nu > bd * (m - 1))) {
      throw ParameterError("wide orientation requires nu > beta*(m-1) = " +
                           std::to_string(bd * (m - 1)) + ", got nu = " +
                           std::to_string(nu));
    }
  } else {
    const double rounded = std::round(n_dof);
    if (std::abs(n_dof - rounded) > 1e-9 || rounded < 1.0) {
      throw ParameterError("tall orientation requires integer n >= 1, got n = " +
                           std::to_string(n_dof));
    }
    const int n = static_cast<int>(rounded);
    if (n > m) {
      throw ParameterError("tall orientation requires n <= m, got n = " +
                           std::to_string(n) + " > m = " + std::to_string(m));
    }
    if (!(m > bd * (n - 1))) {
      throw ParameterError("tall orientation requires m > beta*(n-1) = " +
                           std::to_string(bd * (n - 1)) + ", got m = " + std::to_string(m));
    }
    if (trace_kind) {
      if (!(nu > 0.0)) {
        throw ParameterError("nu must be positive, got " + std::to_string(nu));
      }
    } else if (!(nu + n - m > bd * (n - 1))) {
      throw ParameterError("tall orientation requires nu + n - m > beta*(n-1) = " +
                           std::to_string(bd * (n - 1)) + ", got nu + n - m = " +
                           std::to_string(nu + n - m));
    }
  }
}

namespace {

int beta1_matrix_order(const BetaIParams& p) {
  return p.orientation == BetaOrientation::wide ? p.m
                                                : static_cast<int>(std::round(p.n_dof));
}

void check_beta1_shape(const HermMatrix& b, const BetaIParams& p, const char* fn) {
  if (b.beta() != p.beta) {
    throw DimensionError(std::string(fn) + ": matrix and parameters must share one algebra");
  }
  const int order = beta1_matrix_order(p);
  if (b.dim() != order) {
    throw DimensionError(std::string(fn) + ": matrix has dim " + std::to_string(b.dim()) +
                         " but the " +
                         (p.orientation == BetaOrientation::wide ? "wide" : "tall") +
                         " orientation requires dim " + std::to_string(order));
  }
}

}  // namespace

double beta1_logpdf(const HermMatrix& b, const BetaIParams& p) {
  p.validate(false);
  check_beta1_shape(b, p, "beta1_logpdf");
  const double b2 = 0.5 * p.beta;
  const int order = beta1_matrix_order(p);
  const HermMatrix complement = HermMatrix::identity(p.beta, order) - b;
  if (!is_positive_definite(b) || !is_positive_definite(complement)) return kNegInf;

  double lg;
  if (p.orientation == BetaOrientation::wide) {
    lg = -log_mbeta(p.beta, p.m, b2 * p.nu, b2 * p.n_dof) +
         (b2 * (p.n_dof - p.m + 1) - 1.0) * logdet_hpd(b);
  } else {
    const int n = order;
    lg = -log_mbeta(p.beta, n, b2 * (p.nu + n - p.m), b2 * p.m) +
         (b2 * (p.m - n + 1) - 1.0) * logdet_hpd(b);
  }
  return lg + (b2 * (p.nu - p.m + 1) - 1.0) * logdet_hpd(complement);
}

double mmbeta1_logpdf(const HermMatrix& b1, const BetaIParams& p) {
  p.validate(true);
  check_beta1_shape(b1, p, "mmbeta1_logpdf");
  const double b2 = 0.5 * p.beta;
  const double t = b1.trace();
  if (!is_positive_definite(b1) || !(t < 1.0)) return kNegInf;

  const double product_dof = p.m * p.n_dof;
  double lg = log_mgamma(p.beta, 1, b2 * (p.nu + product_dof)) -
              log_mgamma(p.beta, 1, b2 * p.nu) + (b2 * p.nu - 1.0) * std::log1p(-t);
  if (p.orientation == BetaOrientation::wide) {
    lg += -log_mgamma(p.beta, p.m, b2 * p.n_dof) +
          (b2 * (p.n_dof - p.m + 1) - 1.0) * logdet_hpd(b1);
  } else {
    const int n = beta1_matrix_order(p);
    lg += -log_mgamma(p.beta, n, b2 * p.m) + (b2 * (p.m - n + 1) - 1.0) * logdet_hpd(b1);
  }
  return lg;
}

namespace {

enum class SpectralStatus { ok, tie, violation };

void spectral_check_malformed(const SpectralConfig& c) {
  if (c.values.empty()) throw ParameterError("spectral config needs at least one value");
  if (!(c.beta > 0.0) || !std::isfinite(c.beta)) {
    throw ParameterError("spectral beta must be a positive real, got " +
                         std::to_string(c.beta));
  }
  require_finite(c.n_dof, "n");
  require_finite(c.nu, "nu");
  for (double v : c.values) {
    if (!std::isfinite(v)) throw ParameterError("spectral values must be finite");
  }
}

bool is_trace_flavor(SpectralFlavor f) {
  return f == SpectralFlavor::singular_mm || f == SpectralFlavor::eigen_mm;
}

bool is_singular_flavor(SpectralFlavor f) {
  return f == SpectralFlavor::singular_pearson || f == SpectralFlavor::singular_mm;
}

SpectralStatus spectral_support(const SpectralConfig& c, std::string* why) {
  const std::size_t p = c.values.size();
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i + 1; j < p; ++j) {
      if (c.values[i] == c.values[j]) {
        if (why) {
          *why = "values " + std::to_string(i) + " and " + std::to_string(j) +
                 " are tied at " + std::to_string(c.values[i]);
        }
        return SpectralStatus::tie;
      }
    }
  }
  for (std::size_t i = 0; i + 1 < p; ++i) {
    if (!(c.values[i] > c.values[i + 1])) {
      if (why) *why = "values must be strictly decreasing";
      return SpectralStatus::violation;
    }
  }
  if (!(c.values.front() < 1.0) || !(c.values.back() > 0.0)) {
    if (why) *why = "values must lie strictly inside (0, 1)";
    return SpectralStatus::violation;
  }
  if (is_trace_flavor(c.flavor)) {
    double s = 0.0;
    for (double v : c.values) s += is_singular_flavor(c.flavor) ? v * v : v;
    if (!(s < 1.0)) {
      if (why) {
        *why = is_singular_flavor(c.flavor)
                   ? "sum of squared singular values must be below one"
                   : "sum of eigenvalues must be below one";
      }
      return SpectralStatus::violation;
    }
  }
  return SpectralStatus::ok;
}

// Assumes the config passed the malformed and support checks.
double spectral_core(const SpectralConfig& c) {
  const int p = c.count();
  const double beta = c.beta;
  const double b2 = 0.5 * beta;
  const double n = c.n_dof;
  const double nu = c.nu;
  const bool singular = is_singular_flavor(c.flavor);
  const bool trace_kind = is_trace_flavor(c.flavor);

  double lg = b2 * p * p * kLogPi + log_pi_tau_general(beta, p) -
              log_mgamma_general(beta, p, b2 * p);
  if (singular) lg += p * std::numbers::ln2;
  if (trace_kind) {
    lg += log_mgamma_general(beta, 1, b2 * (nu + p * n)) -
          log_mgamma_general(beta, 1, b2 * nu) - log_mgamma_general(beta, p, b2 * n);
  } else {
    lg -= log_mbeta_general(beta, p, b2 * nu, b2 * n);
  }

  const double value_power = singular ? beta * (n - p + 1) - 1.0 : b2 * (n - p + 1) - 1.0;
  const double tail_power = trace_kind ? b2 * nu - 1.0 : b2 * (nu - p + 1) - 1.0;
  double tail_sum = 0.0;
  for (double v : c.values) {
    lg += value_power * std::log(v);
    const double mass = singular ? v * v : v;
    if (trace_kind) {
      tail_sum += mass;
    } else {
      lg += tail_power * std::log1p(-mass);
    }
  }
  if (trace_kind) lg += tail_power * std::log1p(-tail_sum);

  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j) {
      const double gap = singular
                             ? c.values[i] * c.values[i] - c.values[j] * c.values[j]
                             : c.values[i] - c.values[j];
      lg += beta * std::log(gap);
    }
  }
  return lg;
}

}  // namespace

double spectral_logpdf(const SpectralConfig& c) {
  spectral_check_malformed(c);
  std::string why;
  switch (spectral_support(c, &why)) {
    case SpectralStatus::tie:
      throw DegenerateInputError("spectral_logpdf: " + why);
    case SpectralStatus::violation:
      throw SupportError("spectral_logpdf: " + why);
    case SpectralStatus::ok:
      break;
  }
  return spectral_core(c);
}

double spectral_logpdf_total(const SpectralConfig& c) {
  spectral_check_malformed(c);
  if (spectral_support(c, nullptr) != SpectralStatus::ok) return kNegInf;
  return spectral_core(c);
}

double change_of_variables_check(const SpectralConfig& c) {
  if (!is_singular_flavor(c.flavor)) {
    throw ParameterError("change_of_variables_check requires a singular-value flavor");
  }
  const double sv = spectral_logpdf(c);
  SpectralConfig eig = c;
  eig.flavor = c.flavor == SpectralFlavor::singular_pearson ? SpectralFlavor::eigen_beta
                                                            : SpectralFlavor::eigen_mm;
  double jacobian = 0.0;
  for (std::size_t i = 0; i < eig.values.size(); ++i) {
    eig.values[i] = c.values[i] * c.values[i];
    jacobian += std::log(2.0 * c.values[i]);
  }
  return sv - spectral_logpdf(eig) - jacobian;
}

}  // namespace divstat
