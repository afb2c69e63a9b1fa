#include "divstat/special.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "divstat/scalar.hpp"

namespace divstat {

namespace {
constexpr double kLogPi = 1.1447298858494001741;  // log(pi)

void require_order(int m) {
  if (m < 1) throw ParameterError("order m must be positive, got " + std::to_string(m));
}

void require_positive_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw ParameterError("beta must be a positive real, got " + std::to_string(beta));
  }
}
}  // namespace

double log_mgamma(int beta, int m, double a) {
  require_valid_beta(beta);
  return log_mgamma_general(static_cast<double>(beta), m, a);
}

double log_mgamma_general(double beta, int m, double a) {
  require_positive_beta(beta);
  require_order(m);
  double sum = 0.25 * beta * m * (m - 1) * kLogPi;
  for (int i = 1; i <= m; ++i) {
    const double arg = a - 0.5 * beta * (i - 1);
    if (!(arg > 0.0)) {
      throw DomainError("multivariate gamma undefined: factor " + std::to_string(i) +
                        " of " + std::to_string(m) + " has argument " +
                        std::to_string(arg) + " <= 0 (need a > (m-1)*beta/2)");
    }
    sum += std::lgamma(arg);
  }
  return sum;
}

double log_mbeta(int beta, int m, double a, double b) {
  return log_mgamma(beta, m, a) + log_mgamma(beta, m, b) - log_mgamma(beta, m, a + b);
}

double log_mbeta_general(double beta, int m, double a, double b) {
  return log_mgamma_general(beta, m, a) + log_mgamma_general(beta, m, b) -
         log_mgamma_general(beta, m, a + b);
}

double log_stiefel_volume(int beta, int m, int n) {
  require_valid_beta(beta);
  require_order(m);
  if (n < m) {
    throw DimensionError("frame count m must not exceed the ambient dimension n");
  }
  return m * std::numbers::ln2 + 0.5 * beta * m * n * kLogPi -
         log_mgamma(beta, m, 0.5 * beta * n);
}

int tau_table(int beta, int m) {
  require_valid_beta(beta);
  require_order(m);
  return beta == 1 ? 0 : -m * beta / 2;
}

double log_pi_tau(int beta, int m) {
  require_valid_beta(beta);
  return log_pi_tau_general(static_cast<double>(beta), m);
}

double log_pi_tau_general(double beta, int m) {
  require_positive_beta(beta);
  require_order(m);
  return -0.5 * m * beta * kLogPi + m * std::lgamma(0.5 * beta);
}

}  // namespace divstat
