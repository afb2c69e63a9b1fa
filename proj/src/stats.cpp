#include "divstat/stats.hpp"

#include <algorithm>
#include <cmath>

#include "divstat/errors.hpp"

namespace divstat {

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw ParameterError("KS statistic of an empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
  }
  return d;
}

double ks_pvalue(double d, double effective_n) {
  if (!(effective_n > 0.0)) throw ParameterError("KS p-value needs a positive sample size");
  const double rn = std::sqrt(effective_n);
  const double lambda = d * (rn + 0.12 + 0.11 / rn);
  if (lambda < 1e-6) return 1.0;
  double p;
  if (lambda < 1.18) {
    // Dual theta series: converges fast exactly where the direct one does not.
    const double t = std::exp(-1.2337005501361697 / (lambda * lambda));  // pi^2/8
    const double cdf = 2.5066282746310002 / lambda * t * (1.0 + std::pow(t, 8) + std::pow(t, 24));
    p = 1.0 - cdf;
  } else {
    p = 0.0;
    for (int k = 1; k <= 100; ++k) {
      const double term =
          2.0 * (k % 2 == 1 ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
      p += term;
      if (std::abs(term) < 1e-12) break;
    }
  }
  return std::clamp(p, 0.0, 1.0);
}

double ks_test(std::vector<double> sample, const std::function<double(double)>& cdf) {
  const double n = static_cast<double>(sample.size());
  return ks_pvalue(ks_statistic(std::move(sample), cdf), n);
}

double ks_statistic_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw ParameterError("KS test of an empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_test_two_sample(std::vector<double> a, std::vector<double> b) {
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double d = ks_statistic_two_sample(std::move(a), std::move(b));
  return ks_pvalue(d, na * nb / (na + nb));
}

double mean(const std::vector<double>& x) {
  if (x.empty()) throw ParameterError("mean of an empty sample");
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double variance(const std::vector<double>& x) {
  if (x.size() < 2) throw ParameterError("variance needs at least two points");
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

double correlation(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw DimensionError("correlation inputs differ in length");
  if (x.size() < 2) throw ParameterError("correlation needs at least two points");
  const double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw DegenerateInputError("correlation of a constant sample");
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace divstat
