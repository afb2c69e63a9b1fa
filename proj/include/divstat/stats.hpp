#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace divstat {

// Kolmogorov-Smirnov distance between the empirical distribution of a sample
// and a reference CDF.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);

// Asymptotic two-sided KS p-value for statistic d at effective sample size n,
// with the small-sample correction factor sqrt(n) + 0.12 + 0.11/sqrt(n).
double ks_pvalue(double d, double effective_n);

// One-sample test p-value.
double ks_test(std::vector<double> sample, const std::function<double(double)>& cdf);

// Two-sample KS distance between empirical distributions.
double ks_statistic_two_sample(std::vector<double> a, std::vector<double> b);

// Two-sample test p-value (effective size n1*n2/(n1+n2)).
double ks_test_two_sample(std::vector<double> a, std::vector<double> b);

// Pearson correlation coefficient.
double correlation(const std::vector<double>& x, const std::vector<double>& y);

double mean(const std::vector<double>& x);
double variance(const std::vector<double>& x);  // unbiased

}  // namespace divstat
