#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "divstat/rng.hpp"

#include "json.hpp"

namespace divstat {

// Outcome of one statistical or numerical check.  `kind` selects how `value`
// is read: "p_value" tests pass when value > threshold, "abs_error" tests
// when value < threshold.
struct TestReport {
  std::string name;
  std::string parameters;
  std::string kind = "p_value";
  double statistic = 0.0;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
  long n = 0;  // sample count or quadrature node count
  std::string n_label = "n_samples";  // or "quadrature_nodes"
  double runtime_seconds = 0.0;
  std::uint64_t seed = 0;
  bool retried = false;
};

enum class NormalizationMethod { quadrature, importance_mc, uniform_mc };

// Estimate of the total mass of a density (1.0 when the closed-form constant
// is right).  Quadrature reports std_error = 0 and n = node count.
struct NormalizationEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  NormalizationMethod method = NormalizationMethod::quadrature;
  long n = 0;
};

// One-sample Kolmogorov-Smirnov check wrapped in a report.  Requires at least
// 50 samples (the p-value is asymptotic).
TestReport ks_test_report(const std::string& name, const std::string& parameters,
                          std::vector<double> samples,
                          const std::function<double(double)>& cdf,
                          double threshold = 0.01);

// integral of exp(logpdf) over [lo, hi] by adaptive graded Gauss-Legendre.
NormalizationEstimate quadrature_normalize_interval(
    const std::function<double(double)>& logpdf, double lo, double hi);

// integral of exp(logpdf(x, y)) over the centered disk of the given radius,
// in polar coordinates (adaptive in r, periodic rule in the angle).
NormalizationEstimate quadrature_normalize_polar(
    const std::function<double(double, double)>& logpdf, double radius);

// integral of a rotationally symmetric density over the centered ball in
// R^ambient_dim, reduced to the radial integral against the sphere area
// 2 pi^(d/2) / Gamma(d/2) * r^(d-1).  The caller is responsible for the
// symmetry (checkable by evaluating the density at same-radius points).
NormalizationEstimate quadrature_normalize_radial(
    const std::function<double(double)>& logpdf_of_radius, double radius,
    int ambient_dim);

// Uniform-sampling region for Monte Carlo normalization: an axis-aligned box,
// optionally restricted to the strictly-decreasing chamber x1 > x2 > ... (its
// volume is the box volume divided by d!, realized by sorting box points).
struct McRegion {
  std::vector<double> lo, hi;
  bool ordered_decreasing = false;
};

// volume * mean of exp(logpdf) over uniform points of the region, with its
// Monte Carlo standard error.  Points where logpdf is -infinity contribute
// zero; if every point lands outside the support the run is useless and a
// DiagnosticsError is thrown.
NormalizationEstimate mc_normalize(
    RngStream& rng, const std::function<double(const std::vector<double>&)>& logpdf,
    const McRegion& region, long n_points);

// Suite runner -------------------------------------------------------------

struct SuiteConfig {
  std::string suite = "default";
  std::uint64_t seed = 20250815;
  int jobs = 1;
  // Absent selects the full default manifest.  A present (possibly empty)
  // list runs exactly the named tests: an empty list yields an empty, passing
  // report, and unknown names raise ConfigError before anything runs.
  std::optional<std::vector<std::string>> tests;
};

struct SuiteResult {
  std::string suite;
  std::vector<TestReport> reports;
  bool passed = false;
};

// Names of the default manifest, in execution order: normalization oracles
// and sampler/distribution tests spanning beta in {1,2,4} (plus general-beta
// spectral checks).
std::vector<std::string> default_suite_tests();

// Runs the selected tests on independent substreams (derived from the seed
// and the test name, so reports do not depend on execution order or job
// count).  p-value tests that fail get exactly one retry on a preregistered
// alternate substream; the retried report is marked.
SuiteResult run_suite(const SuiteConfig& config);

nlohmann::json report_to_json(const TestReport& report);
nlohmann::json suite_to_json(const SuiteResult& result);

}  // namespace divstat
