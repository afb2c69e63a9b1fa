#pragma once

#include <functional>
#include <vector>

namespace divstat {

struct QuadratureOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  // Panels shrink geometrically toward both endpoints so that integrable
  // endpoint singularities (x - a)^p, p > -1, converge at full rate.
  int initial_grading_levels = 20;
  int max_refinements = 8;
};

// Definite integral of f over [a, b] by composite 16-point Gauss-Legendre on
// endpoint-graded panels, refined until two successive estimates agree within
// tolerance.  Throws DiagnosticsError (message includes the last two
// estimates) if the refinement budget is exhausted.
double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    const QuadratureOptions& opts = {});

// Cumulative distribution table of an (unnormalized, nonnegative) density on
// [lo, hi], built cell by cell with the same graded Gauss-Legendre rule and
// then normalized.  cdf() interpolates linearly inside cells.
class NumericCdf {
 public:
  NumericCdf(const std::function<double(double)>& pdf, double lo, double hi,
             int cells_per_side = 2000, int grading_levels = 24);

  double cdf(double x) const;
  // Integral of the density before normalization.
  double total_mass() const { return mass_; }

 private:
  std::function<double(double)> pdf_;
  std::vector<double> edges_;  // cell boundaries, ascending
  std::vector<double> cum_;    // cum_[k] = normalized mass of [lo, edges_[k]]
  double mass_ = 0.0;
};

}  // namespace divstat
