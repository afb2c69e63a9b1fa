#include "divstat/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "divstat/errors.hpp"

namespace divstat {

namespace {

// 16-point Gauss-Legendre rule on [-1, 1], positive half (symmetric).
constexpr double kNodes[8] = {
    0.09501250983763744, 0.28160355077925891, 0.45801677765722739,
    0.61787624440264375, 0.75540440835500303, 0.86563120238783174,
    0.94457502307323258, 0.98940093499164993};
constexpr double kWeights[8] = {
    0.18945061045506850, 0.18260341504492359, 0.16915651939500254,
    0.14959598881657673, 0.12462897125553387, 0.09515851168249278,
    0.06225352393864789, 0.02715245941175409};

double gl_panel(const std::function<double(double)>& f, double lo, double hi) {
  const double c = 0.5 * (lo + hi);
  const double h = 0.5 * (hi - lo);
  double s = 0.0;
  for (int i = 0; i < 8; ++i) {
    s += kWeights[i] * (f(c - h * kNodes[i]) + f(c + h * kNodes[i]));
  }
  return s * h;
}

// Panel boundaries on [a, b]: each half is split geometrically toward its
// endpoint (levels panels halving in width), and every panel is further split
// into subdiv equal parts.
std::vector<double> graded_edges(double a, double b, int levels, int subdiv) {
  std::vector<double> fractions;  // of the left half [0, 1/2]
  fractions.push_back(0.0);
  for (int k = levels; k >= 1; --k) fractions.push_back(std::ldexp(0.5, -k));
  fractions.push_back(0.5);

  std::vector<double> edges;
  const double w = b - a;
  auto push = [&](double frac) {
    const double x = a + w * frac;
    if (edges.empty() || x > edges.back()) edges.push_back(x);
  };
  for (std::size_t i = 0; i + 1 < fractions.size(); ++i) {
    for (int s = 0; s < subdiv; ++s) {
      push(fractions[i] + (fractions[i + 1] - fractions[i]) * s / subdiv);
    }
  }
  // Mirror for the right half.
  for (std::size_t i = fractions.size(); i-- > 1;) {
    for (int s = subdiv; s >= 1; --s) {
      push(1.0 - (fractions[i - 1] + (fractions[i] - fractions[i - 1]) * (s - 1) / subdiv));
    }
  }
  edges.front() = a;
  edges.back() = b;
  return edges;
}

double sum_panels(const std::function<double(double)>& f, const std::vector<double>& edges) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    total += gl_panel(f, edges[i], edges[i + 1]);
  }
  return total;
}

}  // namespace

double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    const QuadratureOptions& opts) {
  if (!(b > a)) throw ParameterError("integration interval must have b > a");
  int levels = opts.initial_grading_levels;
  int subdiv = 1;
  double prev = sum_panels(f, graded_edges(a, b, levels, subdiv));
  for (int r = 0; r < opts.max_refinements; ++r) {
    levels += 8;
    subdiv *= 2;
    const double cur = sum_panels(f, graded_edges(a, b, levels, subdiv));
    if (std::abs(cur - prev) <= std::max(opts.abs_tol, opts.rel_tol * std::abs(cur))) {
      return cur;
    }
    prev = cur;
  }
  std::ostringstream msg;
  msg.precision(16);
  msg << "quadrature did not converge on [" << a << ", " << b
      << "]; last two estimates " << prev << " and "
      << sum_panels(f, graded_edges(a, b, levels + 8, subdiv * 2));
  throw DiagnosticsError(msg.str());
}

NumericCdf::NumericCdf(const std::function<double(double)>& pdf, double lo, double hi,
                       int cells_per_side, int grading_levels)
    : pdf_(pdf) {
  if (!(hi > lo)) throw ParameterError("NumericCdf requires hi > lo");
  // Graded cells near both endpoints, uniform subdivision elsewhere.
  const int subdiv = std::max(1, cells_per_side / std::max(1, grading_levels));
  edges_ = graded_edges(lo, hi, grading_levels, subdiv);

  cum_.assign(edges_.size(), 0.0);
  for (std::size_t i = 0; i + 1 < edges_.size(); ++i) {
    const double mass = gl_panel(pdf, edges_[i], edges_[i + 1]);
    if (mass < -1e-12) {
      throw DomainError("NumericCdf density integrated negative over a cell");
    }
    cum_[i + 1] = cum_[i] + std::max(0.0, mass);
  }
  mass_ = cum_.back();
  if (!(mass_ > 0.0)) throw DomainError("NumericCdf density has zero total mass");
  for (double& c : cum_) c /= mass_;
}

double NumericCdf::cdf(double x) const {
  if (x <= edges_.front()) return 0.0;
  if (x >= edges_.back()) return 1.0;
  const auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
  const std::size_t k = static_cast<std::size_t>(it - edges_.begin()) - 1;
  // Integrate from the cell edge to x rather than interpolating, so the table
  // resolution does not limit pointwise accuracy.
  const double inside = x > edges_[k] ? gl_panel(pdf_, edges_[k], x) / mass_ : 0.0;
  return std::min(1.0, cum_[k] + std::max(0.0, inside));
}

}  // namespace divstat
