// Acceptance gate: ten numbered end-to-end criteria, each checked at a fixed
// tolerance, sample size, and runtime budget against an oracle that is
// independent of the formulas under test (direct quadrature, Monte Carlo over
// the raw support, or a second construction of the same law).  Prints one
// PASS/FAIL line per criterion and exits nonzero if any fail.
//
// Randomized criteria use fixed, preregistered seeds; the distribution-fit
// criterion (5) additionally allows the single preregistered retry stream.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "divstat/densities.hpp"
#include "divstat/factor.hpp"
#include "divstat/matrix.hpp"
#include "divstat/quadrature.hpp"
#include "divstat/rng.hpp"
#include "divstat/samplers.hpp"
#include "divstat/special.hpp"
#include "divstat/stats.hpp"
#include "divstat/verify.hpp"

namespace {

using namespace divstat;

constexpr double kPi = 3.14159265358979323846;
constexpr std::uint64_t kMasterSeed = 20260815ull;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

Matrix scalar_point(int beta, double re, double im = 0.0) {
  Matrix q(beta, 1, 1);
  q.set_coeff(0, 0, 0, re);
  if (beta > 1) q.set_coeff(0, 0, 1, im);
  return q;
}

HermMatrix scalar_herm(int beta, double v) {
  HermMatrix h(beta, 1);
  h.set_diag(0, v);
  return h;
}

Matrix random_matrix(RngStream& rng, int beta, int rows, int cols, double sd) {
  Matrix a(beta, rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      for (int k = 0; k < beta; ++k) a.set_coeff(i, j, k, sd * rng.normal());
  return a;
}

HermMatrix random_hpd(RngStream& rng, int beta, int dim) {
  HermMatrix h = gram(random_matrix(rng, beta, dim, dim + 2, 0.5));
  for (int i = 0; i < dim; ++i) h.set_diag(i, h.diag(i) + 0.5);
  return h;
}

Matrix random_supported_point(RngStream& rng, const PearsonIIParams& p) {
  Matrix g = random_matrix(rng, p.beta(), p.rows(), p.cols(), 0.3);
  for (int attempt = 0; attempt < 60; ++attempt) {
    const Matrix q = p.mu + g;
    if (std::isfinite(pearson2_logpdf(q, p))) return q;
    g *= 0.5;
  }
  return p.mu;
}

// One-sample KS p-value of `samples` against `cdf`, with the single
// preregistered retry: if the first stream's p <= threshold, the check reruns
// once on the sibling stream and that p decides.
template <typename Sampler>
bool ks_one_sample_with_retry(const RngStream& base, const Sampler& draw_samples,
                              const std::function<double(double)>& cdf,
                              const std::string& label, std::string& detail) {
  constexpr double kThreshold = 0.01;
  bool retried = false;
  RngStream first = base.split(1);
  TestReport r = ks_test_report(label, "", draw_samples(first), cdf, kThreshold);
  if (!r.passed) {
    retried = true;
    RngStream second = base.split(2);
    r = ks_test_report(label, "", draw_samples(second), cdf, kThreshold);
  }
  detail += label + " p=" + fmt(r.value) + (retried ? "(retry)" : "") + " ";
  return r.passed;
}

double two_sample_pvalue(std::vector<double> a, std::vector<double> b) {
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double d = ks_statistic_two_sample(std::move(a), std::move(b));
  return ks_pvalue(d, na * nb / (na + nb));
}

// --------------------------------------------------------------------------
// criterion 1: closed-form matrix gamma vs direct integration

bool criterion1(RngStream, std::string& detail) {
  // Order 1: the defining integral of the gamma function, integrated
  // numerically on (0, 60] (the tail beyond 60 is below 1e-22 relative).
  double worst_quad = 0.0;
  for (int beta : {1, 2}) {
    for (double a : {0.7, 1.0, 2.3}) {
      const double integral = integrate_1d(
          [&](double t) { return t <= 0.0 ? 0.0 : std::exp((a - 1.0) * std::log(t) - t); },
          0.0, 60.0);
      const double closed = std::exp(log_mgamma(beta, 1, a));
      worst_quad = std::max(worst_quad, std::abs(integral - closed) / closed);
    }
  }
  // Order 2 product identities with exactly known values.
  const double v1 = std::exp(log_mgamma(1, 2, 1.5));  // pi/2
  const double v2 = std::exp(log_mgamma(2, 2, 2.0));  // pi
  const double worst_prod =
      std::max(std::abs(v1 - kPi / 2.0) / (kPi / 2.0), std::abs(v2 - kPi) / kPi);
  detail = "max rel err: quadrature=" + fmt(worst_quad) + " products=" + fmt(worst_prod);
  return worst_quad < 1e-8 && worst_prod < 1e-12;
}

// --------------------------------------------------------------------------
// criterion 2: determinant-kernel scalar normalization by quadrature

bool criterion2(RngStream, std::string& detail) {
  double worst = 0.0;
  for (double nu : {2.0, 3.0, 5.0}) {
    const auto p = PearsonIIParams::standard(1, 1, 1, nu);
    const auto est = quadrature_normalize_interval(
        [&](double x) { return pearson2_logpdf(scalar_point(1, x), p); }, -1.0, 1.0);
    worst = std::max(worst, std::abs(est.estimate - 1.0));
  }
  for (double nu : {2.0, 4.0}) {
    const auto p = PearsonIIParams::standard(2, 1, 1, nu);
    const auto est = quadrature_normalize_polar(
        [&](double x, double y) { return pearson2_logpdf(scalar_point(2, x, y), p); },
        1.0);
    worst = std::max(worst, std::abs(est.estimate - 1.0));
  }
  detail = "max |integral - 1| = " + fmt(worst) + " over 5 parameter sets";
  return worst < 1e-8;
}

// --------------------------------------------------------------------------
// criterion 3: beta type I (both orientations) and trace-kernel Pearson
// normalizations at matrix order 1

bool criterion3(RngStream, std::string& detail) {
  double worst_wide = 0.0, worst_tall = 0.0, worst_trace = 0.0;

  const struct { int beta; double n_dof, nu; } wide_sets[] = {
      {1, 2.0, 2.0}, {2, 3.0, 3.0}, {4, 5.0, 5.0}};
  for (const auto& s : wide_sets) {
    const BetaIParams p{s.n_dof, s.nu, 1, s.beta, BetaOrientation::wide};
    const auto est = quadrature_normalize_interval(
        [&](double x) { return beta1_logpdf(scalar_herm(s.beta, x), p); }, 0.0, 1.0);
    worst_wide = std::max(worst_wide, std::abs(est.estimate - 1.0));
  }

  const struct { int beta, m_rows; double nu; } tall_sets[] = {
      {1, 3, 4.0}, {2, 2, 3.0}, {4, 4, 3.5}};
  for (const auto& s : tall_sets) {
    const BetaIParams p{1.0, s.nu, s.m_rows, s.beta, BetaOrientation::tall};
    const auto est = quadrature_normalize_interval(
        [&](double x) { return beta1_logpdf(scalar_herm(s.beta, x), p); }, 0.0, 1.0);
    worst_tall = std::max(worst_tall, std::abs(est.estimate - 1.0));
  }

  // Trace-kernel scalar laws on the interval, the disk, and the quaternion
  // unit ball (radial reduction).
  {
    const auto p = PearsonIIParams::standard(1, 1, 1, 3.0, PearsonKind::matrix_multivariate);
    const auto est = quadrature_normalize_interval(
        [&](double x) { return mmpearson2_logpdf(scalar_point(1, x), p); }, -1.0, 1.0);
    worst_trace = std::max(worst_trace, std::abs(est.estimate - 1.0));
  }
  {
    const auto p = PearsonIIParams::standard(2, 1, 1, 2.0, PearsonKind::matrix_multivariate);
    const auto est = quadrature_normalize_polar(
        [&](double x, double y) { return mmpearson2_logpdf(scalar_point(2, x, y), p); },
        1.0);
    worst_trace = std::max(worst_trace, std::abs(est.estimate - 1.0));
  }
  {
    const auto p = PearsonIIParams::standard(4, 1, 1, 2.0, PearsonKind::matrix_multivariate);
    const auto est = quadrature_normalize_radial(
        [&](double r) { return mmpearson2_logpdf(scalar_point(4, r), p); }, 1.0, 4);
    worst_trace = std::max(worst_trace, std::abs(est.estimate - 1.0));
  }

  detail = "max |integral - 1|: wide=" + fmt(worst_wide) + " tall=" + fmt(worst_tall) +
           " trace=" + fmt(worst_trace);
  return worst_wide < 1e-8 && worst_tall < 1e-8 && worst_trace < 1e-8;
}

// --------------------------------------------------------------------------
// criterion 4: singular-value density normalization by Monte Carlo, plus the
// negative control that rejects the alternate pi-exponent convention

NormalizationEstimate spectral_mc(RngStream& rng, double beta, int p_count, double n_dof,
                                  double nu, long n_points) {
  SpectralConfig c;
  c.n_dof = n_dof;
  c.nu = nu;
  c.beta = beta;
  c.flavor = SpectralFlavor::singular_pearson;
  McRegion region;
  region.lo.assign(static_cast<std::size_t>(p_count), 0.0);
  region.hi.assign(static_cast<std::size_t>(p_count), 1.0);
  region.ordered_decreasing = true;
  return mc_normalize(
      rng,
      [&](const std::vector<double>& v) {
        SpectralConfig cc = c;
        cc.values = v;
        return spectral_logpdf_total(cc);
      },
      region, n_points);
}

bool criterion4(RngStream rng, std::string& detail) {
  constexpr long kN = 1000000;
  RngStream r1 = rng.split(1), r2 = rng.split(2), r3 = rng.split(3);

  const auto a = spectral_mc(r1, 1.0, 2, 3.0, 4.0, kN);
  const auto b = spectral_mc(r2, 2.0, 2, 4.0, 6.0, kN);
  const bool a_ok = a.std_error < 0.01 && std::abs(a.estimate - 1.0) < 3.0 * a.std_error;
  const bool b_ok = b.std_error < 0.01 && std::abs(b.estimate - 1.0) < 3.0 * b.std_error;

  // Negative control: under the alternate constant (pi exponent beta*p^2
  // instead of beta*p^2/2, here beta=1, p=2) the same integral estimates
  // pi^2, far from 1.
  const auto c = spectral_mc(r3, 1.0, 2, 3.0, 4.0, kN);
  const double factor = std::pow(kPi, 2.0);
  const double wrong = c.estimate * factor;
  const double wrong_se = c.std_error * factor;
  const bool control_detected = std::abs(wrong - 1.0) > 10.0 * wrong_se;
  const bool control_predicted = std::abs(wrong - factor) < 3.0 * wrong_se;

  detail = "est=" + fmt(a.estimate) + "+-" + fmt(a.std_error) + " (b1), est=" +
           fmt(b.estimate) + "+-" + fmt(b.std_error) + " (b2); control=" + fmt(wrong) +
           " vs predicted " + fmt(factor);
  return a_ok && b_ok && control_detected && control_predicted;
}

// --------------------------------------------------------------------------
// criterion 5: samplers reproduce their densities (KS, one retry each)

bool criterion5(RngStream rng, std::string& detail) {
  constexpr long kN = 100000;
  bool ok = true;

  // (a) scalar determinant-kernel draw at nu=2 is uniform on (-1, 1).
  {
    const auto p = PearsonIIParams::standard(1, 1, 1, 2.0);
    ok &= ks_one_sample_with_retry(
        rng.split(10),
        [&](RngStream& r) {
          std::vector<double> xs;
          xs.reserve(kN);
          for (long i = 0; i < kN; ++i)
            xs.push_back(sample_pearson2(r, p).coeff(0, 0, 0));
          return xs;
        },
        [](double x) { return 0.5 * (x + 1.0); }, "uniform", detail);
  }

  // (b) scalar beta type I versus its own density integrated numerically.
  const struct { int beta; double n_dof, nu; } beta1_sets[] = {
      {1, 3.0, 4.0}, {2, 2.0, 3.0}, {4, 3.0, 2.0}};
  for (const auto& s : beta1_sets) {
    const BetaIParams p{s.n_dof, s.nu, 1, s.beta, BetaOrientation::wide};
    const auto cdf = std::make_shared<NumericCdf>(
        [p, s](double x) {
          const double lp = beta1_logpdf(scalar_herm(s.beta, x), p);
          return std::isfinite(lp) ? std::exp(lp) : 0.0;
        },
        0.0, 1.0);
    ok &= ks_one_sample_with_retry(
        rng.split(20 + static_cast<std::uint64_t>(s.beta)),
        [&](RngStream& r) {
          std::vector<double> xs;
          xs.reserve(kN);
          for (long i = 0; i < kN; ++i) xs.push_back(sample_beta1(r, p).diag(0));
          return xs;
        },
        [cdf](double x) { return cdf->cdf(x); },
        "beta1(b" + std::to_string(s.beta) + ")", detail);
  }

  // (c) complex disk trace-kernel draw: squared radius is Beta(1, nu).
  {
    const int beta = 2;
    const double nu = 1.0;
    const auto p =
        PearsonIIParams::standard(beta, 1, 1, nu, PearsonKind::matrix_multivariate);
    const double sa = 0.5 * beta, sb = 0.5 * beta * nu;
    const double logB = std::lgamma(sa) + std::lgamma(sb) - std::lgamma(sa + sb);
    const auto cdf = std::make_shared<NumericCdf>(
        [=](double t) {
          if (t <= 0.0 || t >= 1.0) return 0.0;
          return std::exp((sa - 1.0) * std::log(t) + (sb - 1.0) * std::log1p(-t) - logB);
        },
        0.0, 1.0);
    ok &= ks_one_sample_with_retry(
        rng.split(30),
        [&](RngStream& r) {
          std::vector<double> xs;
          xs.reserve(kN);
          for (long i = 0; i < kN; ++i)
            xs.push_back(sample_mmpearson2(r, p).at(0, 0).norm_sq());
          return xs;
        },
        [cdf](double t) { return cdf->cdf(t); }, "disk-radius", detail);
  }

  // (d) spectral chain vs singular values of direct draws (two-sample KS on
  // each of the two singular values; one preregistered retry each).
  for (int which : {0, 1}) {
    const RngStream base = rng.split(40 + static_cast<std::uint64_t>(which));
    bool retried = false;
    double p_val = 0.0;
    for (int attempt = 1; attempt <= 2; ++attempt) {
      RngStream r = base.split(static_cast<std::uint64_t>(attempt));
      RngStream mcmc_rng = r.split(1), direct_rng = r.split(2);
      SpectralConfig c;
      c.values = {0.6, 0.3};
      c.n_dof = 3.0;
      c.nu = 4.0;
      c.beta = 1.0;
      c.flavor = SpectralFlavor::singular_pearson;
      SpectralSampleOptions opts;
      opts.thin = 60;  // KS assumes iid; keep chain autocorrelation negligible
      const auto chain = sample_spectral(mcmc_rng, c, static_cast<int>(kN), opts);
      std::vector<double> a;
      a.reserve(chain.draws.size());
      for (const auto& d : chain.draws) a.push_back(d[static_cast<std::size_t>(which)]);
      std::vector<double> b;
      b.reserve(kN);
      for (long i = 0; i < kN; ++i) {
        const auto draw = sample_pearson2_internal(direct_rng, 1, 2, 3, 4.0,
                                                   PearsonConstruction::left_quotient());
        b.push_back(svd(draw.r0).singulars[static_cast<std::size_t>(which)]);
      }
      p_val = two_sample_pvalue(std::move(a), std::move(b));
      if (p_val > 0.01) break;
      retried = true;
    }
    detail += "sv" + std::to_string(which + 1) + " p=" + fmt(p_val) +
              (retried ? "(retry)" : "") + " ";
    ok &= p_val > 0.01;
  }

  return ok;
}

// --------------------------------------------------------------------------
// criterion 6: quotient-construction side contracts

bool criterion6(RngStream rng, std::string& detail) {
  constexpr long kN = 100000;
  RngStream r1 = rng.split(1), r2 = rng.split(2), r3 = rng.split(3);

  // Numerator/denominator independence: correlation of the traces.
  std::vector<double> tu, tr;
  tu.reserve(kN);
  tr.reserve(kN);
  for (long i = 0; i < kN; ++i) {
    const auto draw =
        sample_pearson2_internal(r1, 2, 2, 3, 3.0, PearsonConstruction::left_quotient());
    tu.push_back(draw.denominator.trace());
    tr.push_back(gram(draw.r0).trace());
  }
  const double corr_val = correlation(tu, tr);

  // Denominator marginal: log determinant against fresh draws of the matrix
  // chi-square law with nu + n degrees of freedom.
  const int beta = 1, m = 2, n = 3;
  const double nu = 4.0;
  std::vector<double> a, b;
  a.reserve(kN);
  b.reserve(kN);
  for (long i = 0; i < kN; ++i) {
    const auto draw =
        sample_pearson2_internal(r2, beta, m, n, nu, PearsonConstruction::left_quotient());
    a.push_back(logdet_hpd(draw.denominator));
  }
  WishartParams w;
  w.nu = nu + n;
  w.sigma = HermMatrix::identity(beta, m);
  for (long i = 0; i < kN; ++i) b.push_back(logdet_hpd(sample_wishart(r3, w)));
  const double p_val = two_sample_pvalue(std::move(a), std::move(b));

  detail = "|corr|=" + fmt(std::abs(corr_val)) + " (limit 0.02), logdet-marginal p=" +
           fmt(p_val);
  return std::abs(corr_val) < 0.02 && p_val > 0.01;
}

// --------------------------------------------------------------------------
// criterion 7: transpose duality and affine standardization identities

bool criterion7(RngStream rng, std::string& detail) {
  constexpr int kInstances = 100;  // per algebra, per identity
  double worst_dual = 0.0, worst_affine = 0.0;

  for (int beta : {1, 2, 4}) {
    for (int rep = 0; rep < kInstances; ++rep) {
      PearsonIIParams p;
      p.nu = 2.0 + beta + 2.0 * rng.uniform01();
      p.mu = random_matrix(rng, beta, 2, 3, 0.3);
      p.scale_left = random_hpd(rng, beta, 2);
      p.scale_right = random_hpd(rng, beta, 3);
      const Matrix q = random_supported_point(rng, p);

      PearsonIIParams t;
      t.nu = p.nu;
      t.mu = adjoint(p.mu);
      t.scale_left = inverse_hpd(p.scale_right);
      t.scale_right = inverse_hpd(p.scale_left);
      const double lhs = pearson2_logpdf(q, p);
      const double rhs = pearson2_logpdf(adjoint(q), t);
      worst_dual =
          std::max(worst_dual, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
    }
  }

  for (int beta : {1, 2, 4}) {
    for (int rep = 0; rep < kInstances; ++rep) {
      const int m = 2, n = 3;
      const double nu = 2.0 + beta + 2.0 * rng.uniform01();
      PearsonIIParams p;
      p.nu = nu;
      p.mu = random_matrix(rng, beta, m, n, 0.4);
      p.scale_left = random_hpd(rng, beta, m);
      p.scale_right = random_hpd(rng, beta, n);
      const auto std_p = PearsonIIParams::standard(beta, m, n, nu);
      const Matrix ml = cholesky(p.scale_left);
      const Matrix nl = cholesky(p.scale_right);
      const Matrix q = random_supported_point(rng, p);
      const Matrix r = solve_upper_right(adjoint(nl), matmul(adjoint(ml), q - p.mu));
      const double lhs = pearson2_logpdf(q, p);
      const double rhs = pearson2_logpdf(r, std_p) +
                         0.5 * beta * n * logdet_hpd(p.scale_left) -
                         0.5 * beta * m * logdet_hpd(p.scale_right);
      worst_affine =
          std::max(worst_affine, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
    }
  }

  detail = "max rel residual: duality=" + fmt(worst_dual) + " affine=" + fmt(worst_affine) +
           " (100 instances each per algebra)";
  return worst_dual < 1e-10 && worst_affine < 1e-10;
}

// --------------------------------------------------------------------------
// criterion 8: singular-value <-> eigenvalue change of variables

bool criterion8(RngStream rng, std::string& detail) {
  double worst = 0.0;
  long instances = 0;
  for (double beta : {1.0, 2.0, 4.0, 8.0}) {
    for (SpectralFlavor f :
         {SpectralFlavor::singular_pearson, SpectralFlavor::singular_mm}) {
      for (int rep = 0; rep < 25; ++rep) {
        const int p_count = 2 + static_cast<int>(rng.uniform01() * 2.0);
        std::vector<double> vals;
        for (int i = 0; i < p_count; ++i) vals.push_back(0.05 + 0.9 * rng.uniform01());
        std::sort(vals.begin(), vals.end(), std::greater<>());
        double total = 0.0;
        for (double v : vals) total += v * v;
        if (total >= 0.98) {
          const double shrink = std::sqrt(0.9 / total);
          for (double& v : vals) v *= shrink;
        }
        SpectralConfig c;
        c.values = vals;
        c.beta = beta;
        c.n_dof = p_count + 1.5 + 2.0 * rng.uniform01();
        c.nu = 1.0 + beta * (p_count - 1) + 2.0 * rng.uniform01();
        c.flavor = f;
        worst = std::max(worst, std::abs(change_of_variables_check(c)));
        ++instances;
      }
    }
  }
  detail = "max |residual| = " + fmt(worst) + " over " + std::to_string(instances) +
           " instances";
  return worst < 1e-10;
}

// --------------------------------------------------------------------------
// criterion 9: elliptical-input invariance of the quotient construction

bool criterion9(RngStream rng, std::string& detail) {
  constexpr long kN = 100000;
  const int beta = 1, m = 2, n = 3;
  const double nu = 4.0;
  RngStream r1 = rng.split(1), r2 = rng.split(2);

  auto collect = [&](RngStream& r, const EllipticalGenerator& g, std::vector<double>& trs,
                     std::vector<double>& tops) {
    trs.reserve(kN);
    tops.reserve(kN);
    for (long i = 0; i < kN; ++i) {
      const auto draw = sample_pearson2_internal(r, beta, m, n, nu,
                                                 PearsonConstruction::elliptical(g));
      const HermMatrix gm = gram(draw.r0);
      trs.push_back(gm.trace());
      tops.push_back(herm_eigenvalues(gm).front());
    }
  };

  std::vector<double> tr_normal, top_normal, tr_t, top_t;
  collect(r1, EllipticalGenerator::normal(), tr_normal, top_normal);
  collect(r2, EllipticalGenerator::matrix_t(5.0), tr_t, top_t);

  const double p_trace = two_sample_pvalue(std::move(tr_normal), std::move(tr_t));
  const double p_top = two_sample_pvalue(std::move(top_normal), std::move(top_t));
  detail = "normal vs matrix-t(5): trace p=" + fmt(p_trace) + ", top-eigenvalue p=" +
           fmt(p_top);
  return p_trace > 0.01 && p_top > 0.01;
}

// --------------------------------------------------------------------------
// criterion 10: Bartlett and Gram matrix chi-square constructions agree

bool criterion10(RngStream rng, std::string& detail) {
  constexpr long kN = 20000;
  WishartParams w;
  w.nu = 7.0;
  w.sigma = HermMatrix::identity(2, 2);
  RngStream r1 = rng.split(1), r2 = rng.split(2);
  std::vector<double> a, b;
  a.reserve(kN);
  b.reserve(kN);
  for (long i = 0; i < kN; ++i) {
    a.push_back(logdet_hpd(sample_wishart(r1, w, WishartConstruction::gram)));
    b.push_back(logdet_hpd(sample_wishart(r2, w, WishartConstruction::bartlett)));
  }
  const double p_val = two_sample_pvalue(std::move(a), std::move(b));
  detail = "logdet two-sample p=" + fmt(p_val) + " (beta=2, m=2, nu=7)";
  return p_val > 0.01;
}

struct Criterion {
  int index;
  const char* description;
  double budget_seconds;
  std::function<bool(RngStream, std::string&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "matrix gamma function vs direct integration", 1.0, criterion1},
      {2, "scalar determinant-kernel normalization (interval and disk)", 5.0, criterion2},
      {3, "beta type I and trace-kernel normalizations at order 1", 5.0, criterion3},
      {4, "singular-value constant by Monte Carlo, with negative control", 30.0,
       criterion4},
      {5, "samplers match densities (KS, one preregistered retry)", 60.0, criterion5},
      {6, "quotient construction: independence and denominator marginal", 20.0,
       criterion6},
      {7, "transpose duality and affine standardization", 5.0, criterion7},
      {8, "singular-value / eigenvalue change of variables", 2.0, criterion8},
      {9, "elliptical-input invariance of the quotient law", 30.0, criterion9},
      {10, "Bartlett vs Gram matrix chi-square constructions", 10.0, criterion10},
  };

  const RngStream root(kMasterSeed);
  int passed = 0;
  for (const auto& c : criteria) {
    std::string detail;
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = c.run(root.split(static_cast<std::uint64_t>(c.index)), detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double elapsed = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - t0)
                               .count();
    const bool in_budget = elapsed <= c.budget_seconds;
    ok = ok && in_budget;
    if (ok) ++passed;
    std::printf("%s criterion-%d: %s | %s | %.2fs (budget %.0fs)\n",
                ok ? "PASS" : "FAIL", c.index, c.description, detail.c_str(), elapsed,
                c.budget_seconds);
    std::fflush(stdout);
  }
  std::printf("ACCEPTANCE: %d/10 criteria passed\n", passed);
  return passed == 10 ? 0 : 1;
}
