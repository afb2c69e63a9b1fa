#include "divstat/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <initializer_list>
#include <limits>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "divstat/densities.hpp"
#include "divstat/errors.hpp"
#include "divstat/factor.hpp"
#include "divstat/matrix.hpp"
#include "divstat/quadrature.hpp"
#include "divstat/samplers.hpp"
#include "divstat/special.hpp"
#include "divstat/stats.hpp"

namespace divstat {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

using Clock = std::chrono::steady_clock;

double seconds_since(const Clock::time_point& t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// XORed into a test's substream index to derive its preregistered retry seed.
constexpr std::uint64_t kRetryTag = 0x9e3779b97f4a7c15ull;

// ---------------------------------------------------------------------------
// small construction helpers (shared with the unit tests by convention)

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

Matrix random_matrix(RngStream& rng, int beta, int rows, int cols, double sd = 1.0) {
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

std::string fmt_params(std::initializer_list<std::pair<const char*, double>> kv,
                       const std::string& extra = "") {
  std::ostringstream os;
  os.precision(10);
  bool first = true;
  for (const auto& [k, v] : kv) {
    if (!first) os << " ";
    os << k << "=" << v;
    first = false;
  }
  if (!extra.empty()) os << (first ? "" : " ") << extra;
  return os.str();
}

TestReport abs_report(const std::string& parameters, double statistic, double abs_err,
                      double threshold, long n, const char* n_label) {
  TestReport r;
  r.parameters = parameters;
  r.kind = "abs_error";
  r.statistic = statistic;
  r.value = abs_err;
  r.threshold = threshold;
  r.passed = abs_err < threshold;
  r.n = n;
  r.n_label = n_label;
  return r;
}

TestReport normalization_report(const std::string& parameters,
                                const NormalizationEstimate& e, double threshold) {
  return abs_report(parameters, e.estimate, std::abs(e.estimate - 1.0), threshold, e.n,
                    e.method == NormalizationMethod::quadrature ? "quadrature_nodes"
                                                                : "n_samples");
}

TestReport two_sample_report(const std::string& parameters, std::vector<double> a,
                             std::vector<double> b, double threshold = 0.01) {
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  TestReport r;
  r.parameters = parameters;
  r.kind = "p_value";
  r.statistic = ks_statistic_two_sample(std::move(a), std::move(b));
  r.value = ks_pvalue(r.statistic, na * nb / (na + nb));
  r.threshold = threshold;
  r.passed = r.value > threshold;
  r.n = static_cast<long>(na + nb);
  return r;
}

// ---------------------------------------------------------------------------
// suite test bodies

using TestFn = std::function<TestReport(RngStream&)>;

struct RegisteredTest {
  std::string name;
  TestFn fn;
};

TestFn pearson2_interval_norm(int beta, double nu) {
  return [=](RngStream&) {
    const auto p = PearsonIIParams::standard(beta, 1, 1, nu);
    const auto est = quadrature_normalize_interval(
        [&](double x) { return pearson2_logpdf(scalar_point(beta, x), p); }, -1.0, 1.0);
    return normalization_report(
        fmt_params({{"beta", double(beta)}, {"m", 1}, {"n", 1}, {"nu", nu}},
                   "domain=interval(-1,1)"),
        est, 1e-8);
  };
}

TestFn pearson2_polar_norm(int beta, double nu) {
  return [=](RngStream&) {
    const auto p = PearsonIIParams::standard(beta, 1, 1, nu);
    const auto est = quadrature_normalize_polar(
        [&](double x, double y) { return pearson2_logpdf(scalar_point(beta, x, y), p); },
        1.0);
    return normalization_report(
        fmt_params({{"beta", double(beta)}, {"m", 1}, {"n", 1}, {"nu", nu}},
                   "domain=disk(1)"),
        est, 1e-8);
  };
}

TestFn pearson2_radial_norm(int beta, double nu) {
  return [=](RngStream&) {
    const auto p = PearsonIIParams::standard(beta, 1, 1, nu);
    const auto est = quadrature_normalize_radial(
        [&](double r) { return pearson2_logpdf(scalar_point(beta, r), p); }, 1.0, beta);
    return normalization_report(
        fmt_params({{"beta", double(beta)}, {"m", 1}, {"n", 1}, {"nu", nu}},
                   "domain=ball(1)"),
        est, 1e-8);
  };
}

TestFn mm_interval_norm(int beta, double nu) {
  return [=](RngStream&) {
    const auto p =
        PearsonIIParams::standard(beta, 1, 1, nu, PearsonKind::matrix_multivariate);
    const auto est = quadrature_normalize_interval(
        [&](double x) { return mmpearson2_logpdf(scalar_point(beta, x), p); }, -1.0, 1.0);
    return normalization_report(
        fmt_params({{"beta", double(beta)}, {"m", 1}, {"n", 1}, {"nu", nu}},
                   "kind=trace domain=interval(-1,1)"),
        est, 1e-8);
  };
}

TestFn mm_polar_norm(int beta, double nu) {
  return [=](RngStream&) {
    const auto p =
        PearsonIIParams::standard(beta, 1, 1, nu, PearsonKind::matrix_multivariate);
    const auto est = quadrature_normalize_polar(
        [&](double x, double y) {
          return mmpearson2_logpdf(scalar_point(beta, x, y), p);
        },
        1.0);
    return normalization_report(
        fmt_params({{"beta", double(beta)}, {"m", 1}, {"n", 1}, {"nu", nu}},
                   "kind=trace domain=disk(1)"),
        est, 1e-8);
  };
}

TestFn mm_radial_norm(int beta, double nu) {
  return [=](RngStream&) {
    const auto p =
        PearsonIIParams::standard(beta, 1, 1, nu, PearsonKind::matrix_multivariate);
    const auto est = quadrature_normalize_radial(
        [&](double r) { return mmpearson2_logpdf(scalar_point(beta, r), p); }, 1.0, beta);
    return normalization_report(
        fmt_params({{"beta", double(beta)}, {"m", 1}, {"n", 1}, {"nu", nu}},
                   "kind=trace domain=ball(1)"),
        est, 1e-8);
  };
}

TestFn beta1_scalar_norm(int beta, double n_dof, double nu) {
  return [=](RngStream&) {
    const BetaIParams p{n_dof, nu, 1, beta, BetaOrientation::wide};
    const auto est = quadrature_normalize_interval(
        [&](double x) { return beta1_logpdf(scalar_herm(beta, x), p); }, 0.0, 1.0);
    return normalization_report(
        fmt_params({{"beta", double(beta)}, {"m", 1}, {"n", n_dof}, {"nu", nu}},
                   "domain=interval(0,1)"),
        est, 1e-8);
  };
}

TestFn beta1_tall_scalar_norm(int beta, double m_rows, double nu) {
  return [=](RngStream&) {
    // Tall set with matrix order 1: the density lives on (0, 1).
    const BetaIParams p{1.0, nu, static_cast<int>(m_rows), beta,
                        BetaOrientation::tall};
    const auto est = quadrature_normalize_interval(
        [&](double x) { return beta1_logpdf(scalar_herm(beta, x), p); }, 0.0, 1.0);
    return normalization_report(
        fmt_params({{"beta", double(beta)}, {"m", m_rows}, {"n", 1}, {"nu", nu}},
                   "orientation=tall domain=interval(0,1)"),
        est, 1e-8);
  };
}

TestFn mmbeta1_scalar_norm(int beta, double n_dof, double nu) {
  return [=](RngStream&) {
    const BetaIParams p{n_dof, nu, 1, beta, BetaOrientation::wide};
    const auto est = quadrature_normalize_interval(
        [&](double x) { return mmbeta1_logpdf(scalar_herm(beta, x), p); }, 0.0, 1.0);
    return normalization_report(
        fmt_params({{"beta", double(beta)}, {"m", 1}, {"n", n_dof}, {"nu", nu}},
                   "kind=trace domain=interval(0,1)"),
        est, 1e-8);
  };
}

TestFn spectral_scalar_norm(double beta, double n_dof, double nu, SpectralFlavor f,
                            const char* label) {
  return [=](RngStream&) {
    SpectralConfig c;
    c.n_dof = n_dof;
    c.nu = nu;
    c.beta = beta;
    c.flavor = f;
    const auto est = quadrature_normalize_interval(
        [&](double x) {
          SpectralConfig cc = c;
          cc.values = {x};
          return spectral_logpdf_total(cc);
        },
        0.0, 1.0);
    return normalization_report(
        fmt_params({{"beta", beta}, {"p", 1}, {"n", n_dof}, {"nu", nu}},
                   std::string("flavor=") + label),
        est, 1e-8);
  };
}

TestFn spectral_mc_norm(double beta, int p_count, double n_dof, double nu,
                        SpectralFlavor f, const char* label, long n_points) {
  return [=](RngStream& rng) {
    SpectralConfig c;
    c.n_dof = n_dof;
    c.nu = nu;
    c.beta = beta;
    c.flavor = f;
    McRegion region;
    region.lo.assign(static_cast<std::size_t>(p_count), 0.0);
    region.hi.assign(static_cast<std::size_t>(p_count), 1.0);
    region.ordered_decreasing = true;
    const auto est = mc_normalize(
        rng,
        [&](const std::vector<double>& v) {
          SpectralConfig cc = c;
          cc.values = v;
          return spectral_logpdf_total(cc);
        },
        region, n_points);
    TestReport r = normalization_report(
        fmt_params({{"beta", beta}, {"p", double(p_count)}, {"n", n_dof}, {"nu", nu}},
                   std::string("flavor=") + label + " method=uniform_mc"),
        est, 3.0 * est.std_error);
    r.statistic = est.estimate;
    return r;
  };
}

// Shows that the oracle rejects a wrong normalizing constant: multiplying the
// correct estimate by pi^{beta p^2 / 2} (the factor separating the two
// candidate pi-exponent conventions at p = 2) must land far from 1.
TestFn spectral_negative_control(double beta, int p_count, double n_dof, double nu,
                                 long n_points) {
  return [=](RngStream& rng) {
    SpectralConfig c;
    c.n_dof = n_dof;
    c.nu = nu;
    c.beta = beta;
    c.flavor = SpectralFlavor::singular_pearson;
    McRegion region;
    region.lo.assign(static_cast<std::size_t>(p_count), 0.0);
    region.hi.assign(static_cast<std::size_t>(p_count), 1.0);
    region.ordered_decreasing = true;
    const auto est = mc_normalize(
        rng,
        [&](const std::vector<double>& v) {
          SpectralConfig cc = c;
          cc.values = v;
          return spectral_logpdf_total(cc);
        },
        region, n_points);
    const double factor = std::pow(kPi, 0.5 * beta * p_count * p_count);
    const double wrong = est.estimate * factor;
    const double wrong_se = est.std_error * factor;
    TestReport r;
    r.parameters = fmt_params(
        {{"beta", beta}, {"p", double(p_count)}, {"n", n_dof}, {"nu", nu}},
        "control=alternate-pi-exponent");
    r.kind = "abs_error";
    r.statistic = wrong;
    r.value = std::abs(wrong - 1.0);
    // Passes when the wrong constant is decisively detected (reported as a
    // deviation, not a closeness check).
    r.threshold = 10.0 * wrong_se;
    r.passed = r.value > r.threshold && wrong > 2.0;
    r.n = n_points;
    return r;
  };
}

TestFn special_product_values() {
  return [](RngStream&) {
    // Two closed-form products of the matrix gamma function.
    const double v1 = std::exp(log_mgamma(1, 2, 1.5));  // = pi/2
    const double v2 = std::exp(log_mgamma(2, 2, 2.0));  // = pi
    const double err =
        std::max(std::abs(v1 - kPi / 2.0) / (kPi / 2.0), std::abs(v2 - kPi) / kPi);
    return abs_report("mgamma products (beta=1,m=2,a=1.5) and (beta=2,m=2,a=2)",
                      v1, err, 1e-12, 2, "n_samples");
  };
}

TestFn special_mgamma_quadrature() {
  return [](RngStream&) {
    // Real case, order 2: Gamma_2(a) is the integral of
    // exp(-tr T) det(T)^{a - 3/2} over 2x2 symmetric positive definite T,
    // evaluated in spectral coordinates T = R(theta) diag(t1, t2) R(theta)^T
    // with t1 > t2 > 0 and theta in [0, pi); the Jacobian is (t1 - t2), so
    //   Gamma_2(a) = pi * int int e^{-(t1+t2)} (t1 t2)^{a-3/2} (t1-t2).
    // (Check: at a = 3/2 the double integral is 1/2 and Gamma_2(3/2) = pi/2.)
    const double a = 2.3;
    long nodes = 0;
    QuadratureOptions inner_opts;
    inner_opts.rel_tol = 1e-11;
    const double upper = 60.0;
    auto outer = [&](double t1) {
      nodes++;
      if (t1 <= 0.0) return 0.0;
      auto inner = [&](double t2) {
        nodes++;
        return std::exp(-(t1 + t2) + (a - 1.5) * std::log(t1 * t2)) * (t1 - t2);
      };
      return integrate_1d(inner, 0.0, t1, inner_opts);
    };
    const double integral = integrate_1d(outer, 0.0, upper);
    const double oracle = kPi * integral;
    const double closed = std::exp(log_mgamma(1, 2, a));
    const double rel = std::abs(oracle - closed) / closed;
    return abs_report(fmt_params({{"beta", 1}, {"m", 2}, {"a", a}}, "method=quadrature"),
                      oracle, rel, 1e-8, nodes, "quadrature_nodes");
  };
}

TestFn ks_pearson2_scalar_uniform(long n) {
  return [=](RngStream& rng) {
    // beta=1, nu=2 scalar law is uniform on (-1, 1).
    const auto p = PearsonIIParams::standard(1, 1, 1, 2.0);
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) xs.push_back(sample_pearson2(rng, p).coeff(0, 0, 0));
    TestReport r = ks_test_report("", fmt_params({{"beta", 1}, {"nu", 2}}, "cdf=uniform"),
                                  std::move(xs), [](double x) { return 0.5 * (x + 1.0); });
    return r;
  };
}

TestFn ks_beta1_scalar(int beta, double n_dof, double nu, long n) {
  return [=](RngStream& rng) {
    const BetaIParams p{n_dof, nu, 1, beta, BetaOrientation::wide};
    const auto cdf = std::make_shared<NumericCdf>(
        [p, beta](double x) {
          const double lp = beta1_logpdf(scalar_herm(beta, x), p);
          return std::isfinite(lp) ? std::exp(lp) : 0.0;
        },
        0.0, 1.0);
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) xs.push_back(sample_beta1(rng, p).diag(0));
    return ks_test_report(
        "", fmt_params({{"beta", double(beta)}, {"n", n_dof}, {"nu", nu}}, "cdf=numeric"),
        std::move(xs), [cdf](double x) { return cdf->cdf(x); });
  };
}

TestFn ks_beta1_tall(int beta, int m_rows, double nu, long n) {
  return [=](RngStream& rng) {
    const BetaIParams p{1.0, nu, m_rows, beta, BetaOrientation::tall};
    const auto cdf = std::make_shared<NumericCdf>(
        [p, beta](double x) {
          const double lp = beta1_logpdf(scalar_herm(beta, x), p);
          return std::isfinite(lp) ? std::exp(lp) : 0.0;
        },
        0.0, 1.0);
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) xs.push_back(sample_beta1(rng, p).diag(0));
    return ks_test_report(
        "",
        fmt_params({{"beta", double(beta)}, {"m", double(m_rows)}, {"nu", nu}},
                   "orientation=tall cdf=numeric"),
        std::move(xs), [cdf](double x) { return cdf->cdf(x); });
  };
}

TestFn ks_mmbeta1_scalar(int beta, double n_dof, double nu, BetaOrientation orient,
                         int m_rows, long n) {
  return [=](RngStream& rng) {
    BetaIParams p{n_dof, nu, m_rows, beta, orient};
    const auto cdf = std::make_shared<NumericCdf>(
        [p, beta](double x) {
          const double lp = mmbeta1_logpdf(scalar_herm(beta, x), p);
          return std::isfinite(lp) ? std::exp(lp) : 0.0;
        },
        0.0, 1.0);
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) xs.push_back(sample_mmbeta1(rng, p).diag(0));
    return ks_test_report(
        "",
        fmt_params({{"beta", double(beta)}, {"n", n_dof}, {"nu", nu}},
                   orient == BetaOrientation::tall ? "kind=trace orientation=tall"
                                                   : "kind=trace orientation=wide"),
        std::move(xs), [cdf](double x) { return cdf->cdf(x); });
  };
}

TestFn ks_mm_disk_squared_radius(int beta, double nu, long n) {
  return [=](RngStream& rng) {
    // For the scalar trace-kernel law, |q|^2 ~ Beta(beta/2, beta nu/2).
    const auto p =
        PearsonIIParams::standard(beta, 1, 1, nu, PearsonKind::matrix_multivariate);
    const double a = 0.5 * beta, b = 0.5 * beta * nu;
    const double logB = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    const auto cdf = std::make_shared<NumericCdf>(
        [=](double t) {
          if (t <= 0.0 || t >= 1.0) return 0.0;
          return std::exp((a - 1.0) * std::log(t) + (b - 1.0) * std::log1p(-t) - logB);
        },
        0.0, 1.0);
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
      const Matrix q = sample_mmpearson2(rng, p);
      xs.push_back(q.at(0, 0).norm_sq());
    }
    return ks_test_report(
        "",
        fmt_params({{"beta", double(beta)}, {"nu", nu}}, "statistic=squared-radius"),
        std::move(xs), [cdf](double t) { return cdf->cdf(t); });
  };
}

TestFn ks_spectral_vs_direct(int which_value, long n) {
  return [=](RngStream& rng) {
    // MCMC singular-value draws vs. direct SVD of sampler output,
    // beta=1, m=2, n=3, nu=4.
    const int m = 2, nn = 3;
    const double nu = 4.0;
    SpectralConfig c;
    c.values = {0.6, 0.3};  // interior initial state of order m
    c.n_dof = nn;
    c.nu = nu;
    c.beta = 1.0;
    c.flavor = SpectralFlavor::singular_pearson;
    RngStream mcmc_rng = rng.split(1);
    RngStream direct_rng = rng.split(2);
    SpectralSampleOptions opts;
    opts.thin = 30;  // keep residual chain autocorrelation negligible for KS
    auto result = sample_spectral(mcmc_rng, c, static_cast<int>(n), opts);
    std::vector<double> a;
    a.reserve(result.draws.size());
    for (const auto& d : result.draws) a.push_back(d[static_cast<std::size_t>(which_value)]);
    std::vector<double> b;
    b.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
      const auto draw = sample_pearson2_internal(direct_rng, 1, m, nn, nu,
                                                 PearsonConstruction::left_quotient());
      b.push_back(svd(draw.r0).singulars[static_cast<std::size_t>(which_value)]);
    }
    return two_sample_report(
        fmt_params({{"beta", 1}, {"m", double(m)}, {"n", double(nn)}, {"nu", nu}},
                   which_value == 0 ? "statistic=largest-singular-value"
                                    : "statistic=second-singular-value"),
        std::move(a), std::move(b));
  };
}

TestFn ks_spectral_scalar_chain(double beta, double n_dof, double nu, SpectralFlavor f,
                                const char* label, long n) {
  return [=](RngStream& rng) {
    SpectralConfig c;
    c.values = {0.5};
    c.n_dof = n_dof;
    c.nu = nu;
    c.beta = beta;
    c.flavor = f;
    const auto cdf = std::make_shared<NumericCdf>(
        [c](double x) {
          SpectralConfig cc = c;
          cc.values = {x};
          const double lp = spectral_logpdf_total(cc);
          return std::isfinite(lp) ? std::exp(lp) : 0.0;
        },
        0.0, 1.0);
    SpectralSampleOptions opts;
    opts.thin = 25;  // extra decorrelation: the KS p-value assumes iid samples
    auto result = sample_spectral(rng, c, static_cast<int>(n), opts);
    std::vector<double> xs;
    xs.reserve(result.draws.size());
    for (const auto& d : result.draws) xs.push_back(d[0]);
    return ks_test_report(
        "",
        fmt_params({{"beta", beta}, {"p", 1}, {"n", n_dof}, {"nu", nu}},
                   std::string("flavor=") + label + " sampler=mcmc"),
        std::move(xs), [cdf](double x) { return cdf->cdf(x); });
  };
}

TestFn ks_chi2beta(int beta, double nu, long n) {
  return [=](RngStream& rng) {
    const double shape = 0.5 * beta * nu, rate = 0.5 * beta;
    const double hi = (shape + 14.0 * std::sqrt(shape) + 14.0) / rate;
    const auto cdf = std::make_shared<NumericCdf>(
        [=](double x) {
          if (x <= 0.0) return 0.0;
          return std::exp(shape * std::log(rate) + (shape - 1.0) * std::log(x) -
                          rate * x - std::lgamma(shape));
        },
        0.0, hi);
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) xs.push_back(sample_chi2beta(rng, beta, nu));
    return ks_test_report(
        "", fmt_params({{"beta", double(beta)}, {"nu", nu}}, "cdf=gamma"), std::move(xs),
        [cdf](double x) { return cdf->cdf(x); });
  };
}

TestFn ks_wishart_constructions(long n) {
  return [=](RngStream& rng) {
    // Bartlett and Gram constructions at integer dof must agree in law;
    // compare the log determinant, beta=2, m=2, nu=7.
    WishartParams w;
    w.nu = 7.0;
    w.sigma = HermMatrix::identity(2, 2);
    std::vector<double> a, b;
    a.reserve(static_cast<std::size_t>(n));
    b.reserve(static_cast<std::size_t>(n));
    RngStream r1 = rng.split(1), r2 = rng.split(2);
    for (long i = 0; i < n; ++i) {
      a.push_back(logdet_hpd(sample_wishart(r1, w, WishartConstruction::gram)));
      b.push_back(logdet_hpd(sample_wishart(r2, w, WishartConstruction::bartlett)));
    }
    return two_sample_report(
        fmt_params({{"beta", 2}, {"m", 2}, {"nu", 7}}, "statistic=logdet"), std::move(a),
        std::move(b));
  };
}

std::vector<double> construction_traces(RngStream& rng, int beta, int m, int n, double nu,
                                        const PearsonConstruction& how, long count) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) {
    const auto draw = sample_pearson2_internal(rng, beta, m, n, nu, how);
    out.push_back(gram(draw.r0).trace());
  }
  return out;
}

TestFn ks_construction_pair(const PearsonConstruction& lhs, const PearsonConstruction& rhs,
                            int beta, int m, int n, double nu, long count,
                            const char* label) {
  return [=](RngStream& rng) {
    RngStream r1 = rng.split(1), r2 = rng.split(2);
    auto a = construction_traces(r1, beta, m, n, nu, lhs, count);
    auto b = construction_traces(r2, beta, m, n, nu, rhs, count);
    return two_sample_report(
        fmt_params({{"beta", double(beta)}, {"m", double(m)}, {"n", double(n)}, {"nu", nu}},
                   std::string("pair=") + label + " statistic=trace"),
        std::move(a), std::move(b));
  };
}

TestFn ks_elliptical_largest_eigenvalue(long count) {
  return [=](RngStream& rng) {
    // Gaussian vs. matrix-t generators give the same law; compare the top
    // eigenvalue of R0 R0*, beta=1, m=2, n=3, nu=4.
    const int beta = 1, m = 2, n = 3;
    const double nu = 4.0;
    RngStream r1 = rng.split(1), r2 = rng.split(2);
    auto grab = [&](RngStream& r, const EllipticalGenerator& g) {
      std::vector<double> out;
      out.reserve(static_cast<std::size_t>(count));
      for (long i = 0; i < count; ++i) {
        const auto draw = sample_pearson2_internal(
            r, beta, m, n, nu, PearsonConstruction::elliptical(g));
        out.push_back(herm_eigenvalues(gram(draw.r0)).front());
      }
      return out;
    };
    auto a = grab(r1, EllipticalGenerator::normal());
    auto b = grab(r2, EllipticalGenerator::matrix_t(5.0));
    return two_sample_report(
        fmt_params({{"beta", double(beta)}, {"m", double(m)}, {"n", double(n)}, {"nu", nu}},
                   "pair=normal-vs-t5 statistic=largest-eigenvalue"),
        std::move(a), std::move(b));
  };
}

TestFn quotient_independence(long count) {
  return [=](RngStream& rng) {
    // tr(U) and tr(R0 R0*) from the same draw should be uncorrelated.
    const int beta = 2, m = 2, n = 3;
    const double nu = 3.0;
    std::vector<double> tu, tr;
    tu.reserve(static_cast<std::size_t>(count));
    tr.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) {
      const auto draw = sample_pearson2_internal(rng, beta, m, n, nu,
                                                 PearsonConstruction::left_quotient());
      tu.push_back(draw.denominator.trace());
      tr.push_back(gram(draw.r0).trace());
    }
    const double c = correlation(tu, tr);
    return abs_report(
        fmt_params({{"beta", double(beta)}, {"m", double(m)}, {"n", double(n)}, {"nu", nu}},
                   "statistic=corr(trace-denominator,trace-draw)"),
        c, std::abs(c), 0.02, count, "n_samples");
  };
}

TestFn ks_quotient_denominator_marginal(long count) {
  return [=](RngStream& rng) {
    // The construction's denominator is Wishart with nu + n degrees of
    // freedom; compare log determinants against fresh Wishart draws.
    const int beta = 1, m = 2, n = 3;
    const double nu = 4.0;
    RngStream r1 = rng.split(1), r2 = rng.split(2);
    std::vector<double> a, b;
    a.reserve(static_cast<std::size_t>(count));
    b.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) {
      const auto draw = sample_pearson2_internal(r1, beta, m, n, nu,
                                                 PearsonConstruction::left_quotient());
      a.push_back(logdet_hpd(draw.denominator));
    }
    WishartParams w;
    w.nu = nu + n;
    w.sigma = HermMatrix::identity(beta, m);
    for (long i = 0; i < count; ++i) {
      b.push_back(logdet_hpd(sample_wishart(r2, w)));
    }
    return two_sample_report(
        fmt_params({{"beta", double(beta)}, {"m", double(m)}, {"n", double(n)}, {"nu", nu}},
                   "statistic=logdet-denominator vs wishart(nu+n)"),
        std::move(a), std::move(b));
  };
}

TestFn ks_mm_s1_marginal(long count) {
  return [=](RngStream& rng) {
    // S1 from the trace-kernel construction is chi^2-type with nu + m n
    // degrees of freedom: Gamma(beta (nu + m n)/2, rate beta/2).
    const int beta = 2, m = 2, n = 3;
    const double nu = 1.5;
    const double shape = 0.5 * beta * (nu + m * n), rate = 0.5 * beta;
    const double hi = (shape + 14.0 * std::sqrt(shape) + 14.0) / rate;
    const auto cdf = std::make_shared<NumericCdf>(
        [=](double x) {
          if (x <= 0.0) return 0.0;
          return std::exp(shape * std::log(rate) + (shape - 1.0) * std::log(x) -
                          rate * x - std::lgamma(shape));
        },
        0.0, hi);
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) {
      xs.push_back(sample_mmpearson2_internal(rng, beta, m, n, nu).s1);
    }
    return ks_test_report(
        "",
        fmt_params({{"beta", double(beta)}, {"m", double(m)}, {"n", double(n)}, {"nu", nu}},
                   "statistic=s1 cdf=gamma"),
        std::move(xs), [cdf](double x) { return cdf->cdf(x); });
  };
}

TestFn mm_independence(long count) {
  return [=](RngStream& rng) {
    const int beta = 1, m = 2, n = 3;
    const double nu = 2.5;
    std::vector<double> s1s, trs;
    s1s.reserve(static_cast<std::size_t>(count));
    trs.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) {
      const auto draw = sample_mmpearson2_internal(rng, beta, m, n, nu);
      s1s.push_back(draw.s1);
      trs.push_back(gram(draw.r0).trace());
    }
    const double c = correlation(s1s, trs);
    return abs_report(
        fmt_params({{"beta", double(beta)}, {"m", double(m)}, {"n", double(n)}, {"nu", nu}},
                   "statistic=corr(s1,trace-draw)"),
        c, std::abs(c), 0.02, count, "n_samples");
  };
}

TestFn normal_coefficient_variance(int beta, long count) {
  return [=](RngStream& rng) {
    // Every coefficient of a standard algebra normal has variance 1/beta.
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(count));
    const int coeff = beta > 1 ? 1 : 0;
    for (long i = 0; i < count; ++i) {
      xs.push_back(sample_standard_normal(rng, beta, 1, 1).coeff(0, 0, coeff));
    }
    const double v = variance(xs);
    return abs_report(fmt_params({{"beta", double(beta)}}, "statistic=coefficient-variance"),
                      v, std::abs(v - 1.0 / beta), 0.01, count, "n_samples");
  };
}

TestFn normal_squared_norm_mean(int beta, long count) {
  return [=](RngStream& rng) {
    // The squared norm of a standard algebra normal entry has mean 1.
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) {
      xs.push_back(sample_standard_normal(rng, beta, 1, 1).at(0, 0).norm_sq());
    }
    const double m = mean(xs);
    return abs_report(fmt_params({{"beta", double(beta)}}, "statistic=squared-norm-mean"),
                      m, std::abs(m - 1.0), 0.01, count, "n_samples");
  };
}

TestFn transpose_duality_residual(int instances) {
  return [=](RngStream& rng) {
    double worst = 0.0;
    for (int beta : {1, 2, 4}) {
      for (int rep = 0; rep < instances; ++rep) {
        PearsonIIParams p;
        p.nu = 2.0 + beta + 2.0 * rng.uniform01();
        p.mu = random_matrix(rng, beta, 2, 3, 0.3);
        p.scale_left = random_hpd(rng, beta, 2);
        p.scale_right = random_hpd(rng, beta, 3);
        p.kind = PearsonKind::matricvariate;
        const Matrix q = random_supported_point(rng, p);

        PearsonIIParams t;
        t.nu = p.nu;
        t.mu = adjoint(p.mu);
        t.scale_left = inverse_hpd(p.scale_right);
        t.scale_right = inverse_hpd(p.scale_left);
        t.kind = p.kind;
        const double lhs = pearson2_logpdf(q, p);
        const double rhs = pearson2_logpdf(adjoint(q), t);
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
      }
    }
    return abs_report("m=2 n=3, random scales, beta in {1,2,4}, relative residual", worst,
                      worst, 1e-10, 3L * instances, "n_samples");
  };
}

TestFn dual_display_residual(int instances) {
  return [=](RngStream& rng) {
    double worst = 0.0;
    for (int beta : {1, 2, 4}) {
      for (int rep = 0; rep < instances; ++rep) {
        PearsonIIParams p;
        p.nu = 2.0 + beta + 3.0 * rng.uniform01();
        p.mu = random_matrix(rng, beta, 2, 3, 0.4);
        p.scale_left = random_hpd(rng, beta, 2);
        p.scale_right = random_hpd(rng, beta, 3);
        p.kind = PearsonKind::matricvariate;
        const Matrix q = random_supported_point(rng, p);
        const double a = pearson2_logpdf(q, p);
        const double b = pearson2_logpdf_dual(q, p);
        worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(a)));
      }
    }
    return abs_report("m=2 n=3, random scales, beta in {1,2,4}, relative residual", worst,
                      worst, 1e-10, 3L * instances, "n_samples");
  };
}

TestFn affine_consistency(PearsonKind kind, int instances) {
  return [=](RngStream& rng) {
    double worst = 0.0;
    for (int beta : {1, 2, 4}) {
      for (int rep = 0; rep < instances; ++rep) {
        const int m = 2, n = 3;
        const double nu = 2.0 + beta + 2.0 * rng.uniform01();
        PearsonIIParams p;
        p.nu = nu;
        p.mu = random_matrix(rng, beta, m, n, 0.4);
        p.scale_left = random_hpd(rng, beta, m);
        p.scale_right = random_hpd(rng, beta, n);
        p.kind = kind;
        const auto std_p = PearsonIIParams::standard(beta, m, n, nu, kind);
        const Matrix ml = cholesky(p.scale_left);
        const Matrix nl = cholesky(p.scale_right);
        const double ldb = logdet_hpd(p.scale_left);
        const double ldd = logdet_hpd(p.scale_right);

        double lhs = 0.0, rhs = 0.0;
        if (kind == PearsonKind::matricvariate) {
          const Matrix q = random_supported_point(rng, p);
          const Matrix r =
              solve_upper_right(adjoint(nl), matmul(adjoint(ml), q - p.mu));
          lhs = pearson2_logpdf(q, p);
          rhs = pearson2_logpdf(r, std_p) + 0.5 * beta * n * ldb - 0.5 * beta * m * ldd;
        } else {
          Matrix g = random_matrix(rng, beta, m, n, 0.2);
          Matrix q = p.mu + g;
          while (!std::isfinite(mmpearson2_logpdf(q, p))) {
            g *= 0.5;
            q = p.mu + g;
          }
          const Matrix r = matmul(matmul(adjoint(ml), q - p.mu), nl);
          lhs = mmpearson2_logpdf(q, p);
          rhs = mmpearson2_logpdf(r, std_p) + 0.5 * beta * n * ldb + 0.5 * beta * m * ldd;
        }
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
      }
    }
    return abs_report("m=2 n=3, random scales and shift, beta in {1,2,4}", worst, worst,
                      1e-10, 3L * instances, "n_samples");
  };
}

TestFn change_of_variables_residual(int instances) {
  return [=](RngStream& rng) {
    double worst = 0.0;
    for (double beta : {1.0, 2.0, 4.0, 8.0}) {
      for (SpectralFlavor f :
           {SpectralFlavor::singular_pearson, SpectralFlavor::singular_mm}) {
        for (int rep = 0; rep < instances; ++rep) {
          const int p_count = 2 + static_cast<int>(rng.uniform01() * 2.0);  // 2 or 3
          std::vector<double> vals;
          for (int i = 0; i < p_count; ++i) vals.push_back(0.05 + 0.9 * rng.uniform01());
          std::sort(vals.begin(), vals.end(), std::greater<>());
          // keep the squared masses inside the trace-flavor support
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
          const double resid = change_of_variables_check(c);
          worst = std::max(worst, std::abs(resid));
        }
      }
    }
    return abs_report("p in {2,3}, beta in {1,2,4,8}, both singular flavors", worst,
                      worst, 1e-10, 8L * instances, "n_samples");
  };
}

const std::vector<RegisteredTest>& registry() {
  static const std::vector<RegisteredTest> kTests = [] {
    std::vector<RegisteredTest> t;
    auto add = [&t](std::string name, TestFn fn) {
      t.push_back({std::move(name), std::move(fn)});
    };

    // --- special functions ---------------------------------------------
    add("special-product-values", special_product_values());
    add("special-mgamma-quadrature", special_mgamma_quadrature());

    // --- normalization: determinant-kernel scalar laws ------------------
    add("pearson2-norm-quadrature-b1-nu2", pearson2_interval_norm(1, 2.0));
    add("pearson2-norm-quadrature-b1-nu3", pearson2_interval_norm(1, 3.0));
    add("pearson2-norm-quadrature-b1-nu5", pearson2_interval_norm(1, 5.0));
    add("pearson2-norm-polar-b2-nu2", pearson2_polar_norm(2, 2.0));
    add("pearson2-norm-polar-b2-nu4", pearson2_polar_norm(2, 4.0));
    add("pearson2-norm-radial-b4-nu3", pearson2_radial_norm(4, 3.0));

    // --- normalization: beta type I -------------------------------------
    add("beta1-norm-quadrature-b1-n2-nu2", beta1_scalar_norm(1, 2.0, 2.0));
    add("beta1-norm-quadrature-b1-n3-nu4", beta1_scalar_norm(1, 3.0, 4.0));
    add("beta1-norm-quadrature-b2-n3-nu3", beta1_scalar_norm(2, 3.0, 3.0));
    add("beta1-norm-quadrature-b4-n5-nu5", beta1_scalar_norm(4, 5.0, 5.0));
    add("beta1-tall-norm-quadrature-b1", beta1_tall_scalar_norm(1, 3.0, 4.0));

    // --- normalization: trace-kernel laws --------------------------------
    add("mmpearson2-norm-quadrature-b1-nu1", mm_interval_norm(1, 1.0));
    add("mmpearson2-norm-quadrature-b1-nu3", mm_interval_norm(1, 3.0));
    add("mmpearson2-norm-quadrature-b1-nu6", mm_interval_norm(1, 6.0));
    add("mmpearson2-norm-polar-b2-nu2", mm_polar_norm(2, 2.0));
    add("mmpearson2-norm-radial-b4-nu2", mm_radial_norm(4, 2.0));
    add("mmbeta1-norm-quadrature-b1", mmbeta1_scalar_norm(1, 2.0, 2.0));
    add("mmbeta1-norm-quadrature-b2", mmbeta1_scalar_norm(2, 3.0, 4.0));
    add("mmbeta1-norm-quadrature-b4", mmbeta1_scalar_norm(4, 4.0, 1.5));

    // --- normalization: spectral laws, scalar order ----------------------
    add("spectral-norm-sv-pearson-b1",
        spectral_scalar_norm(1.0, 3.0, 4.0, SpectralFlavor::singular_pearson,
                             "singular-pearson"));
    add("spectral-norm-sv-pearson-b8",
        spectral_scalar_norm(8.0, 2.0, 1.5, SpectralFlavor::singular_pearson,
                             "singular-pearson"));
    add("spectral-norm-sv-mm-b2",
        spectral_scalar_norm(2.0, 2.0, 2.5, SpectralFlavor::singular_mm, "singular-mm"));
    add("spectral-norm-eigen-beta-b2",
        spectral_scalar_norm(2.0, 3.0, 4.0, SpectralFlavor::eigen_beta, "eigen-beta"));
    add("spectral-norm-eigen-mm-b4",
        spectral_scalar_norm(4.0, 2.0, 1.5, SpectralFlavor::eigen_mm, "eigen-mm"));

    // --- normalization: spectral laws, order 2, Monte Carlo --------------
    add("spectral-mc-sv-pearson-b1",
        spectral_mc_norm(1.0, 2, 3.0, 4.0, SpectralFlavor::singular_pearson,
                         "singular-pearson", 400000));
    add("spectral-mc-sv-pearson-b2",
        spectral_mc_norm(2.0, 2, 4.0, 6.0, SpectralFlavor::singular_pearson,
                         "singular-pearson", 400000));
    add("spectral-mc-sv-mm-b1",
        spectral_mc_norm(1.0, 2, 3.0, 4.0, SpectralFlavor::singular_mm, "singular-mm",
                         300000));
    add("spectral-mc-eigen-beta-b2",
        spectral_mc_norm(2.0, 2, 3.0, 6.0, SpectralFlavor::eigen_beta, "eigen-beta",
                         300000));
    add("spectral-mc-eigen-mm-b4",
        spectral_mc_norm(4.0, 2, 3.0, 2.5, SpectralFlavor::eigen_mm, "eigen-mm", 300000));
    add("spectral-negative-control", spectral_negative_control(1.0, 2, 3.0, 4.0, 150000));

    // --- sampler laws against reference CDFs ----------------------------
    add("ks-pearson2-scalar-uniform", ks_pearson2_scalar_uniform(20000));
    add("ks-beta1-scalar-b1", ks_beta1_scalar(1, 3.0, 4.0, 10000));
    add("ks-beta1-scalar-b2", ks_beta1_scalar(2, 2.0, 3.0, 10000));
    add("ks-beta1-scalar-b4", ks_beta1_scalar(4, 3.0, 2.0, 10000));
    add("ks-beta1-tall-b1", ks_beta1_tall(1, 3, 4.0, 10000));
    add("ks-mmbeta1-wide-b2",
        ks_mmbeta1_scalar(2, 2.0, 1.5, BetaOrientation::wide, 1, 10000));
    add("ks-mmbeta1-tall-b1",
        ks_mmbeta1_scalar(1, 1.0, 2.0, BetaOrientation::tall, 2, 10000));
    add("ks-mmpearson2-disk-b2", ks_mm_disk_squared_radius(2, 1.0, 20000));
    add("ks-spectral-sv1-b1", ks_spectral_vs_direct(0, 800));
    add("ks-spectral-sv2-b1", ks_spectral_vs_direct(1, 800));
    add("ks-spectral-eigen-b4-scalar",
        ks_spectral_scalar_chain(4.0, 2.0, 1.5, SpectralFlavor::eigen_beta, "eigen-beta",
                                 600));
    add("ks-chi2beta-b1", ks_chi2beta(1, 2.0, 20000));
    add("ks-chi2beta-b4", ks_chi2beta(4, 2.0, 20000));
    add("ks-wishart-bartlett-vs-gram", ks_wishart_constructions(4000));

    // --- construction equivalences ---------------------------------------
    add("ks-construction-left-vs-right-quotient",
        ks_construction_pair(PearsonConstruction::left_quotient(),
                             PearsonConstruction::right_quotient(), 2, 2, 3, 3.5, 4000,
                             "left-vs-right-quotient"));
    add("ks-construction-quotient-vs-elliptical",
        ks_construction_pair(
            PearsonConstruction::left_quotient(),
            PearsonConstruction::elliptical(EllipticalGenerator::normal()), 1, 2, 3, 4.0,
            4000, "left-quotient-vs-elliptical-normal"));
    add("ks-construction-elliptical-t-invariance",
        ks_construction_pair(
            PearsonConstruction::elliptical(EllipticalGenerator::normal()),
            PearsonConstruction::elliptical(EllipticalGenerator::matrix_t(5.0)), 1, 2, 3,
            4.0, 8000, "elliptical-normal-vs-t5"));
    add("ks-elliptical-largest-eigenvalue", ks_elliptical_largest_eigenvalue(8000));

    // --- independence and marginals --------------------------------------
    add("corr-quotient-independence", quotient_independence(40000));
    add("ks-quotient-denominator-marginal", ks_quotient_denominator_marginal(5000));
    add("ks-mmpearson2-s1-marginal", ks_mm_s1_marginal(10000));
    add("corr-mmpearson2-independence", mm_independence(40000));
    add("normal-coefficient-variance-b2", normal_coefficient_variance(2, 200000));
    add("normal-squared-norm-mean-b4", normal_squared_norm_mean(4, 200000));

    // --- exact identities -------------------------------------------------
    add("duality-transpose", transpose_duality_residual(34));
    add("dual-display-agreement", dual_display_residual(34));
    add("affine-consistency-det", affine_consistency(PearsonKind::matricvariate, 34));
    add("affine-consistency-mm",
        affine_consistency(PearsonKind::matrix_multivariate, 34));
    add("change-of-variables", change_of_variables_residual(13));

    return t;
  }();
  return kTests;
}

const RegisteredTest* find_test(const std::string& name) {
  for (const auto& t : registry()) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

TestReport run_one(const RegisteredTest& test, std::uint64_t suite_seed) {
  const auto t0 = Clock::now();
  const std::uint64_t index = fnv1a(test.name);
  RngStream primary = RngStream(suite_seed).split(index);
  TestReport r = test.fn(primary);
  r.name = test.name;
  r.seed = primary.seed();
  if (!r.passed && r.kind == "p_value") {
    // One preregistered retry on an independent substream; the retried result
    // replaces the first and is marked as such.
    RngStream retry = RngStream(suite_seed).split(index ^ kRetryTag);
    TestReport second = test.fn(retry);
    second.name = test.name;
    second.seed = retry.seed();
    second.retried = true;
    r = second;
  }
  r.runtime_seconds = seconds_since(t0);
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// public oracles

TestReport ks_test_report(const std::string& name, const std::string& parameters,
                          std::vector<double> samples,
                          const std::function<double(double)>& cdf, double threshold) {
  if (samples.size() < 50) {
    std::ostringstream msg;
    msg << "ks_test_report needs at least 50 samples, got " << samples.size();
    throw ParameterError(msg.str());
  }
  const auto t0 = Clock::now();
  TestReport r;
  r.name = name;
  r.parameters = parameters;
  r.kind = "p_value";
  r.n = static_cast<long>(samples.size());
  const double n_eff = static_cast<double>(samples.size());
  r.statistic = ks_statistic(std::move(samples), cdf);
  r.value = ks_pvalue(r.statistic, n_eff);
  r.threshold = threshold;
  r.passed = r.value > threshold;
  r.runtime_seconds = seconds_since(t0);
  return r;
}

NormalizationEstimate quadrature_normalize_interval(
    const std::function<double(double)>& logpdf, double lo, double hi) {
  long nodes = 0;
  auto f = [&](double x) {
    ++nodes;
    const double lp = logpdf(x);
    return std::isfinite(lp) ? std::exp(lp) : 0.0;
  };
  NormalizationEstimate e;
  e.estimate = integrate_1d(f, lo, hi);
  e.std_error = 0.0;
  e.method = NormalizationMethod::quadrature;
  e.n = nodes;
  return e;
}

NormalizationEstimate quadrature_normalize_polar(
    const std::function<double(double, double)>& logpdf, double radius) {
  if (!(radius > 0.0)) throw ParameterError("polar normalization needs radius > 0");
  long nodes = 0;
  auto density = [&](double x, double y) {
    ++nodes;
    const double lp = logpdf(x, y);
    return std::isfinite(lp) ? std::exp(lp) : 0.0;
  };
  // Angular integral by the doubling trapezoid rule (spectrally accurate for
  // periodic integrands; exits immediately for rotationally symmetric ones).
  auto ring = [&](double r) {
    double prev = kInf;
    int n = 32;
    double sum = 0.0;
    for (;; n *= 2) {
      sum = 0.0;
      for (int k = 0; k < n; ++k) {
        const double th = 2.0 * kPi * k / n;
        sum += density(r * std::cos(th), r * std::sin(th));
      }
      sum /= n;
      if (std::abs(sum - prev) <= 1e-12 + 1e-11 * std::abs(sum) || n >= 1 << 16) break;
      prev = sum;
    }
    return 2.0 * kPi * sum * r;
  };
  NormalizationEstimate e;
  e.estimate = integrate_1d(ring, 0.0, radius);
  e.std_error = 0.0;
  e.method = NormalizationMethod::quadrature;
  e.n = nodes;
  return e;
}

NormalizationEstimate quadrature_normalize_radial(
    const std::function<double(double)>& logpdf_of_radius, double radius,
    int ambient_dim) {
  if (!(radius > 0.0)) throw ParameterError("radial normalization needs radius > 0");
  if (ambient_dim < 1) throw ParameterError("radial normalization needs dimension >= 1");
  const double d = static_cast<double>(ambient_dim);
  const double log_sphere =
      std::log(2.0) + 0.5 * d * std::log(kPi) - std::lgamma(0.5 * d);
  long nodes = 0;
  auto f = [&](double r) {
    ++nodes;
    if (r <= 0.0) return 0.0;
    const double lp = logpdf_of_radius(r);
    if (!std::isfinite(lp)) return 0.0;
    return std::exp(lp + log_sphere + (d - 1.0) * std::log(r));
  };
  NormalizationEstimate e;
  e.estimate = integrate_1d(f, 0.0, radius);
  e.std_error = 0.0;
  e.method = NormalizationMethod::quadrature;
  e.n = nodes;
  return e;
}

NormalizationEstimate mc_normalize(
    RngStream& rng, const std::function<double(const std::vector<double>&)>& logpdf,
    const McRegion& region, long n_points) {
  const std::size_t d = region.lo.size();
  if (d == 0 || region.hi.size() != d) {
    throw ParameterError("Monte Carlo region needs matching nonempty bounds");
  }
  double volume = 1.0;
  for (std::size_t i = 0; i < d; ++i) {
    if (!(region.hi[i] > region.lo[i])) {
      throw ParameterError("Monte Carlo region needs hi > lo in every coordinate");
    }
    volume *= region.hi[i] - region.lo[i];
  }
  if (region.ordered_decreasing) {
    for (std::size_t i = 1; i < d; ++i) {
      if (region.lo[i] != region.lo[0] || region.hi[i] != region.hi[0]) {
        throw ParameterError(
            "ordered Monte Carlo regions need identical bounds in every coordinate");
      }
    }
    for (std::size_t i = 2; i <= d; ++i) volume /= static_cast<double>(i);
  }
  if (n_points < 2) throw ParameterError("Monte Carlo normalization needs >= 2 points");

  std::vector<double> x(d);
  double s = 0.0, s2 = 0.0;
  long hits = 0;
  for (long k = 0; k < n_points; ++k) {
    for (std::size_t i = 0; i < d; ++i) {
      x[i] = region.lo[i] + (region.hi[i] - region.lo[i]) * rng.uniform01();
    }
    if (region.ordered_decreasing) std::sort(x.begin(), x.end(), std::greater<>());
    const double lp = logpdf(x);
    if (std::isfinite(lp)) {
      const double w = std::exp(lp);
      s += w;
      s2 += w * w;
      ++hits;
    }
  }
  if (hits == 0) {
    throw DiagnosticsError(
        "Monte Carlo normalization found no in-support points; check the region");
  }
  const double n = static_cast<double>(n_points);
  const double mean_w = s / n;
  const double var_w = std::max(0.0, (s2 - n * mean_w * mean_w) / (n - 1.0));
  NormalizationEstimate e;
  e.estimate = volume * mean_w;
  e.std_error = volume * std::sqrt(var_w / n);
  e.method = NormalizationMethod::uniform_mc;
  e.n = n_points;
  return e;
}

// ---------------------------------------------------------------------------
// suite

std::vector<std::string> default_suite_tests() {
  std::vector<std::string> names;
  names.reserve(registry().size());
  for (const auto& t : registry()) names.push_back(t.name);
  return names;
}

SuiteResult run_suite(const SuiteConfig& config) {
  std::vector<const RegisteredTest*> selected;
  if (!config.tests.has_value()) {
    for (const auto& t : registry()) selected.push_back(&t);
  } else {
    for (const auto& name : *config.tests) {
      const RegisteredTest* t = find_test(name);
      if (t == nullptr) {
        throw ConfigError("unknown test name: " + name);
      }
      selected.push_back(t);
    }
  }

  SuiteResult result;
  result.suite = config.suite;
  result.reports.resize(selected.size());
  result.passed = true;
  if (selected.empty()) return result;

  const int hardware = static_cast<int>(std::thread::hardware_concurrency());
  const int jobs = std::max(1, std::min(config.jobs, std::max(1, hardware)));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < selected.size(); i = next.fetch_add(1)) {
      try {
        result.reports[i] = run_one(*selected[i], config.seed);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  for (const auto& r : result.reports) result.passed = result.passed && r.passed;
  return result;
}

nlohmann::json report_to_json(const TestReport& r) {
  nlohmann::json j;
  j["name"] = r.name;
  j["parameters"] = r.parameters;
  j["statistic"] = r.statistic;
  j[r.kind] = r.value;
  j["threshold"] = r.threshold;
  j["passed"] = r.passed;
  j[r.n_label] = r.n;
  j["runtime_seconds"] = r.runtime_seconds;
  j["seed"] = r.seed;
  j["retried"] = r.retried;
  return j;
}

nlohmann::json suite_to_json(const SuiteResult& result) {
  nlohmann::json j;
  j["suite"] = result.suite;
  j["reports"] = nlohmann::json::array();
  for (const auto& r : result.reports) j["reports"].push_back(report_to_json(r));
  j["passed"] = result.passed;
  return j;
}

}  // namespace divstat
