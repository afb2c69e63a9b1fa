// Command-line surface for the library: draw samples (JSONL), evaluate log
// densities (JSON), run the verification suite (JSON report), and tabulate
// the special-function constants (CSV).
//
// Exit codes: 0 success, 1 verification failure, 2 usage/schema error.
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "divstat/densities.hpp"
#include "divstat/errors.hpp"
#include "divstat/factor.hpp"
#include "divstat/matrix.hpp"
#include "divstat/rng.hpp"
#include "divstat/samplers.hpp"
#include "divstat/special.hpp"
#include "divstat/verify.hpp"

using nlohmann::json;
using namespace divstat;

namespace {

constexpr int kFormatVersion = 1;
constexpr const char* kVarianceNote =
    "standard normal entries have coefficient variance 1/beta (squared-norm mean 1)";

// ---------------------------------------------------------------------------
// matrix <-> JSON

json matrix_to_json(const Matrix& a) {
  json entries = json::array();
  for (int i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < a.cols(); ++j) {
      json e = json::array();
      for (int k = 0; k < a.beta(); ++k) e.push_back(a.coeff(i, j, k));
      row.push_back(std::move(e));
    }
    entries.push_back(std::move(row));
  }
  return json{{"beta", a.beta()}, {"m", a.rows()}, {"n", a.cols()},
              {"entries", std::move(entries)}};
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("beta") || !j.contains("m") || !j.contains("n") ||
      !j.contains("entries")) {
    throw ConfigError("matrix object needs fields beta, m, n, entries");
  }
  if (!j["beta"].is_number_integer() || !j["m"].is_number_integer() ||
      !j["n"].is_number_integer() || !j["entries"].is_array()) {
    throw ConfigError("matrix fields have wrong types");
  }
  const int beta = j["beta"].get<int>();
  const int m = j["m"].get<int>();
  const int n = j["n"].get<int>();
  if (m < 1 || n < 1) throw ConfigError("matrix dimensions must be positive");
  require_valid_beta(beta);
  const auto& entries = j["entries"];
  if (static_cast<int>(entries.size()) != m) {
    throw ConfigError("matrix entries row count does not match m");
  }
  Matrix a(beta, m, n);
  for (int i = 0; i < m; ++i) {
    const auto& row = entries[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != n) {
      throw ConfigError("matrix entries column count does not match n");
    }
    for (int jj = 0; jj < n; ++jj) {
      const auto& e = row[static_cast<std::size_t>(jj)];
      if (!e.is_array() || static_cast<int>(e.size()) != beta) {
        throw ConfigError("matrix entry needs exactly beta coefficients");
      }
      for (int k = 0; k < beta; ++k) {
        if (!e[static_cast<std::size_t>(k)].is_number()) {
          throw ConfigError("matrix coefficients must be numbers");
        }
        a.set_coeff(i, jj, k, e[static_cast<std::size_t>(k)].get<double>());
      }
    }
  }
  return a;
}

HermMatrix herm_from_json(const json& j) {
  return HermMatrix::from_matrix(matrix_from_json(j), 1e-9);
}

json logpdf_to_json(double lp) {
  json out;
  out["format_version"] = kFormatVersion;
  if (std::isfinite(lp)) {
    out["logpdf"] = lp;
  } else if (lp < 0.0) {
    out["logpdf"] = "-inf";
  } else {
    throw InternalConsistencyError("log density evaluated to a non-finite non -inf value");
  }
  return out;
}

std::unique_ptr<std::ofstream> open_out(const std::string& path, std::ostream** stream) {
  if (path.empty() || path == "-") {
    *stream = &std::cout;
    return nullptr;
  }
  auto file = std::make_unique<std::ofstream>(path);
  if (!*file) throw ConfigError("cannot open output file: " + path);
  *stream = file.get();
  return file;
}

SpectralFlavor flavor_from_string(const std::string& s) {
  if (s == "singular-pearson") return SpectralFlavor::singular_pearson;
  if (s == "singular-mm") return SpectralFlavor::singular_mm;
  if (s == "eigen-beta") return SpectralFlavor::eigen_beta;
  if (s == "eigen-mm") return SpectralFlavor::eigen_mm;
  throw ConfigError(
      "unknown spectral flavor '" + s +
      "' (expected singular-pearson, singular-mm, eigen-beta, eigen-mm)");
}

// ---------------------------------------------------------------------------
// sample

struct SampleArgs {
  std::string dist;
  int beta = 1;
  int m = 1;
  int n = 1;
  double nu = 0.0;
  long count = 1;
  std::uint64_t seed = 20250815;
  std::string out = "-";
  std::string method = "left-quotient";
  double elliptical_df = 0.0;
  bool tall = false;
  std::string flavor = "singular-pearson";
  int burn_in = 1000;
  int thin = 10;
  double step = 0.0;
};

PearsonConstruction construction_from_args(const SampleArgs& a) {
  if (a.method == "left-quotient") return PearsonConstruction::left_quotient();
  if (a.method == "right-quotient") return PearsonConstruction::right_quotient();
  if (a.method == "elliptical") {
    return PearsonConstruction::elliptical(
        a.elliptical_df > 0.0 ? EllipticalGenerator::matrix_t(a.elliptical_df)
                              : EllipticalGenerator::normal());
  }
  throw ConfigError("unknown sampling method '" + a.method +
                    "' (expected left-quotient, right-quotient, elliptical)");
}

int cmd_sample(const SampleArgs& a) {
  if (a.count < 1) throw ConfigError("--count must be positive");
  if (a.beta == 8 && a.dist != "spectral") {
    throw ParameterError("octonion matrix sampling unsupported");
  }

  std::ostream* os = nullptr;
  auto file = open_out(a.out, &os);

  json header;
  header["format_version"] = kFormatVersion;
  header["kind"] = "header";
  header["dist"] = a.dist;
  header["beta"] = a.beta;
  header["m"] = a.m;
  header["n"] = a.n;
  header["nu"] = a.nu;
  header["count"] = a.count;
  header["seed"] = a.seed;
  header["note"] = kVarianceNote;

  RngStream rng(a.seed);

  if (a.dist == "pearson2" || a.dist == "mmpearson2") {
    const PearsonKind kind = a.dist == "pearson2" ? PearsonKind::matricvariate
                                                  : PearsonKind::matrix_multivariate;
    const auto p = PearsonIIParams::standard(a.beta, a.m, a.n, a.nu, kind);
    p.validate();
    if (a.dist == "pearson2") header["method"] = a.method;
    *os << header.dump() << "\n";
    for (long i = 0; i < a.count; ++i) {
      const Matrix q = a.dist == "pearson2"
                           ? sample_pearson2(rng, p, construction_from_args(a))
                           : sample_mmpearson2(rng, p);
      *os << json{{"kind", "draw"}, {"draw", matrix_to_json(q)}}.dump() << "\n";
    }
    return 0;
  }
  if (a.dist == "beta1" || a.dist == "mmbeta1") {
    const BetaIParams p{static_cast<double>(a.n), a.nu, a.m, a.beta,
                        a.tall ? BetaOrientation::tall : BetaOrientation::wide};
    p.validate(a.dist == "mmbeta1");
    header["orientation"] = a.tall ? "tall" : "wide";
    *os << header.dump() << "\n";
    for (long i = 0; i < a.count; ++i) {
      const HermMatrix h =
          a.dist == "beta1" ? sample_beta1(rng, p) : sample_mmbeta1(rng, p);
      *os << json{{"kind", "draw"}, {"draw", matrix_to_json(h.to_matrix())}}.dump()
          << "\n";
    }
    return 0;
  }
  if (a.dist == "spectral") {
    SpectralConfig c;
    c.values.assign(static_cast<std::size_t>(a.m), 0.0);  // default interior start
    c.n_dof = a.n;
    c.nu = a.nu;
    c.beta = a.beta;
    c.flavor = flavor_from_string(a.flavor);
    SpectralSampleOptions opts;
    opts.burn_in = a.burn_in;
    opts.thin = a.thin;
    opts.step_size = a.step;
    header["flavor"] = a.flavor;
    header["burn_in"] = a.burn_in;
    header["thin"] = a.thin;
    const auto result = sample_spectral(rng, c, static_cast<int>(a.count), opts);
    header["acceptance_rate"] = result.acceptance_rate;
    header["step_size"] = result.step_size;
    *os << header.dump() << "\n";
    for (const auto& draw : result.draws) {
      *os << json{{"kind", "draw"}, {"values", draw}}.dump() << "\n";
    }
    return 0;
  }
  throw ConfigError("unknown distribution '" + a.dist +
                    "' (expected pearson2, mmpearson2, beta1, mmbeta1, spectral)");
}

// ---------------------------------------------------------------------------
// density

struct DensityArgs {
  std::string file;
  std::string out = "-";
  // Optional cross-checks against the file contents; mismatch is a schema
  // error (exit 2).
  std::optional<std::string> dist;
  std::optional<int> beta;
  std::optional<double> nu;
};

double density_from_config(const json& cfg) {
  if (!cfg.is_object()) throw ConfigError("density config must be a JSON object");
  for (const auto& key : {"dist", "beta", "nu"}) {
    if (!cfg.contains(key)) {
      throw ConfigError(std::string("density config needs field '") + key + "'");
    }
  }
  const std::string dist = cfg["dist"].get<std::string>();
  if (!cfg["beta"].is_number_integer()) throw ConfigError("beta must be an integer");
  const int beta = cfg["beta"].get<int>();
  if (!cfg["nu"].is_number()) throw ConfigError("nu must be a number");
  const double nu = cfg["nu"].get<double>();

  if (dist == "pearson2" || dist == "mmpearson2") {
    if (!cfg.contains("point")) throw ConfigError("density config needs field 'point'");
    const Matrix q = matrix_from_json(cfg["point"]);
    if (q.beta() != beta) {
      throw ConfigError("beta mismatch between config and point matrix");
    }
    PearsonIIParams p;
    p.nu = nu;
    p.kind = dist == "pearson2" ? PearsonKind::matricvariate
                                : PearsonKind::matrix_multivariate;
    p.mu = cfg.contains("mu") ? matrix_from_json(cfg["mu"])
                              : Matrix(beta, q.rows(), q.cols());
    p.scale_left = cfg.contains("scale_left") ? herm_from_json(cfg["scale_left"])
                                              : HermMatrix::identity(beta, q.rows());
    p.scale_right = cfg.contains("scale_right") ? herm_from_json(cfg["scale_right"])
                                                : HermMatrix::identity(beta, q.cols());
    return dist == "pearson2" ? pearson2_logpdf(q, p) : mmpearson2_logpdf(q, p);
  }
  if (dist == "beta1" || dist == "mmbeta1") {
    if (!cfg.contains("point") || !cfg.contains("n")) {
      throw ConfigError("density config needs fields 'point' and 'n'");
    }
    const HermMatrix b = herm_from_json(cfg["point"]);
    if (b.beta() != beta) {
      throw ConfigError("beta mismatch between config and point matrix");
    }
    const double n_dof = cfg["n"].get<double>();
    const std::string orientation =
        cfg.contains("orientation") ? cfg["orientation"].get<std::string>() : "wide";
    BetaIParams p;
    p.n_dof = n_dof;
    p.nu = nu;
    p.beta = beta;
    if (orientation == "wide") {
      p.orientation = BetaOrientation::wide;
      p.m = b.dim();
    } else if (orientation == "tall") {
      p.orientation = BetaOrientation::tall;
      if (!cfg.contains("m")) throw ConfigError("tall orientation needs field 'm'");
      p.m = cfg["m"].get<int>();
    } else {
      throw ConfigError("orientation must be 'wide' or 'tall'");
    }
    return dist == "beta1" ? beta1_logpdf(b, p) : mmbeta1_logpdf(b, p);
  }
  if (dist == "spectral") {
    for (const auto& key : {"values", "n", "flavor"}) {
      if (!cfg.contains(key)) {
        throw ConfigError(std::string("spectral density config needs field '") + key +
                          "'");
      }
    }
    if (!cfg["values"].is_array()) throw ConfigError("values must be an array");
    SpectralConfig c;
    for (const auto& v : cfg["values"]) {
      if (!v.is_number()) throw ConfigError("values must be numbers");
      c.values.push_back(v.get<double>());
    }
    c.n_dof = cfg["n"].get<double>();
    c.nu = nu;
    c.beta = beta;
    c.flavor = flavor_from_string(cfg["flavor"].get<std::string>());
    return spectral_logpdf_total(c);
  }
  throw ConfigError("unknown distribution '" + dist + "'");
}

int cmd_density(const DensityArgs& a) {
  std::ifstream in(a.file);
  if (!in) throw ConfigError("cannot open density config: " + a.file);
  json cfg;
  try {
    in >> cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("cannot parse density config: ") + e.what());
  }
  if (cfg.is_object()) {
    if (a.dist && (!cfg.contains("dist") || cfg["dist"] != *a.dist)) {
      throw ConfigError("dist mismatch between --dist flag and config file");
    }
    if (a.beta && (!cfg.contains("beta") || cfg["beta"] != *a.beta)) {
      throw ConfigError("beta mismatch between --beta flag and config file");
    }
    if (a.nu && (!cfg.contains("nu") || cfg["nu"].get<double>() != *a.nu)) {
      throw ConfigError("nu mismatch between --nu flag and config file");
    }
  }
  const double lp = density_from_config(cfg);
  std::ostream* os = nullptr;
  auto file = open_out(a.out, &os);
  *os << logpdf_to_json(lp).dump() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// tabulate

struct TabulateArgs {
  int beta = 1;
  int m = 1;
  int n = 1;
  std::vector<double> a_values;
  double b = 1.0;
  std::string out = "-";
};

int cmd_tabulate(const TabulateArgs& t) {
  if (t.a_values.empty()) throw ConfigError("tabulate needs at least one --a value");
  std::ostream* os = nullptr;
  auto file = open_out(t.out, &os);
  *os << "beta,m,n,a,b,log_mgamma,log_mbeta,log_stiefel_volume\n";
  os->precision(12);
  for (const double a : t.a_values) {
    auto cell = [&](auto&& compute) -> std::string {
      try {
        std::ostringstream v;
        v.precision(12);
        v << compute();
        return v.str();
      } catch (const DomainError&) {
        return "DOMAIN_ERROR";
      } catch (const ParameterError&) {
        return "DOMAIN_ERROR";
      }
    };
    *os << t.beta << "," << t.m << "," << t.n << "," << a << "," << t.b << ","
        << cell([&] { return log_mgamma(t.beta, t.m, a); }) << ","
        << cell([&] { return log_mbeta(t.beta, t.m, a, t.b); }) << ","
        << cell([&] { return log_stiefel_volume(t.beta, t.m, t.n); }) << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyArgs {
  std::string config_path;
  std::string out = "-";
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::optional<std::string> suite;
};

SuiteConfig suite_config_from_file(const std::string& path) {
  SuiteConfig cfg;
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open suite config: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("cannot parse suite config: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("suite config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "suite") {
      if (!value.is_string()) throw ConfigError("suite must be a string");
      cfg.suite = value.get<std::string>();
    } else if (key == "seed") {
      if (!value.is_number_unsigned() && !value.is_number_integer()) {
        throw ConfigError("seed must be an integer");
      }
      cfg.seed = value.get<std::uint64_t>();
    } else if (key == "jobs") {
      if (!value.is_number_integer()) throw ConfigError("jobs must be an integer");
      cfg.jobs = value.get<int>();
    } else if (key == "tests") {
      if (!value.is_array()) throw ConfigError("tests must be an array of names");
      std::vector<std::string> names;
      for (const auto& t : value) {
        if (!t.is_string()) throw ConfigError("tests must be an array of names");
        names.push_back(t.get<std::string>());
      }
      cfg.tests = std::move(names);
    } else {
      throw ConfigError("unknown suite config field: " + key);
    }
  }
  return cfg;
}

int cmd_verify(const VerifyArgs& a) {
  SuiteConfig cfg;
  if (!a.config_path.empty()) cfg = suite_config_from_file(a.config_path);
  if (a.seed) cfg.seed = *a.seed;
  if (a.jobs) cfg.jobs = *a.jobs;
  if (a.suite) cfg.suite = *a.suite;

  const SuiteResult result = run_suite(cfg);

  for (const auto& r : result.reports) {
    std::cerr << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.kind << "="
              << r.value << ", threshold=" << r.threshold
              << (r.retried ? ", retried" : "") << ")\n";
  }
  std::cerr << (result.passed ? "SUITE PASSED" : "SUITE FAILED") << " ("
            << result.reports.size() << " tests)\n";

  std::ostream* os = nullptr;
  auto file = open_out(a.out, &os);
  *os << suite_to_json(result).dump(2) << "\n";
  return result.passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Matrix Pearson type II and beta type I distributions over real normed "
      "division algebras: samplers, densities, verification, tabulation"};
  app.require_subcommand(1);

  SampleArgs sample;
  auto* s = app.add_subcommand("sample", "Draw samples and write JSONL with a header");
  s->add_option("--dist", sample.dist,
                "pearson2 | mmpearson2 | beta1 | mmbeta1 | spectral")
      ->required();
  s->add_option("--beta", sample.beta, "algebra dimension 1, 2, 4 (8: spectral only)")
      ->required();
  s->add_option("--m", sample.m, "rows (order for beta1/spectral)")->required();
  s->add_option("--n", sample.n, "columns (degrees of freedom for beta1/spectral)")
      ->required();
  s->add_option("--nu", sample.nu, "degrees of freedom")->required();
  s->add_option("--count", sample.count, "number of draws");
  s->add_option("--seed", sample.seed, "RNG seed");
  s->add_option("--out", sample.out, "output path ('-' = stdout)");
  s->add_option("--method", sample.method,
                "pearson2 construction: left-quotient | right-quotient | elliptical");
  s->add_option("--elliptical-df", sample.elliptical_df,
                "matrix-t degrees of freedom for --method elliptical (0 = normal)");
  s->add_flag("--tall", sample.tall, "tall orientation for beta1/mmbeta1");
  s->add_option("--flavor", sample.flavor,
                "spectral flavor: singular-pearson | singular-mm | eigen-beta | eigen-mm");
  s->add_option("--burn-in", sample.burn_in, "spectral chain burn-in steps");
  s->add_option("--thin", sample.thin, "spectral chain thinning");
  s->add_option("--step", sample.step, "spectral proposal step (0 = auto-tuned)");

  DensityArgs density;
  auto* d = app.add_subcommand("density", "Evaluate a log density from a JSON config");
  d->add_option("--file", density.file, "JSON config with dist, parameters, and point")
      ->required();
  d->add_option("--out", density.out, "output path ('-' = stdout)");
  std::string d_dist;
  int d_beta = 0;
  double d_nu = 0.0;
  auto* d_dist_opt = d->add_option("--dist", d_dist, "cross-check dist against the file");
  auto* d_beta_opt = d->add_option("--beta", d_beta, "cross-check beta against the file");
  auto* d_nu_opt = d->add_option("--nu", d_nu, "cross-check nu against the file");

  TabulateArgs tab;
  auto* t = app.add_subcommand(
      "tabulate", "CSV of log gamma / log beta / log Stiefel volume constants");
  t->add_option("--beta", tab.beta, "algebra dimension")->required();
  t->add_option("--m", tab.m, "matrix order")->required();
  t->add_option("--n", tab.n, "Stiefel column count")->required();
  t->add_option("--a", tab.a_values, "first arguments (one row each)")->required();
  t->add_option("--b", tab.b, "second argument of the beta function");
  t->add_option("--out", tab.out, "output path ('-' = stdout)");

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "Run the verification suite");
  v->add_option("--config", verify.config_path,
                "JSON suite config {suite, seed, jobs, tests}");
  v->add_option("--out", verify.out, "report path ('-' = stdout)");
  std::uint64_t v_seed = 0;
  int v_jobs = 0;
  std::string v_suite;
  auto* v_seed_opt = v->add_option("--seed", v_seed, "override the suite seed");
  auto* v_jobs_opt = v->add_option("--jobs", v_jobs, "parallel test executions");
  auto* v_suite_opt = v->add_option("--suite", v_suite, "suite name for the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (s->parsed()) return cmd_sample(sample);
    if (d->parsed()) {
      if (d_dist_opt->count() > 0) density.dist = d_dist;
      if (d_beta_opt->count() > 0) density.beta = d_beta;
      if (d_nu_opt->count() > 0) density.nu = d_nu;
      return cmd_density(density);
    }
    if (t->parsed()) return cmd_tabulate(tab);
    if (v->parsed()) {
      if (v_seed_opt->count() > 0) verify.seed = v_seed;
      if (v_jobs_opt->count() > 0) verify.jobs = v_jobs;
      if (v_suite_opt->count() > 0) verify.suite = v_suite;
      return cmd_verify(verify);
    }
  } catch (const DiagnosticsError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    // Parameter, domain, dimension, config, support, and degeneracy errors.
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
