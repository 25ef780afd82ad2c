#include "fadecap/experiment.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "fadecap/achievability.hpp"
#include "fadecap/bounds.hpp"
#include "fadecap/infodensity.hpp"

namespace fadecap {

namespace {

std::string g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& v, int line) {
  std::size_t pos = 0;
  double value;
  try {
    value = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError(line, "expected a number, got '" + v + "'");
  }
  if (pos != v.size()) throw ConfigError(line, "trailing characters after number '" + v + "'");
  return value;
}

std::uint64_t parse_u64(const std::string& v, int line) {
  std::size_t pos = 0;
  unsigned long long value;
  try {
    value = std::stoull(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError(line, "expected a nonnegative integer, got '" + v + "'");
  }
  if (pos != v.size())
    throw ConfigError(line, "trailing characters after integer '" + v + "'");
  return value;
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(v);
  while (std::getline(in, cur, ',')) parts.push_back(trim(cur));
  return parts;
}

std::vector<double> parse_double_list(const std::string& v, int line) {
  std::vector<double> out;
  for (const auto& p : split_list(v)) out.push_back(parse_double(p, line));
  if (out.empty()) throw ConfigError(line, "expected a non-empty list");
  return out;
}

std::vector<std::size_t> parse_size_list(const std::string& v, int line) {
  std::vector<std::size_t> out;
  for (const auto& p : split_list(v)) out.push_back(parse_u64(p, line));
  if (out.empty()) throw ConfigError(line, "expected a non-empty list");
  return out;
}

const std::vector<std::string> kKinds = {
    "capacity", "infodensity-variance", "lag-decay", "tail", "feinstein", "selftest"};

}  // namespace

bool is_known_kind(const std::string& kind) {
  for (const auto& k : kKinds)
    if (k == kind) return true;
  return false;
}

ExperimentConfig parse_config(const std::filesystem::path& path, const std::string& kind) {
  if (!is_known_kind(kind)) throw ConfigError(0, "unknown experiment kind '" + kind + "'");
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open config file '" + path.string() + "'");

  ExperimentConfig cfg;
  cfg.kind = kind;
  std::map<std::string, int> key_line;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(lineno, "expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(lineno, "empty key");
    if (value.empty()) throw ConfigError(lineno, "empty value for key '" + key + "'");
    cfg.raw.emplace_back(key, value);
    key_line[key] = lineno;

    if (key == "kind") {
      if (value != kind)
        throw ConfigError(lineno, "config kind '" + value + "' does not match subcommand '" + kind + "'");
    } else if (key == "n_t") {
      cfg.params.n_t = static_cast<int>(parse_u64(value, lineno));
    } else if (key == "n_r") {
      cfg.params.n_r = static_cast<int>(parse_u64(value, lineno));
    } else if (key == "alpha") {
      cfg.params.alpha = parse_double(value, lineno);
    } else if (key == "sigma2") {
      cfg.params.sigma2 = parse_double(value, lineno);
    } else if (key == "p") {
      cfg.params.p = parse_double(value, lineno);
    } else if (key == "trials") {
      cfg.trials = parse_u64(value, lineno);
    } else if (key == "seed") {
      cfg.seed = parse_u64(value, lineno);
    } else if (key == "threads") {
      cfg.threads = static_cast<int>(parse_u64(value, lineno));
    } else if (key == "snr_grid") {
      cfg.snr_grid = parse_double_list(value, lineno);
    } else if (key == "solver_samples") {
      cfg.solver.samples_per_iteration = parse_u64(value, lineno);
    } else if (key == "solver_iterations") {
      cfg.solver.max_iterations = parse_u64(value, lineno);
    } else if (key == "solver_step") {
      cfg.solver.step_size = parse_double(value, lineno);
    } else if (key == "solver_tolerance") {
      cfg.solver.tolerance = parse_double(value, lineno);
    } else if (key == "solver_restarts") {
      cfg.solver.restarts = parse_u64(value, lineno);
    } else if (key == "solver_final_samples") {
      cfg.solver.final_samples = parse_u64(value, lineno);
    } else if (key == "block_lengths") {
      cfg.block_lengths = parse_size_list(value, lineno);
    } else if (key == "max_lag") {
      cfg.max_lag = parse_u64(value, lineno);
    } else if (key == "q_trace") {
      cfg.q_trace = parse_double(value, lineno);
    } else if (key == "dim") {
      cfg.tail_dim = parse_u64(value, lineno);
    } else if (key == "rho") {
      cfg.tail_rho = parse_double(value, lineno);
    } else if (key == "n_grid") {
      cfg.n_grid = parse_size_list(value, lineno);
    } else if (key == "delta_over_rho_grid") {
      cfg.delta_over_rho_grid = parse_double_list(value, lineno);
    } else if (key == "rate_grid") {
      cfg.rate_grid = parse_double_list(value, lineno);
    } else if (key == "gamma") {
      cfg.gamma = parse_double(value, lineno);
    } else if (key == "beta") {
      cfg.margin_beta = parse_double(value, lineno);
    } else if (key == "error_trials") {
      cfg.error_trials = parse_u64(value, lineno);
    } else {
      throw ConfigError(lineno, "unknown key '" + key + "'");
    }
  }

  const auto line_of = [&](const char* key) {
    const auto it = key_line.find(key);
    return it == key_line.end() ? 0 : it->second;
  };
  try {
    cfg.params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(line_of("alpha"), e.what());
  }
  if (cfg.trials < 1) throw ConfigError(line_of("trials"), "trials must be positive");
  if (cfg.threads < 1) throw ConfigError(line_of("threads"), "threads must be positive");

  const auto require_positive = [&](const std::vector<double>& grid, const char* key) {
    for (double v : grid)
      if (!(v > 0.0)) throw ConfigError(line_of(key), std::string(key) + " entries must be positive");
  };
  if (cfg.kind == "capacity") {
    if (cfg.snr_grid.empty()) throw ConfigError(0, "capacity runs need snr_grid");
    require_positive(cfg.snr_grid, "snr_grid");
  } else if (cfg.kind == "infodensity-variance") {
    if (cfg.block_lengths.empty())
      throw ConfigError(0, "infodensity-variance runs need block_lengths");
    for (std::size_t n : cfg.block_lengths)
      if (n < 1) throw ConfigError(line_of("block_lengths"), "block_lengths entries must be positive");
  } else if (cfg.kind == "lag-decay") {
    if (cfg.max_lag < 1) throw ConfigError(line_of("max_lag"), "max_lag must be positive");
  } else if (cfg.kind == "tail") {
    if (cfg.n_grid.empty() || cfg.delta_over_rho_grid.empty())
      throw ConfigError(0, "tail runs need n_grid and delta_over_rho_grid");
    require_positive(cfg.delta_over_rho_grid, "delta_over_rho_grid");
    for (std::size_t n : cfg.n_grid)
      if (n < 1) throw ConfigError(line_of("n_grid"), "n_grid entries must be positive");
    if (cfg.tail_dim < 1) throw ConfigError(line_of("dim"), "dim must be positive");
    if (!(cfg.tail_rho > 0.0)) throw ConfigError(line_of("rho"), "rho must be positive");
  } else if (cfg.kind == "feinstein") {
    if (cfg.n_grid.empty() || cfg.rate_grid.empty())
      throw ConfigError(0, "feinstein runs need n_grid and rate_grid");
    require_positive(cfg.rate_grid, "rate_grid");
    for (std::size_t n : cfg.n_grid)
      if (n < 1) throw ConfigError(line_of("n_grid"), "n_grid entries must be positive");
    if (!(cfg.gamma > 0.0)) throw ConfigError(line_of("gamma"), "gamma must be positive");
    if (!(cfg.margin_beta > 0.0 && cfg.margin_beta < cfg.params.p))
      throw ConfigError(line_of("beta"), "beta must lie strictly between 0 and p");
  }
  if (cfg.q_trace < 0.0 || cfg.q_trace > cfg.params.p)
    throw ConfigError(line_of("q_trace"), "q_trace must lie in (0, p]");
  return cfg;
}

namespace {

CovarianceMatrix isotropic_covariance(double trace, int n_t, double budget) {
  return CovarianceMatrix(
      trace / n_t * ComplexMatrix::Identity(n_t, n_t), budget);
}

struct RunArtifacts {
  std::vector<std::string> csv_lines;
  nlohmann::ordered_json extra;  // kind-specific manifest additions
};

RunArtifacts run_capacity(const ExperimentConfig& cfg) {
  RunArtifacts art;
  art.csv_lines.push_back("n_t,n_r,alpha,snr,capacity_bits,stderr,oracle_bits");
  for (std::size_t row = 0; row < cfg.snr_grid.size(); ++row) {
    const double snr = cfg.snr_grid[row];
    ChannelParams params = cfg.params;
    params.p = snr * params.sigma2;
    const SolveResult result =
        solve_capacity(params, cfg.solver, RngStream(cfg.seed, 100 + row), cfg.threads);
    double oracle;
    if (params.n_t == 1 && params.n_r == 1) {
      oracle = siso_capacity_quadrature(snr);
    } else {
      // Reference point for wider antenna arrays: the isotropic-input value.
      const std::size_t samples = cfg.solver.final_samples > 0
                                      ? cfg.solver.final_samples
                                      : cfg.solver.samples_per_iteration;
      oracle = phi(isotropic_covariance(params.p, params.n_t, params.p), params,
                   samples, RngStream(cfg.seed, 500 + row), cfg.threads)
                   .mean;
    }
    art.csv_lines.push_back(
        std::to_string(params.n_t) + "," + std::to_string(params.n_r) + "," +
        g12(params.alpha) + "," + g12(snr) + "," + g12(result.capacity.mean) + "," +
        g12(result.capacity.std_error) + "," + g12(oracle));
  }
  return art;
}

RunArtifacts run_variance(const ExperimentConfig& cfg) {
  RunArtifacts art;
  art.csv_lines.push_back("alpha,n,mean_bits,var,trials");
  const double qt = cfg.q_trace > 0.0 ? cfg.q_trace : cfg.params.p;
  const CovarianceMatrix q = isotropic_covariance(qt, cfg.params.n_t, cfg.params.p);
  const VarianceReport report = variance_study(
      cfg.params, q, cfg.block_lengths, cfg.trials, RngStream(cfg.seed, 100), cfg.threads);
  for (std::size_t i = 0; i < report.block_lengths.size(); ++i) {
    art.csv_lines.push_back(g12(cfg.params.alpha) + "," +
                            std::to_string(report.block_lengths[i]) + "," +
                            g12(report.means[i]) + "," + g12(report.variances[i]) + "," +
                            std::to_string(report.trials));
  }
  return art;
}

RunArtifacts run_lag_decay(const ExperimentConfig& cfg) {
  RunArtifacts art;
  art.csv_lines.push_back("alpha,lag,cov,stderr");
  const double qt = cfg.q_trace > 0.0 ? cfg.q_trace : cfg.params.p;
  const CovarianceMatrix q = isotropic_covariance(qt, cfg.params.n_t, cfg.params.p);
  const LagDecayReport report = lag_covariance_study(
      cfg.params, q, cfg.max_lag, cfg.trials, RngStream(cfg.seed, 100), cfg.threads);
  for (std::size_t i = 0; i < report.lags.size(); ++i) {
    art.csv_lines.push_back(g12(cfg.params.alpha) + "," + std::to_string(report.lags[i]) +
                            "," + g12(report.covariances[i]) + "," +
                            g12(report.std_errors[i]));
  }
  art.extra["fit_performed"] = report.fit_performed;
  if (report.fit_performed) {
    art.extra["fitted_rate"] = report.fitted_rate;
    art.extra["fitted_amplitude"] = report.fitted_amplitude;
  }
  return art;
}

RunArtifacts run_tail(const ExperimentConfig& cfg) {
  RunArtifacts art;
  art.csv_lines.push_back("n,delta_over_rho,empirical,bound");
  const ComplexMatrix cov =
      cfg.tail_rho / static_cast<double>(cfg.tail_dim) *
      ComplexMatrix::Identity(cfg.tail_dim, cfg.tail_dim);
  std::size_t row = 0;
  for (std::size_t n : cfg.n_grid) {
    for (double dr : cfg.delta_over_rho_grid) {
      TailBoundQuery query{cfg.tail_rho, dr * cfg.tail_rho, n, cov};
      query.validate();
      const double empirical = empirical_power_tail(
          query.cov, query.delta, query.n, cfg.trials, RngStream(cfg.seed, 100 + row), cfg.threads);
      const double bound = power_tail_bound(query.rho, query.delta, query.n);
      art.csv_lines.push_back(std::to_string(n) + "," + g12(dr) + "," + g12(empirical) +
                              "," + g12(bound));
      ++row;
    }
  }
  return art;
}

RunArtifacts run_feinstein(const ExperimentConfig& cfg) {
  RunArtifacts art;
  art.csv_lines.push_back(
      "n,rate_bits,gamma,term1,term2_mc,term2_analytic,term3,total,empirical_error");
  const double qt = cfg.params.p - cfg.margin_beta;
  const CovarianceMatrix q = isotropic_covariance(qt, cfg.params.n_t, cfg.params.p);
  const std::size_t error_trials = cfg.error_trials > 0 ? cfg.error_trials : cfg.trials;
  std::size_t row = 0;
  for (std::size_t n : cfg.n_grid) {
    for (double rate : cfg.rate_grid) {
      const FeinsteinBound bound =
          feinstein_rhs(cfg.params, q, n, rate, cfg.gamma, cfg.trials,
                        RngStream(cfg.seed, 100 + row), cfg.threads);
      const std::uint64_t m = message_count_for_rate(n, rate);
      const McEstimate error =
          simulate_error(cfg.params, m, n, q, cfg.gamma, error_trials,
                         RngStream(cfg.seed, 700 + row), cfg.threads);
      art.csv_lines.push_back(std::to_string(n) + "," + g12(rate) + "," + g12(cfg.gamma) +
                              "," + g12(bound.info_tail) + "," + g12(bound.power_tail_mc) +
                              "," + g12(bound.power_tail_analytic) + "," +
                              g12(bound.threshold_term) + "," + g12(bound.total()) + "," +
                              g12(error.mean));
      ++row;
    }
  }
  return art;
}

}  // namespace

int run_experiment(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  if (cfg.kind == "selftest") {
    const int failures = run_selftest(cfg.seed, cfg.threads, std::cout);
    return failures == 0 ? 0 : 1;
  }

  RunArtifacts art;
  if (cfg.kind == "capacity") {
    art = run_capacity(cfg);
  } else if (cfg.kind == "infodensity-variance") {
    art = run_variance(cfg);
  } else if (cfg.kind == "lag-decay") {
    art = run_lag_decay(cfg);
  } else if (cfg.kind == "tail") {
    art = run_tail(cfg);
  } else if (cfg.kind == "feinstein") {
    art = run_feinstein(cfg);
  } else {
    throw ConfigError(0, "unknown experiment kind '" + cfg.kind + "'");
  }

  std::filesystem::create_directories(cfg.out_dir);
  const std::filesystem::path csv_path = cfg.out_dir / (cfg.kind + ".csv");
  {
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write " + csv_path.string());
    for (const auto& line : art.csv_lines) csv << line << '\n';
  }

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  nlohmann::ordered_json manifest;
  manifest["kind"] = cfg.kind;
  nlohmann::ordered_json echo = nlohmann::ordered_json::object();
  for (const auto& [k, v] : cfg.raw) echo[k] = v;
  manifest["config"] = echo;
  manifest["master_seed"] = cfg.seed;
  manifest["threads"] = cfg.threads;
  manifest["versions"] = {
      {"fadecap", "0.1.0"},
      {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                    std::to_string(EIGEN_MAJOR_VERSION) + "." +
                    std::to_string(EIGEN_MINOR_VERSION)},
      {"compiler", __VERSION__},
  };
  manifest["wall_time_seconds"] = wall;
  manifest["outputs"] = {csv_path.filename().string()};
  for (auto& [k, v] : art.extra.items()) manifest[k] = v;

  const std::filesystem::path manifest_path = cfg.out_dir / (cfg.kind + ".manifest.json");
  std::ofstream mf(manifest_path, std::ios::binary);
  if (!mf) throw std::runtime_error("cannot write " + manifest_path.string());
  mf << manifest.dump(2) << '\n';
  return 0;
}

int run_selftest(std::uint64_t seed, int threads, std::ostream& out) {
  int failures = 0;
  const auto check = [&](const std::string& name, bool ok, const std::string& detail = "") {
    if (ok) {
      out << "ok " << name << '\n';
    } else {
      ++failures;
      out << "FAIL " << name << (detail.empty() ? "" : ": " + detail) << '\n';
    }
  };

  // Streams replay under copy and diverge across substream indices.
  {
    RngStream a(seed, 3);
    RngStream b = a;
    bool replay = true;
    for (int i = 0; i < 64; ++i) replay = replay && a.normal() == b.normal();
    RngStream c(seed, 3);
    const bool diverges = c.substream(1).normal() != c.substream(2).normal();
    check("rng-replay-and-substreams", replay && diverges);
  }

  // Ginibre entries have unit second moment.
  {
    RngStream rng(seed, 11);
    double sum = 0.0;
    const int draws = 20000;
    for (int i = 0; i < draws; ++i) sum += std::norm(rng.cnormal());
    check("ginibre-second-moment", std::abs(sum / draws - 1.0) < 0.05,
          g12(sum / draws));
  }

  // Both gain constructions agree along a trajectory.
  {
    ChannelParams params{2, 2, 0.7, 1.0, 2.0};
    RngStream rng(seed, 17);
    const GainTrajectory traj = evolve_gains(params, 24, rng);
    const GainTrajectory closed =
        gains_closed_form(traj.gains.front(), traj.innovations, params.alpha);
    double worst = 0.0;
    for (std::size_t i = 0; i < closed.gains.size(); ++i)
      worst = std::max(worst, (closed.gains[i] - traj.gains[i]).cwiseAbs().maxCoeff());
    check("gain-recursion-vs-closed-form", worst < 1e-10, g12(worst));
  }

  // Marginal covariance stays the identity along the trajectory.
  {
    ChannelParams params{2, 2, 0.9, 1.0, 2.0};
    const StationarityReport report =
        marginal_stationarity_report(params, 12, 4096, RngStream(seed, 19), threads);
    check("gain-marginal-stationarity",
          !report.insufficient_samples && report.flagged_indices.empty(),
          std::to_string(report.flagged_indices.size()) + " flagged");
  }

  // Monte Carlo average of the log-det functional matches the closed-form
  // scalar average within a few standard errors.
  {
    ChannelParams params{1, 1, 0.5, 1.0, 1.0};
    const CovarianceMatrix q(ComplexMatrix::Identity(1, 1), 1.0);
    const McEstimate est = phi(q, params, 200000, RngStream(seed, 23), threads);
    const double oracle = siso_capacity_quadrature(1.0);
    check("scalar-average-vs-quadrature",
          std::abs(est.mean - oracle) < 5.0 * est.std_error + 1e-9,
          g12(est.mean) + " vs " + g12(oracle));
  }

  // Feasible-set projection clips negative eigenvalues and meets the budget.
  {
    ComplexMatrix a(2, 2);
    a << 3.0, 0.0, 0.0, -1.0;
    const CovarianceMatrix proj = project_to_feasible(a, 2.0);
    const double d0 = std::abs(proj.matrix()(0, 0).real() - 2.0);
    const double d1 = std::abs(proj.matrix()(1, 1));
    check("projection-kkt-example", d0 < 1e-9 && d1 < 1e-9);
  }

  // The two information-density routes agree pointwise.
  {
    ChannelParams params{2, 3, 0.5, 0.8, 2.0};
    RngStream rng(seed, 29);
    const CovarianceMatrix q = isotropic_covariance(params.p, params.n_t, params.p);
    CovarianceFactor input(q.matrix());
    double worst = 0.0;
    for (int i = 0; i < 32; ++i) {
      ComplexMatrix g(params.n_r, params.n_t);
      fill_ginibre(g, rng);
      const ComplexVector t = input.sample(rng);
      ComplexVector noise(params.n_r);
      for (int r = 0; r < params.n_r; ++r)
        noise(r) = std::sqrt(params.sigma2) * rng.cnormal();
      const ComplexVector z = g * t + noise;
      const double fast = info_density_symbol(g, t, z, q, params.sigma2);
      const double direct = density_ratio_direct(g, t, z, q, params.sigma2);
      worst = std::max(worst, std::abs(fast - direct));
    }
    check("info-density-two-routes", worst < 1e-8, g12(worst));
  }

  // Tail bound dominates the simulated overflow probability.
  {
    const ComplexMatrix cov = 0.5 * ComplexMatrix::Identity(2, 2);
    const double rho = 1.0, delta = 0.5;
    const double emp = empirical_power_tail(cov, delta, 4, 20000, RngStream(seed, 31), threads);
    const double bound = power_tail_bound(rho, delta, 4);
    check("power-tail-bound-dominates", emp <= bound + 1e-12,
          g12(emp) + " vs " + g12(bound));
  }

  // Exponent margin at the reference point.
  {
    const double expected = 1.0 / std::log(2.0) - 1.0;
    check("rate-margin-reference-value", std::abs(beta_hat(2.0, 1.0) - expected) < 1e-12);
  }

  // Deterministic matrix-analysis battery has no violations.
  {
    const InequalityReport report = check_matrix_inequalities(RngStream(seed, 37), 64, 1e-9);
    check("matrix-inequality-battery", report.total_violations() == 0,
          std::to_string(report.total_violations()) + " violations");
  }

  // Double-sum closed forms against the n=3 hand computation.
  {
    const GeometricSums sums = geometric_double_sums(3, 0.5);
    check("geometric-double-sums",
          std::abs(sums.lower_sum - 1.25) < 1e-12 && std::abs(sums.bound - 6.0) < 1e-12);
  }

  // Moment-generating function rejects arguments at or beyond the trace edge.
  {
    const ComplexMatrix cov = ComplexMatrix::Identity(2, 2);
    bool threw = false;
    try {
      mgf_norm_sq(cov, 0.5);
    } catch (const std::domain_error&) {
      threw = true;
    }
    check("mgf-domain-edge", threw);
  }

  // At a low rate the threshold decoder recovers the sent message.
  {
    ChannelParams params{1, 1, 0.0, 1.0, 1.0};
    const CovarianceMatrix q = isotropic_covariance(0.75, 1, 1.0);
    const McEstimate err =
        simulate_error(params, 4, 16, q, 0.05, 400, RngStream(seed, 41), threads);
    check("low-rate-decoding", err.mean < 0.25, g12(err.mean));
  }

  // Thread count never changes results.
  {
    ChannelParams params{2, 2, 0.3, 1.0, 2.0};
    const CovarianceMatrix q = isotropic_covariance(params.p, params.n_t, params.p);
    const McEstimate one = phi(q, params, 3 * kMcBatchSamples, RngStream(seed, 43), 1);
    const McEstimate many = phi(q, params, 3 * kMcBatchSamples, RngStream(seed, 43), 8);
    check("thread-count-invariance",
          one.mean == many.mean && one.std_error == many.std_error);
  }

  out << (failures == 0 ? "selftest passed" : "selftest FAILED") << " ("
      << failures << " failures)\n";
  return failures;
}

}  // namespace fadecap
