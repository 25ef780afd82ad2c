#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "fadecap/experiment.hpp"

using namespace fadecap;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("fadecap_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

fs::path write_config(const TempDir& dir, const std::string& name,
                      const std::string& body) {
  const fs::path p = dir.path / name;
  std::ofstream out(p, std::ios::binary);
  out << body;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int config_error_line(const fs::path& p, const std::string& kind) {
  try {
    (void)parse_config(p, kind);
  } catch (const ConfigError& e) {
    return e.line;
  }
  return -1;
}

}  // namespace

TEST_CASE("known experiment kinds") {
  CHECK(is_known_kind("capacity"));
  CHECK(is_known_kind("infodensity-variance"));
  CHECK(is_known_kind("lag-decay"));
  CHECK(is_known_kind("tail"));
  CHECK(is_known_kind("feinstein"));
  CHECK(is_known_kind("selftest"));
  CHECK_FALSE(is_known_kind("capacityy"));
  CHECK_FALSE(is_known_kind(""));
}

TEST_CASE("config parsing happy path") {
  TempDir dir;
  const fs::path p = write_config(dir, "cap.cfg",
                                  "# capacity sweep\n"
                                  "kind = capacity\n"
                                  "n_t = 2\n"
                                  "n_r = 3\n"
                                  "alpha = 0.5\n"
                                  "sigma2 = 0.25   # inline comment\n"
                                  "p = 2.0\n"
                                  "\n"
                                  "snr_grid = 0.5, 1, 2\n"
                                  "solver_samples = 1234\n"
                                  "solver_iterations = 7\n"
                                  "solver_step = 0.05\n"
                                  "solver_tolerance = 1e-4\n"
                                  "solver_restarts = 2\n"
                                  "solver_final_samples = 999\n"
                                  "trials = 500\n"
                                  "seed = 42\n"
                                  "threads = 3\n");
  const ExperimentConfig cfg = parse_config(p, "capacity");
  CHECK(cfg.kind == "capacity");
  CHECK(cfg.params.n_t == 2);
  CHECK(cfg.params.n_r == 3);
  CHECK(cfg.params.alpha == 0.5);
  CHECK(cfg.params.sigma2 == 0.25);
  CHECK(cfg.params.p == 2.0);
  REQUIRE(cfg.snr_grid.size() == 3);
  CHECK(cfg.snr_grid[1] == 1.0);
  CHECK(cfg.solver.samples_per_iteration == 1234);
  CHECK(cfg.solver.max_iterations == 7);
  CHECK(cfg.solver.step_size == 0.05);
  CHECK(cfg.solver.tolerance == 1e-4);
  CHECK(cfg.solver.restarts == 2);
  CHECK(cfg.solver.final_samples == 999);
  CHECK(cfg.trials == 500);
  CHECK(cfg.seed == 42);
  CHECK(cfg.threads == 3);
  CHECK(cfg.raw.front().first == "kind");
  CHECK(cfg.raw.back().second == "3");
}

TEST_CASE("config errors carry line numbers") {
  TempDir dir;
  CHECK(config_error_line(write_config(dir, "a.cfg",
                                       "kind = tail\n"
                                       "bogus_key = 1\n"),
                          "tail") == 2);
  CHECK(config_error_line(write_config(dir, "b.cfg",
                                       "n_t = 1\n"
                                       "\n"
                                       "alpha = fast\n"),
                          "tail") == 3);
  CHECK(config_error_line(write_config(dir, "c.cfg", "alpha 0.5\n"), "tail") == 1);
  CHECK(config_error_line(write_config(dir, "d.cfg", "alpha =\n"), "tail") == 1);
  CHECK(config_error_line(write_config(dir, "e.cfg", "trials = 10x\n"), "tail") == 1);
  // Declared kind must match the subcommand.
  CHECK(config_error_line(write_config(dir, "f.cfg", "kind = capacity\n"), "tail") == 1);
  // Out-of-range channel parameter points at its own line.
  CHECK(config_error_line(write_config(dir, "g.cfg",
                                       "n_grid = 4\n"
                                       "delta_over_rho_grid = 0.5\n"
                                       "alpha = 1.0\n"),
                          "tail") == 3);
  // Missing file and missing required grids are file-level errors.
  CHECK(config_error_line(dir.path / "missing.cfg", "tail") == 0);
  CHECK(config_error_line(write_config(dir, "h.cfg", "alpha = 0.5\n"), "tail") == 0);
  CHECK_THROWS_AS((void)parse_config(dir.path / "x.cfg", "nonsense"), ConfigError);
}

TEST_CASE("config validation is kind aware") {
  TempDir dir;
  // feinstein: beta must sit strictly inside (0, p).
  CHECK(config_error_line(write_config(dir, "a.cfg",
                                       "n_grid = 8\n"
                                       "rate_grid = 0.3\n"
                                       "p = 1.0\n"
                                       "beta = 1.0\n"),
                          "feinstein") == 4);
  // variance: q_trace may not exceed the budget.
  CHECK(config_error_line(write_config(dir, "b.cfg",
                                       "block_lengths = 4\n"
                                       "p = 1.0\n"
                                       "q_trace = 1.5\n"),
                          "infodensity-variance") == 3);
  // capacity without a grid.
  CHECK(config_error_line(write_config(dir, "c.cfg", "p = 1.0\n"), "capacity") == 0);
}

TEST_CASE("capacity run writes the documented csv and manifest") {
  TempDir dir;
  const fs::path p = write_config(dir, "cap.cfg",
                                  "kind = capacity\n"
                                  "snr_grid = 1.0\n"
                                  "solver_samples = 2000\n"
                                  "solver_iterations = 8\n"
                                  "trials = 100\n"
                                  "seed = 5\n");
  ExperimentConfig cfg = parse_config(p, "capacity");
  cfg.out_dir = dir.path / "out";
  CHECK(run_experiment(cfg) == 0);

  const std::string csv = slurp(cfg.out_dir / "capacity.csv");
  CHECK(csv.rfind("n_t,n_r,alpha,snr,capacity_bits,stderr,oracle_bits\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);  // header + one row

  const std::string manifest = slurp(cfg.out_dir / "capacity.manifest.json");
  CHECK(manifest.find("\"kind\": \"capacity\"") != std::string::npos);
  CHECK(manifest.find("\"master_seed\": 5") != std::string::npos);
  CHECK(manifest.find("\"solver_samples\": \"2000\"") != std::string::npos);
  CHECK(manifest.find("\"wall_time_seconds\"") != std::string::npos);
}

TEST_CASE("csv bytes are identical across reruns and thread counts") {
  TempDir dir;
  const std::string body =
      "kind = lag-decay\n"
      "alpha = 0.49\n"
      "max_lag = 3\n"
      "trials = 2000\n"
      "seed = 11\n";
  const fs::path p = write_config(dir, "lag.cfg", body);

  ExperimentConfig cfg = parse_config(p, "lag-decay");
  cfg.out_dir = dir.path / "one";
  cfg.threads = 1;
  CHECK(run_experiment(cfg) == 0);
  ExperimentConfig cfg8 = parse_config(p, "lag-decay");
  cfg8.out_dir = dir.path / "eight";
  cfg8.threads = 8;
  CHECK(run_experiment(cfg8) == 0);
  ExperimentConfig again = parse_config(p, "lag-decay");
  again.out_dir = dir.path / "again";
  CHECK(run_experiment(again) == 0);

  const std::string a = slurp(dir.path / "one" / "lag-decay.csv");
  const std::string b = slurp(dir.path / "eight" / "lag-decay.csv");
  const std::string c = slurp(dir.path / "again" / "lag-decay.csv");
  CHECK(a == b);
  CHECK(a == c);
  CHECK(std::count(a.begin(), a.end(), '\n') == 4);  // header + three lags
  CHECK(a.rfind("alpha,lag,cov,stderr\n", 0) == 0);
}

TEST_CASE("remaining csv headers match their contracts") {
  TempDir dir;
  {
    ExperimentConfig cfg = parse_config(
        write_config(dir, "var.cfg",
                     "kind = infodensity-variance\nblock_lengths = 2, 4\ntrials = 200\n"),
        "infodensity-variance");
    cfg.out_dir = dir.path / "var";
    CHECK(run_experiment(cfg) == 0);
    CHECK(slurp(cfg.out_dir / "infodensity-variance.csv")
              .rfind("alpha,n,mean_bits,var,trials\n", 0) == 0);
  }
  {
    ExperimentConfig cfg = parse_config(
        write_config(dir, "tail.cfg",
                     "kind = tail\nn_grid = 2\ndelta_over_rho_grid = 0.5\ntrials = 500\n"),
        "tail");
    cfg.out_dir = dir.path / "tail";
    CHECK(run_experiment(cfg) == 0);
    CHECK(slurp(cfg.out_dir / "tail.csv").rfind("n,delta_over_rho,empirical,bound\n", 0) ==
          0);
  }
  {
    ExperimentConfig cfg = parse_config(
        write_config(dir, "fein.cfg",
                     "kind = feinstein\nn_grid = 8\nrate_grid = 0.25\ntrials = 300\n"
                     "beta = 0.25\nerror_trials = 100\n"),
        "feinstein");
    cfg.out_dir = dir.path / "fein";
    CHECK(run_experiment(cfg) == 0);
    CHECK(slurp(cfg.out_dir / "feinstein.csv")
              .rfind("n,rate_bits,gamma,term1,term2_mc,term2_analytic,term3,total,"
                     "empirical_error\n",
                     0) == 0);
  }
}

TEST_CASE("selftest battery passes") {
  std::ostringstream sink;
  CHECK(run_selftest(1, 1, sink) == 0);
  CHECK(sink.str().find("FAIL") == std::string::npos);
  CHECK(sink.str().find("ok ") != std::string::npos);
}
