// Command-line front end: one subcommand per experiment kind, each driven by
// a key = value config file with optional flag overrides.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>

#include "fadecap/experiment.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out_dir;
  int threads = 0;
};

void add_experiment_subcommand(CLI::App& app, const std::string& kind,
                               const std::string& blurb, Overrides& ov,
                               std::string& selected) {
  CLI::App* sub = app.add_subcommand(kind, blurb);
  sub->add_option("--config", ov.config_path, "config file (key = value lines)")
      ->required();
  sub->add_option("--seed", ov.seed, "override the master seed")
      ->each([&ov](const std::string&) { ov.seed_set = true; });
  sub->add_option("--out", ov.out_dir, "output directory for csv + manifest");
  sub->add_option("--threads", ov.threads, "worker thread count override");
  sub->callback([&selected, kind] { selected = kind; });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fading-channel capacity and achievability experiments"};
  app.require_subcommand(1);

  Overrides ov;
  std::string selected;
  add_experiment_subcommand(app, "capacity", "numerical capacity optimization over an SNR grid",
                            ov, selected);
  add_experiment_subcommand(app, "infodensity-variance",
                            "information-density variance vs block length", ov, selected);
  add_experiment_subcommand(app, "lag-decay",
                            "lag covariance of the per-symbol log-det term", ov, selected);
  add_experiment_subcommand(app, "tail", "codeword power overflow: simulation vs bound", ov,
                            selected);
  add_experiment_subcommand(app, "feinstein",
                            "achievability bound terms and decoder error rates", ov, selected);

  CLI::App* selftest = app.add_subcommand("selftest", "run the built-in invariant battery");
  std::uint64_t selftest_seed = 1;
  int selftest_threads = 1;
  selftest->add_option("--seed", selftest_seed, "master seed");
  selftest->add_option("--threads", selftest_threads, "worker thread count");
  selftest->callback([&selected] { selected = "selftest"; });

  CLI11_PARSE(app, argc, argv);

  try {
    if (selected == "selftest") {
      return fadecap::run_selftest(selftest_seed, selftest_threads, std::cout) == 0 ? 0 : 1;
    }
    fadecap::ExperimentConfig cfg = fadecap::parse_config(ov.config_path, selected);
    if (ov.seed_set) cfg.seed = ov.seed;
    if (!ov.out_dir.empty()) cfg.out_dir = ov.out_dir;
    if (ov.threads > 0) cfg.threads = ov.threads;
    return fadecap::run_experiment(cfg);
  } catch (const fadecap::ConfigError& e) {
    std::cerr << ov.config_path << ":" << e.line << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
