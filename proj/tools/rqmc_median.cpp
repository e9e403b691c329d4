// rqmc-median: experiment driver for nested vs linear scrambling with
// average and median-of-replicates estimators.
//
//   rqmc-median <histogram|convergence|variance|acceptance> [--config FILE] [overrides...]
//
// Exit codes: 0 success, 1 acceptance failure or runtime error, 2 usage error.

#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "rqmc/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Randomized QMC experiments: nested vs linear scrambling, average vs median estimators"};
  std::string mode_text;
  std::string config_path;
  app.add_option("mode", mode_text, "histogram | convergence | variance | acceptance")->required();
  app.add_option("--config", config_path, "key=value configuration file");

  // Override keys, applied after the config file in this order.
  const std::vector<std::pair<std::string, std::string>> keys = {
      {"seed", "master seed"},
      {"out", "output directory"},
      {"scramblers", "comma list: nested,jittered,matousek,tezuka,striped"},
      {"integrands", "comma list: f1,f2,linear,constant"},
      {"m", "comma list of m (N = base^m)"},
      {"r", "comma list of replicate counts"},
      {"reps", "repetitions per cell"},
      {"shift", "digital shift for linear kinds: on|off"},
      {"base", "digit base"},
      {"depth", "digit depth (0 = default)"},
      {"threads", "worker threads (0 = all cores)"},
      {"bins", "histogram bins"},
      {"criteria", "acceptance criteria to run, comma list of 1..10"},
  };
  std::vector<std::optional<std::string>> values(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) app.add_option("--" + keys[i].first, values[i], keys[i].second);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const rqmc::Mode mode = rqmc::parse_mode(mode_text);
    rqmc::ExperimentConfig cfg = rqmc::ExperimentConfig::defaults(mode);
    if (!config_path.empty()) rqmc::load_config_file(cfg, config_path);
    for (std::size_t i = 0; i < keys.size(); ++i) {
      if (values[i]) cfg.set(keys[i].first, *values[i]);
    }
    cfg.validate();
    switch (mode) {
      case rqmc::Mode::Histogram: rqmc::run_histogram_mode(cfg, std::cerr); break;
      case rqmc::Mode::Convergence: rqmc::run_convergence_mode(cfg, std::cerr); break;
      case rqmc::Mode::Variance: rqmc::run_variance_mode(cfg, std::cerr); break;
      case rqmc::Mode::Acceptance: return rqmc::run_acceptance_mode(cfg, std::cout, std::cerr) ? 0 : 1;
    }
  } catch (const rqmc::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n" << app.help();
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
