#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rqmc/estimators.hpp"
#include "rqmc/integrands.hpp"
#include "rqmc/nets.hpp"
#include "rqmc/scramble.hpp"

namespace rqmc {

/// Bad configuration or command line; maps to exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Mode { Histogram, Convergence, Variance, Acceptance };

Mode parse_mode(std::string_view name);
std::string_view mode_name(Mode mode);

struct ExperimentConfig {
  Mode mode = Mode::Histogram;
  std::vector<ScramblerKind> scramblers;
  std::vector<std::string> integrands;
  std::uint32_t base = 2;
  std::vector<std::size_t> m_values;
  std::vector<std::size_t> r_values;
  std::size_t repetitions = 1;
  std::uint64_t master_seed = 20250601;
  std::filesystem::path output_dir = "rqmc_out";
  bool shift = true;
  std::size_t depth = 0;  // 0 = default for the base
  unsigned threads = 1;
  std::size_t bins = 60;
  double range_lo = -5.0;
  double range_hi = 5.0;
  std::vector<int> criteria;  // acceptance mode; empty = all

  /// Paper-scale grid for the mode (desk-scaled for convergence).
  static ExperimentConfig defaults(Mode mode);

  /// Sets one key from a config file or command-line override. Throws UsageError.
  void set(std::string_view key, std::string_view value);

  /// Rejects impossible cells (e.g. linear kind with non-prime base) before any work.
  void validate() const;

  ScramblerSpec scrambler_spec(ScramblerKind kind) const { return {kind, base, depth, shift}; }
};

/// Flat key=value file; '#' starts a comment, blank lines are ignored.
void load_config_file(ExperimentConfig& cfg, const std::filesystem::path& path);

std::vector<std::string> split_list(std::string_view text);

// ---------------------------------------------------------------------------
// Cell kernels shared by the modes and the acceptance suite. Repetition t runs
// a replicate batch under repetition_seed(master_seed, t).

/// One Q_N per repetition.
std::vector<double> single_estimates(const IntegrandSpec& f, const ScramblerSpec& spec, const NetPoints& net,
                                     std::size_t repetitions, std::uint64_t master_seed, unsigned threads);

/// One median-of-r per repetition.
std::vector<double> median_estimates(const IntegrandSpec& f, const ScramblerSpec& spec, const NetPoints& net,
                                     std::size_t r, std::size_t repetitions, std::uint64_t master_seed,
                                     unsigned threads);

// ---------------------------------------------------------------------------
// Modes. Each writes CSV files under cfg.output_dir and progress text to log;
// the returned paths are in write order.

std::vector<std::filesystem::path> run_histogram_mode(const ExperimentConfig& cfg, std::ostream& log);
std::vector<std::filesystem::path> run_convergence_mode(const ExperimentConfig& cfg, std::ostream& log);
std::vector<std::filesystem::path> run_variance_mode(const ExperimentConfig& cfg, std::ostream& log);

/// Runs the acceptance suite; prints one line per criterion to `report`.
/// Returns true when every selected criterion passed.
bool run_acceptance_mode(const ExperimentConfig& cfg, std::ostream& report, std::ostream& log);

}  // namespace rqmc
