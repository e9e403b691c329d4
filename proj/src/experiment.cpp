#include "rqmc/experiment.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rqmc/acceptance.hpp"
#include "rqmc/csv.hpp"
#include "rqmc/parallel.hpp"
#include "rqmc/stats.hpp"

namespace rqmc {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end)
    throw UsageError("invalid value '" + std::string(text) + "' for '" + std::string(key) + "'");
  return value;
}

double parse_real(std::string_view key, std::string_view text) {
  try {
    std::size_t used = 0;
    const std::string s(text);
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw UsageError("invalid value '" + std::string(text) + "' for '" + std::string(key) + "'");
  }
}

template <class T>
std::vector<T> parse_number_list(std::string_view key, std::string_view text) {
  std::vector<T> out;
  for (const auto& item : split_list(text)) out.push_back(parse_number<T>(key, item));
  if (out.empty()) throw UsageError("empty list for '" + std::string(key) + "'");
  return out;
}

bool parse_switch(std::string_view key, std::string_view text) {
  if (text == "on" || text == "true" || text == "1") return true;
  if (text == "off" || text == "false" || text == "0") return false;
  throw UsageError("'" + std::string(key) + "' expects on|off, got '" + std::string(text) + "'");
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return out;
}

void prepare_output_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir.string() + "': " + ec.message());
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

CsvRow cell_row(const ExperimentConfig& cfg, const ScramblerSpec& spec, const std::string& integrand, std::size_t m,
                std::size_t N, std::size_t r) {
  CsvRow row;
  row.scrambler = spec.label();
  row.integrand = integrand;
  row.base = cfg.base;
  row.m = m;
  row.N = N;
  row.r = r;
  row.seed = cfg.master_seed;
  return row;
}

void warn_even_r(const ExperimentConfig& cfg, std::ostream& log) {
  for (auto r : cfg.r_values) {
    if (r % 2 == 0) log << "warning: r = " << r << " is even; the median is the midpoint of the two central values\n";
  }
}

}  // namespace

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

Mode parse_mode(std::string_view name) {
  if (name == "histogram") return Mode::Histogram;
  if (name == "convergence") return Mode::Convergence;
  if (name == "variance") return Mode::Variance;
  if (name == "acceptance") return Mode::Acceptance;
  throw UsageError("unknown mode '" + std::string(name) + "' (expected histogram, convergence, variance or acceptance)");
}

std::string_view mode_name(Mode mode) {
  switch (mode) {
    case Mode::Histogram: return "histogram";
    case Mode::Convergence: return "convergence";
    case Mode::Variance: return "variance";
    case Mode::Acceptance: return "acceptance";
  }
  return "histogram";
}

ExperimentConfig ExperimentConfig::defaults(Mode mode) {
  ExperimentConfig cfg;
  cfg.mode = mode;
  cfg.integrands = {"f1", "f2"};
  cfg.scramblers = {ScramblerKind::Nested, ScramblerKind::MatousekLinear};
  switch (mode) {
    case Mode::Histogram:
      cfg.m_values = {4, 6};
      cfg.r_values = {1};
      cfg.repetitions = 10000;
      break;
    case Mode::Convergence:
      cfg.m_values = {4, 5, 6, 7, 8, 9, 10, 11, 12};
      cfg.r_values = {101};
      cfg.repetitions = 32;
      break;
    case Mode::Variance:
      cfg.scramblers = {ScramblerKind::Nested, ScramblerKind::Jittered, ScramblerKind::MatousekLinear,
                        ScramblerKind::TezukaIBinomial, ScramblerKind::OwenStriped};
      cfg.m_values = {6};
      cfg.r_values = {1};
      cfg.repetitions = 10000;
      break;
    case Mode::Acceptance:
      cfg.m_values = {6};
      cfg.r_values = {1};
      break;
  }
  return cfg;
}

void ExperimentConfig::set(std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  try {
    if (key == "scramblers") {
      scramblers.clear();
      for (const auto& name : split_list(value)) scramblers.push_back(parse_scrambler_kind(name));
    } else if (key == "integrands") {
      integrands = split_list(value);
      for (const auto& name : integrands) (void)builtin(name);
    } else if (key == "base") {
      base = parse_number<std::uint32_t>(key, value);
    } else if (key == "m") {
      m_values = parse_number_list<std::size_t>(key, value);
    } else if (key == "r") {
      r_values = parse_number_list<std::size_t>(key, value);
    } else if (key == "reps" || key == "repetitions") {
      repetitions = parse_number<std::size_t>(key, value);
    } else if (key == "seed") {
      master_seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "out") {
      output_dir = std::string(value);
    } else if (key == "shift") {
      shift = parse_switch(key, value);
    } else if (key == "depth") {
      depth = parse_number<std::size_t>(key, value);
    } else if (key == "threads") {
      threads = parse_number<unsigned>(key, value);
      if (threads == 0) threads = default_thread_count();
    } else if (key == "bins") {
      bins = parse_number<std::size_t>(key, value);
    } else if (key == "range_lo") {
      range_lo = parse_real(key, value);
    } else if (key == "range_hi") {
      range_hi = parse_real(key, value);
    } else if (key == "criteria") {
      criteria = parse_number_list<int>(key, value);
    } else {
      throw UsageError("unknown configuration key '" + std::string(key) + "'");
    }
  } catch (const UsageError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

void ExperimentConfig::validate() const {
  if (repetitions < 1) throw UsageError("reps must be >= 1");
  if (base < 2) throw UsageError("base must be >= 2");
  if (bins < 1) throw UsageError("bins must be >= 1");
  if (!(range_lo < range_hi)) throw UsageError("histogram range needs range_lo < range_hi");
  for (int c : criteria) {
    if (c < 1 || c > 10) throw UsageError("acceptance criteria are numbered 1..10, got " + std::to_string(c));
  }
  if (mode == Mode::Acceptance) return;

  if (scramblers.empty()) throw UsageError("no scramblers selected");
  if (integrands.empty()) throw UsageError("no integrands selected");
  if (m_values.empty()) throw UsageError("no m values selected");
  if (r_values.empty()) throw UsageError("no r values selected");
  for (auto r : r_values) {
    if (r < 1) throw UsageError("r must be >= 1");
  }
  for (auto kind : scramblers) {
    try {
      scrambler_spec(kind).validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  const std::size_t k = depth == 0 ? default_depth(base) : depth;
  for (auto m : m_values) {
    if (m > k) throw UsageError("m = " + std::to_string(m) + " exceeds digit depth " + std::to_string(k));
    try {
      (void)net_size(base, m);
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }
  }
  for (const auto& name : integrands) {
    IntegrandSpec f;
    try {
      f = builtin(name);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    if (mode == Mode::Histogram && !(f.exact_sigma2 > 0.0))
      throw UsageError("histogram mode rescales by sigma(f); integrand '" + name + "' has sigma = 0");
  }
  if (mode == Mode::Convergence && m_values.size() < 3) throw UsageError("convergence mode needs at least 3 m values");
}

void load_config_file(ExperimentConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path.string() + "'");
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos)
      throw UsageError(path.string() + ":" + std::to_string(line_no) + ": expected key=value");
    cfg.set(view.substr(0, eq), view.substr(eq + 1));
  }
}

std::vector<double> single_estimates(const IntegrandSpec& f, const ScramblerSpec& spec, const NetPoints& net,
                                     std::size_t repetitions, std::uint64_t master_seed, unsigned threads) {
  std::vector<double> out(repetitions);
  parallel_for(repetitions, threads, [&](std::size_t t) {
    out[t] = replicate_batch(f, spec, net, 1, repetition_seed(master_seed, t)).estimates[0];
  });
  return out;
}

std::vector<double> median_estimates(const IntegrandSpec& f, const ScramblerSpec& spec, const NetPoints& net,
                                     std::size_t r, std::size_t repetitions, std::uint64_t master_seed,
                                     unsigned threads) {
  std::vector<double> out(repetitions);
  parallel_for(repetitions, threads, [&](std::size_t t) {
    out[t] = median_estimator(replicate_batch(f, spec, net, r, repetition_seed(master_seed, t)));
  });
  return out;
}

std::vector<std::filesystem::path> run_histogram_mode(const ExperimentConfig& cfg, std::ostream& log) {
  cfg.validate();
  warn_even_r(cfg, log);
  prepare_output_dir(cfg.output_dir);
  std::vector<std::filesystem::path> written;
  for (auto kind : cfg.scramblers) {
    const ScramblerSpec spec = cfg.scrambler_spec(kind);
    for (const auto& name : cfg.integrands) {
      const IntegrandSpec f = builtin(name);
      for (auto m : cfg.m_values) {
        const NetPoints net = van_der_corput_net(cfg.base, m);
        const std::size_t N = net.size();
        for (auto r : cfg.r_values) {
          const std::vector<double> estimates = r == 1
              ? single_estimates(f, spec, net, cfg.repetitions, cfg.master_seed, cfg.threads)
              : median_estimates(f, spec, net, r, cfg.repetitions, cfg.master_seed, cfg.threads);
          const RescaledSample sample = r == 1 ? rescale_single(estimates, f.exact_integral, f.sigma(), N)
                                               : rescale_median(estimates, f.exact_integral, f.sigma(), N, r);
          const Histogram hist = histogram(sample.values, cfg.bins, cfg.range_lo, cfg.range_hi);

          const auto path = cfg.output_dir / ("hist_" + spec.label() + "_" + name + "_N" + std::to_string(N) + "_r" +
                                              std::to_string(r) + ".csv");
          auto out = open_output(path);
          CsvWriter csv(out);
          CsvRow row = cell_row(cfg, spec, name, m, N, r);
          for (std::size_t t = 0; t < estimates.size(); ++t) {
            row.rep = std::to_string(t);
            row.value = estimates[t];
            row.rescaled = sample.values[t];
            csv.write(row);
          }
          row.kind = RowKind::Hist;
          for (std::size_t i = 0; i < hist.centers.size(); ++i) {
            row.rep = std::to_string(i);
            row.value = hist.centers[i];
            row.rescaled = hist.densities[i];
            csv.write(row);
          }
          row.kind = RowKind::Summary;
          row.value.reset();
          const auto summary = [&](const char* stat, double v) {
            row.rep = stat;
            row.rescaled = v;
            csv.write(row);
          };
          summary("out_of_range", static_cast<double>(hist.out_of_range));
          if (sample.values.size() >= 2) {
            summary("mean_rescaled", mean_of(sample.values));
            summary("var_rescaled", sample_variance(sample.values));
          }
          if (sample.values.size() >= 100) summary("ks_normal", ks_statistic_normal(sample));
          finish(out, path);
          log << "wrote " << path.string() << '\n';
          written.push_back(path);
        }
      }
    }
  }
  return written;
}

std::vector<std::filesystem::path> run_convergence_mode(const ExperimentConfig& cfg, std::ostream& log) {
  cfg.validate();
  warn_even_r(cfg, log);
  prepare_output_dir(cfg.output_dir);
  const auto path = cfg.output_dir / "convergence.csv";
  auto out = open_output(path);
  CsvWriter csv(out);
  for (auto kind : cfg.scramblers) {
    const ScramblerSpec spec = cfg.scrambler_spec(kind);
    for (const auto& name : cfg.integrands) {
      const IntegrandSpec f = builtin(name);
      for (auto r : cfg.r_values) {
        std::vector<std::pair<double, double>> curve;
        for (auto m : cfg.m_values) {
          const NetPoints net = van_der_corput_net(cfg.base, m);
          const std::size_t N = net.size();
          const std::vector<double> medians =
              median_estimates(f, spec, net, r, cfg.repetitions, cfg.master_seed, cfg.threads);
          std::vector<double> errors(medians.size());
          CsvRow row = cell_row(cfg, spec, name, m, N, r);
          for (std::size_t t = 0; t < medians.size(); ++t) {
            errors[t] = std::abs(medians[t] - f.exact_integral);
            row.rep = std::to_string(t);
            row.value = medians[t];
            row.rescaled = errors[t];
            csv.write(row);
          }
          const double err = median_of(errors);
          row.kind = RowKind::Summary;
          row.rep = "abs_error";
          row.value.reset();
          row.rescaled = err;
          csv.write(row);
          curve.emplace_back(static_cast<double>(N), err);
        }
        try {
          const SlopeFit fit = fit_slope(curve);
          CsvRow row = cell_row(cfg, spec, name, 0, 0, r);
          row.m.reset();
          row.N.reset();
          row.kind = RowKind::Summary;
          row.rep = "slope";
          row.rescaled = fit.slope;
          csv.write(row);
          row.rep = "intercept";
          row.rescaled = fit.intercept;
          csv.write(row);
          log << spec.label() << ' ' << name << " r=" << r << ": slope " << format_double(fit.slope) << '\n';
        } catch (const std::invalid_argument& e) {
          log << "warning: slope fit skipped for " << spec.label() << ' ' << name << " r=" << r << ": " << e.what()
              << '\n';
        }
      }
    }
  }
  finish(out, path);
  log << "wrote " << path.string() << '\n';
  return {path};
}

std::vector<std::filesystem::path> run_variance_mode(const ExperimentConfig& cfg, std::ostream& log) {
  cfg.validate();
  prepare_output_dir(cfg.output_dir);
  const auto path = cfg.output_dir / "variance.csv";
  auto out = open_output(path);
  CsvWriter csv(out);
  for (auto kind : cfg.scramblers) {
    const ScramblerSpec spec = cfg.scrambler_spec(kind);
    for (const auto& name : cfg.integrands) {
      const IntegrandSpec f = builtin(name);
      for (auto m : cfg.m_values) {
        const NetPoints net = van_der_corput_net(cfg.base, m);
        const std::size_t N = net.size();
        const auto estimates = single_estimates(f, spec, net, cfg.repetitions, cfg.master_seed, cfg.threads);
        const double empirical = estimates.size() >= 2 ? sample_variance(estimates) : 0.0;
        const double theory = f.exact_sigma2 / std::pow(static_cast<double>(N), 3.0);
        const double ratio = theory > 0.0 ? empirical / theory : std::nan("");
        CsvRow row = cell_row(cfg, spec, name, m, N, 1);
        row.kind = RowKind::Summary;
        row.rep = "emp_var";
        row.rescaled = empirical;
        csv.write(row);
        row.rep = "theory_var";
        row.rescaled = theory;
        csv.write(row);
        row.rep = "ratio";
        row.rescaled = ratio;
        csv.write(row);
        log << spec.label() << ' ' << name << " N=" << N << ": var " << format_double(empirical) << " theory "
            << format_double(theory) << " ratio " << format_double(ratio) << '\n';
      }
    }
  }
  finish(out, path);
  log << "wrote " << path.string() << '\n';
  return {path};
}

bool run_acceptance_mode(const ExperimentConfig& cfg, std::ostream& report, std::ostream& log) {
  cfg.validate();
  AcceptanceOptions options;
  options.master_seed = cfg.master_seed;
  options.threads = cfg.threads;
  options.criteria = cfg.criteria;
  const AcceptanceRun run = run_acceptance(options, &log);
  for (const auto& result : run.results) report << format_result_line(result) << '\n';
  prepare_output_dir(cfg.output_dir);
  const auto path = cfg.output_dir / "acceptance.csv";
  auto out = open_output(path);
  out << run.csv;
  finish(out, path);
  log << "wrote " << path.string() << '\n';
  return run.all_passed();
}

}  // namespace rqmc
