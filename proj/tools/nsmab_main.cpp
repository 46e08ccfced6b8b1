#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "nsmab/adwin.hpp"
#include "nsmab/environments.hpp"
#include "nsmab/harness.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

std::string summary_path_for(const std::string& out) {
  const std::string suffix = ".csv";
  if (out.size() > suffix.size() &&
      out.compare(out.size() - suffix.size(), suffix.size(), suffix) == 0) {
    return out.substr(0, out.size() - suffix.size()) + ".summary.csv";
  }
  return out + ".summary.csv";
}

void parse_params(const std::vector<std::string>& raw,
                  std::map<std::string, double>& params) {
  for (const auto& kv : raw) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw nsmab::ConfigError("--param expects key=value, got: " + kv);
    }
    const std::string key = kv.substr(0, eq);
    try {
      size_t used = 0;
      const double value = std::stod(kv.substr(eq + 1), &used);
      if (used != kv.size() - eq - 1) throw std::invalid_argument(kv);
      params[key] = value;
    } catch (const std::exception&) {
      throw nsmab::ConfigError("--param value is not a number: " + kv);
    }
  }
}

struct SimulateOptions {
  nsmab::ExperimentConfig config;
  std::vector<std::string> raw_params;
  std::string config_path;
  std::string out;
  std::string summary;
};

// Plain key=value file, same names as the long flags; values given on the
// command line win. `param=key=value` lines may repeat.
void apply_config_file(SimulateOptions& opt, const CLI::App& cli) {
  std::ifstream in(opt.config_path);
  if (!in) throw nsmab::IoError("cannot open config: " + opt.config_path);
  const auto flag_given = [&](const std::string& name) {
    return cli.count(name) > 0;
  };
  std::vector<std::string> file_params;
  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || eq <= first) {
      throw nsmab::ConfigError(opt.config_path + ":" +
                               std::to_string(line_no) +
                               ": expected key=value");
    }
    auto strip = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    try {
      if (key == "env" && !flag_given("--env")) {
        opt.config.env = value;
      } else if (key == "policy" && !flag_given("--policy")) {
        opt.config.policy = value;
      } else if (key == "K" && !flag_given("--K")) {
        opt.config.num_arms = std::stoi(value);
      } else if (key == "T" && !flag_given("--T")) {
        opt.config.horizon = std::stoll(value);
      } else if (key == "L" && !flag_given("--L")) {
        opt.config.plays = std::stoi(value);
      } else if (key == "runs" && !flag_given("--runs")) {
        opt.config.runs = std::stoi(value);
      } else if (key == "seed" && !flag_given("--seed")) {
        opt.config.base_seed = std::stoull(value);
      } else if (key == "delta" && !flag_given("--delta")) {
        opt.config.delta = std::stod(value);
      } else if (key == "cadence" && !flag_given("--cadence")) {
        opt.config.cadence = std::stoll(value);
      } else if (key == "threads" && !flag_given("--threads")) {
        opt.config.threads = std::stoi(value);
      } else if (key == "out" && !flag_given("--out")) {
        opt.out = value;
      } else if (key == "summary" && !flag_given("--summary")) {
        opt.summary = value;
      } else if (key == "param") {
        file_params.push_back(value);
      } else if (key != "env" && key != "policy" && key != "K" && key != "T" &&
                 key != "L" && key != "runs" && key != "seed" &&
                 key != "delta" && key != "cadence" && key != "threads" &&
                 key != "out" && key != "summary") {
        throw nsmab::ConfigError(opt.config_path + ":" +
                                 std::to_string(line_no) + ": unknown key " +
                                 key);
      }
    } catch (const nsmab::ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw nsmab::ConfigError(opt.config_path + ":" +
                               std::to_string(line_no) + ": bad value for " +
                               key);
    }
  }
  // Command-line --param entries come later in raw_params, so they win when
  // the same key appears in both.
  opt.raw_params.insert(opt.raw_params.begin(), file_params.begin(),
                        file_params.end());
}

void run_simulate(SimulateOptions& opt) {
  if (opt.out.empty()) throw nsmab::ConfigError("--out is required");
  parse_params(opt.raw_params, opt.config.params);
  const auto records = nsmab::run_experiment(opt.config);

  std::ofstream out_file(opt.out);
  if (!out_file) throw nsmab::IoError("cannot write: " + opt.out);
  nsmab::write_records_csv(out_file, opt.config.policy, records);
  if (!out_file) throw nsmab::IoError("failed writing: " + opt.out);

  const std::string summary =
      opt.summary.empty() ? summary_path_for(opt.out) : opt.summary;
  std::ofstream summary_file(summary);
  if (!summary_file) throw nsmab::IoError("cannot write: " + summary);
  nsmab::write_summary_csv(summary_file, opt.config.policy, records);
  if (!summary_file) throw nsmab::IoError("failed writing: " + summary);
}

struct AdwinOptions {
  double delta = 0.001;
  std::string input = "-";
  std::string out = "-";
  std::int64_t stride = 1;
  std::int64_t horizon = 0;  // 0: unbounded
};

void run_adwin(const AdwinOptions& opt) {
  std::ifstream in_file;
  std::istream* in = &std::cin;
  if (opt.input != "-") {
    in_file.open(opt.input);
    if (!in_file) throw nsmab::IoError("cannot open: " + opt.input);
    in = &in_file;
  }
  std::ofstream out_file;
  std::ostream* out = &std::cout;
  if (opt.out != "-") {
    out_file.open(opt.out);
    if (!out_file) throw nsmab::IoError("cannot write: " + opt.out);
    out = &out_file;
  }

  nsmab::AdwinDetector detector(
      opt.delta, opt.stride,
      opt.horizon > 0 ? std::optional<std::int64_t>(opt.horizon) : std::nullopt);
  *out << "t,estimate,detected,window_size\n";
  std::string line;
  std::int64_t line_no = 0;
  std::int64_t t = 0;
  while (std::getline(*in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    double x = 0.0;
    try {
      size_t used = 0;
      x = std::stod(line, &used);
      if (used != line.size()) throw std::invalid_argument(line);
    } catch (const std::exception&) {
      std::ostringstream msg;
      msg << opt.input << ":" << line_no << ": not a number: " << line;
      throw nsmab::ConfigError(msg.str());
    }
    ++t;
    const auto report = detector.observe(x);
    *out << t << ',' << nsmab::format_value(detector.mean_estimate()) << ','
         << (report.detected ? 1 : 0) << ',' << report.retained_size << '\n';
  }
  if (opt.out != "-" && !*out) throw nsmab::IoError("failed writing: " + opt.out);
}

struct DiagnoseOptions {
  std::string env = "abrupt";
  int num_arms = 100;
  std::int64_t horizon = 30000;
};

void run_diagnose(const DiagnoseOptions& opt) {
  const nsmab::SyntheticEnv env(nsmab::parse_env_kind(opt.env), opt.num_arms,
                                opt.horizon);
  std::cout << "env=" << nsmab::env_kind_name(env.kind()) << " K="
            << env.num_arms() << " T=" << env.horizon() << '\n';
  const auto points = env.changepoints();
  std::cout << "changepoints=";
  for (size_t i = 0; i < points.size(); ++i) {
    std::cout << (i ? "," : "") << points[i];
  }
  std::cout << '\n';

  const auto abrupt = nsmab::global_change_ratio(env);
  if (abrupt.applicable) {
    std::cout << "global_change_ratio_excluding_zero="
              << nsmab::format_value(abrupt.excluding_zero) << '\n';
    std::cout << "global_change_ratio_including_zero="
              << nsmab::format_value(abrupt.including_zero) << '\n';
  } else {
    std::cout << "global_change_ratio=not applicable\n";
  }
  const auto gradual = nsmab::gradual_ratio(env);
  if (gradual.applicable) {
    std::cout << "gradual_ratio_excluding_zero="
              << nsmab::format_value(gradual.excluding_zero) << '\n';
    std::cout << "gradual_ratio_including_zero="
              << nsmab::format_value(gradual.including_zero) << '\n';
  } else {
    std::cout << "gradual_ratio=not applicable\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive-windowing change detection and nonstationary "
               "multi-armed bandit simulation"};
  app.require_subcommand(1);

  SimulateOptions sim;
  auto* simulate = app.add_subcommand(
      "simulate", "Run seeded bandit experiments and write CSV metrics");
  simulate->add_option("--config", sim.config_path,
                       "Key=value config file; flags override its values");
  simulate->add_option("--env", sim.config.env,
                       "stationary|gradual|abrupt|abrupt_local|replay:PATH");
  simulate->add_option("--policy", sim.config.policy,
                       "ts|klucb|eucb|adr-ts|adr-klucb|adr-eucb|ads-ts|"
                       "ads-klucb|ads-eucb|ducb|swts|rexp3");
  simulate->add_option("--K", sim.config.num_arms, "Number of arms");
  simulate->add_option("--T", sim.config.horizon, "Rounds per run");
  simulate->add_option("--L", sim.config.plays, "Plays per round");
  simulate->add_option("--runs", sim.config.runs, "Independent runs");
  simulate->add_option("--seed", sim.config.base_seed,
                       "Base seed; run r uses seed+r");
  simulate->add_option("--delta", sim.config.delta,
                       "Detector confidence level");
  simulate->add_option("--cadence", sim.config.cadence,
                       "Record every N rounds (0: T/1000)");
  simulate->add_option("--threads", sim.config.threads,
                       "Worker threads (0: all cores)");
  simulate->add_option("--param", sim.raw_params,
                       "Policy hyperparameter key=value (gamma, window, "
                       "batch, check_stride)");
  simulate->add_option("--out", sim.out, "Per-run records CSV path");
  simulate->add_option("--summary", sim.summary,
                       "Summary CSV path (default: <out>.summary.csv)");

  AdwinOptions adw;
  auto* adwin = app.add_subcommand(
      "adwin", "Run the adaptive-window detector over a value stream");
  adwin->add_option("--delta", adw.delta, "Confidence level");
  adwin->add_option("--input", adw.input, "Input file, one value per line, or -");
  adwin->add_option("--out", adw.out, "Output CSV path or -");
  adwin->add_option("--stride", adw.stride, "Split scan stride (1: exact)");
  adwin->add_option("--horizon", adw.horizon, "Reject input past this length");

  DiagnoseOptions diag;
  auto* diagnose = app.add_subcommand(
      "diagnose", "Report global-change ratios of a synthetic environment");
  diagnose->add_option("--env", diag.env, "Environment kind");
  diagnose->add_option("--K", diag.num_arms, "Number of arms");
  diagnose->add_option("--T", diag.horizon, "Horizon");

  try {
    app.parse(argc, argv);
    if (simulate->parsed()) {
      if (!sim.config_path.empty()) apply_config_file(sim, *simulate);
      run_simulate(sim);
    }
    if (adwin->parsed()) run_adwin(adw);
    if (diagnose->parsed()) run_diagnose(diag);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  } catch (const nsmab::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return 0;
}
