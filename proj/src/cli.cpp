#include "naqae/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "naqae/device_sim.hpp"
#include "naqae/errors.hpp"
#include "naqae/estimation.hpp"
#include "naqae/experiments.hpp"
#include "naqae/fitting.hpp"
#include "naqae/io.hpp"

namespace naqae::cli {

namespace {

// Flag combinations CLI11 cannot express; reported with exit code 2.
class FlagError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

unsigned threads_from_env() {
  const char* raw = std::getenv("NAQAE_THREADS");
  if (raw == nullptr || *raw == '\0') return 0;
  char* end = nullptr;
  const long value = std::strtol(raw, &end, 10);
  if (*end != '\0' || value < 0) {
    throw FlagError("NAQAE_THREADS must be a non-negative integer");
  }
  return static_cast<unsigned>(value);
}

// Writes to `path` when set, otherwise to `fallback`.
void emit(const std::string& path, std::ostream& fallback,
          const std::function<void(std::ostream&)>& write) {
  if (path.empty()) {
    write(fallback);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot open '" + path + "' for writing");
  write(file);
  if (!file) throw Error("failed writing '" + path + "'");
}

void dump_json(std::ostream& os, const io::Json& j) { os << j.dump(2) << '\n'; }

struct SimulateArgs {
  std::string preset;
  std::optional<double> theta;
  std::string noise = "none";
  std::string depths;
  std::string shots;
  std::uint64_t seed = 0;
  std::string label;
  std::string sampling = "bernoulli";
  std::string out;
};

struct FitArgs {
  std::string input;
  std::string model = "all";
  std::string out;
  std::string table;
};

struct EstimateArgs {
  std::string input;
  std::string method = "naive";
  std::optional<double> p_coh;
  std::string out;
};

struct ScheduleArgs {
  std::string depths;
  std::uint64_t base_shots = 0;
  double k_sigma = 0.0;
  std::string rounding = "nearest";
  std::string out;
};

struct ExperimentArgs {
  std::string config;
  std::string out;
};

void run_simulate(const SimulateArgs& a, std::ostream& out) {
  if (a.preset.empty() == !a.theta.has_value()) {
    throw FlagError("simulate: give exactly one of --preset or --theta");
  }
  SimulatedDevice dev;
  dev.amp = Amplitude(a.theta ? *a.theta : preset_theta(a.preset));
  dev.model = io::parse_noise_spec(a.noise);
  dev.seed = a.seed;
  dev.sampling = a.sampling == "binomial" ? SamplingMode::binomial : SamplingMode::bernoulli;

  const auto depths = io::parse_depths(a.depths);
  std::vector<std::uint64_t> shots;
  for (const auto m : io::parse_depths(a.shots)) shots.push_back(m);
  if (shots.size() == 1 && depths.size() > 1) shots.assign(depths.size(), shots.front());
  if (shots.size() != depths.size()) {
    throw FlagError("simulate: --shots takes one value or one per depth");
  }
  const auto records = run_depth_sweep(dev, depths, shots);

  // Written row by row so repeated depths stay separate lines.
  emit(a.out, out, [&](std::ostream& os) {
    os << (a.label.empty() ? "m,shots,ones\n" : "m,shots,ones,label\n");
    for (const auto& r : records) {
      os << r.m << ',' << r.shots << ',' << r.ones;
      if (!a.label.empty()) os << ',' << a.label;
      os << '\n';
    }
  });
}

void run_fit(const FitArgs& a, unsigned threads, std::ostream& out) {
  const auto table = io::read_shot_csv(a.input);
  FitConfig cfg;
  cfg.threads = threads;

  std::vector<FitResult> results;
  for (const auto& [label, records] : table) {
    const auto points = to_frequency_points(records);
    std::vector<FitResult> fits;
    if (a.model == "all") {
      fits = fit_all(points, cfg);
    } else {
      fits.push_back(fit_model(points, parse_model_kind(a.model), cfg));
    }
    for (auto& f : fits) {
      f.label = label;
      results.push_back(std::move(f));
    }
  }
  if (results.empty()) throw Error("fit: input contains no records");

  const FitReport report = fit_report(results);
  io::Json fits = io::Json::array();
  for (const auto& r : results) {
    bool best = false;
    for (const auto& row : report.rows) {
      if (row.label == r.label) best = row.best.at(r.model_kind);
    }
    fits.push_back(io::to_json(r, best));
  }
  io::Json doc;
  doc["fits"] = std::move(fits);
  emit(a.out, out, [&](std::ostream& os) { dump_json(os, doc); });
  if (!a.table.empty()) {
    emit(a.table, out, [&](std::ostream& os) { io::write_fit_report_csv(os, report); });
  }
}

void run_estimate(const EstimateArgs& a, std::ostream& out) {
  EstimationMethod method;
  if (a.method == "corrected") {
    if (!a.p_coh) throw FlagError("estimate: --method corrected requires --p-coh");
    method = EstimationMethod::corrected(DepolParams{*a.p_coh});
  } else if (a.p_coh) {
    throw FlagError("estimate: --p-coh only applies to --method corrected");
  }
  const auto table = io::read_shot_csv(a.input);
  if (table.empty()) throw Error("estimate: input contains no records");
  io::Json estimates = io::Json::array();
  for (const auto& [label, records] : table) {
    estimates.push_back(io::to_json(estimate_amplitude(records, method), label));
  }
  io::Json doc;
  doc["estimates"] = std::move(estimates);
  emit(a.out, out, [&](std::ostream& os) { dump_json(os, doc); });
}

void run_schedule(const ScheduleArgs& a, std::ostream& out) {
  const auto depths = io::parse_depths(a.depths);
  const ShotSchedule schedule =
      shot_schedule(depths, a.base_shots, a.k_sigma, parse_rounding(a.rounding));
  if (a.out.empty()) {
    const auto& entries = schedule.entries();
    for (std::size_t i = 0; i < entries.size(); ++i) {
      out << (i ? "," : "") << entries[i].n_shots;
    }
    out << '\n';
    return;
  }
  io::Json doc = io::to_json(schedule);
  doc["n_shot_base"] = a.base_shots;
  doc["k_sigma"] = io::number(a.k_sigma);
  doc["rounding"] = a.rounding;
  emit(a.out, out, [&](std::ostream& os) { dump_json(os, doc); });
}

void run_experiment(const ExperimentArgs& a, unsigned threads, std::ostream& out) {
  auto doc = io::read_experiment_config(a.config);
  doc.config.threads = threads;
  auto curves = run_monte_carlo(doc.config);
  if (!doc.misspecification_factors.empty()) {
    auto extra = run_misspecification_sweep(doc.config, doc.misspecification_factors);
    curves.insert(curves.end(), extra.begin(), extra.end());
  }
  emit(a.out, out, [&](std::ostream& os) { io::write_rmse_csv(os, curves); });
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Noise-aware quantum amplitude estimation toolkit", "naqae"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Sample shot tallies from a simulated device");
  auto* preset_opt = simulate->add_option("--preset", sim.preset, "Preset circuit A1..A5")
                         ->check(CLI::IsMember({"A1", "A2", "A3", "A4", "A5"}));
  simulate->add_option("--theta", sim.theta, "True angle in [0, pi/2]")->excludes(preset_opt);
  simulate->add_option("--noise", sim.noise, "none | gaussian:k_mu,k_sigma | depol:p");
  simulate->add_option("--depths", sim.depths, "Depths, e.g. 0..12 or 0,2,5")->required();
  simulate->add_option("--shots", sim.shots, "Shots: one value or one per depth")->required();
  simulate->add_option("--seed", sim.seed, "Random seed");
  simulate->add_option("--label", sim.label, "Label column value");
  simulate->add_option("--sampling", sim.sampling, "bernoulli | binomial")
      ->check(CLI::IsMember({"bernoulli", "binomial"}));
  simulate->add_option("--out", sim.out, "Output CSV (default stdout)");

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Least-squares fit of the noise models");
  fit_cmd->add_option("--input", fit.input, "Shot CSV")->required();
  fit_cmd->add_option("--model", fit.model, "gaussian | zero-mean | depol | all")
      ->check(CLI::IsMember({"gaussian", "zero-mean", "depol", "all"}));
  fit_cmd->add_option("--out", fit.out, "Output JSON (default stdout)");
  fit_cmd->add_option("--table", fit.table, "Also write the R^2 comparison table as CSV");

  EstimateArgs est;
  auto* est_cmd = app.add_subcommand("estimate", "Maximum-likelihood amplitude estimate");
  est_cmd->add_option("--input", est.input, "Shot CSV")->required();
  est_cmd->add_option("--method", est.method, "naive | corrected")
      ->check(CLI::IsMember({"naive", "corrected"}));
  est_cmd->add_option("--p-coh", est.p_coh, "Per-iterate coherence survival (corrected)");
  est_cmd->add_option("--out", est.out, "Output JSON (default stdout)");

  ScheduleArgs sched;
  auto* sched_cmd = app.add_subcommand("schedule", "Noise-aware shot schedule");
  sched_cmd->add_option("--depths", sched.depths, "Depths, e.g. 0..12")->required();
  sched_cmd->add_option("--base-shots", sched.base_shots, "Noiseless shot count N_shot")
      ->required();
  sched_cmd->add_option("--k-sigma", sched.k_sigma, "Rotation-noise variance rate")->required();
  sched_cmd->add_option("--rounding", sched.rounding, "nearest | up")
      ->check(CLI::IsMember({"nearest", "up"}));
  sched_cmd->add_option("--out", sched.out, "Output JSON (default: comma list on stdout)");

  ExperimentArgs exp;
  auto* exp_cmd = app.add_subcommand("experiment", "Monte Carlo comparison of QAE settings");
  exp_cmd->add_option("--config", exp.config, "Experiment JSON")->required();
  exp_cmd->add_option("--out", exp.out, "Output CSV (default stdout)");

  unsigned threads = 0;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    threads = threads_from_env();
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const FlagError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*simulate) run_simulate(sim, out);
    if (*fit_cmd) run_fit(fit, threads, out);
    if (*est_cmd) run_estimate(est, out);
    if (*sched_cmd) run_schedule(sched, out);
    if (*exp_cmd) run_experiment(exp, threads, out);
  } catch (const FlagError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace naqae::cli
