#pragma once

// File formats: shot-record CSV, JSON results, experiment configs and RMSE
// curve CSV. Numbers are written with 12 significant digits.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "naqae/device_sim.hpp"
#include "naqae/estimation.hpp"
#include "naqae/experiments.hpp"
#include "naqae/fitting.hpp"

namespace naqae::io {

using Json = nlohmann::ordered_json;

// Shot CSV: header exactly "m,shots,ones" or "m,shots,ones,label", LF line
// endings. Duplicate m within one label are merged by summing shots and ones.
struct ShotCsvRow {
  GroverDepth m = 0;
  std::uint64_t shots = 0;
  std::uint64_t ones = 0;
  std::string label;
};

// Records grouped by label (empty label when the column is absent), each
// group sorted by m.
using ShotTable = std::map<std::string, std::vector<ShotRecord>>;

// Throws ParseError (malformed text) or ValidationError (invariant breach),
// both carrying the 1-based line number.
std::vector<ShotCsvRow> parse_shot_csv_rows(std::istream& in);
ShotTable group_rows(const std::vector<ShotCsvRow>& rows);
ShotTable parse_shot_csv(std::istream& in);
ShotTable read_shot_csv(const std::filesystem::path& path);

// Writes the label column only when some label is non-empty.
void write_shot_csv(std::ostream& out, const ShotTable& table);

// "%.12g".
std::string format_number(double x);
// x rounded to 12 significant digits; non-finite values map to null.
Json number(double x);

Json to_json(const FitResult& fit, bool best);
Json to_json(const AmplitudeEstimate& est, std::string_view label);
Json to_json(const ShotSchedule& schedule);

// Wide table, one row per label: label,gaussian,gaussian_zero_mean,depolarizing
// with R^2 to 4 decimals and a trailing '*' on the best model(s).
void write_fit_report_csv(std::ostream& out, const FitReport& report);

// Tidy curves: setting,x_kind,x,rmse with x_kind in {depth, queries}.
void write_rmse_csv(std::ostream& out, const std::vector<RmseCurve>& curves);

// "none", "gaussian:k_mu,k_sigma" or "depol:p_coh".
NoiseModel parse_noise_spec(std::string_view text);

// Comma-separated items, each an integer or an inclusive range "a..b".
std::vector<GroverDepth> parse_depths(std::string_view text);

struct ExperimentDocument {
  ExperimentConfig config;
  std::vector<double> misspecification_factors;
};

// Schema: schemas/experiment_config.schema.json. Unknown keys are rejected.
ExperimentDocument experiment_from_json(const Json& doc);
ExperimentDocument read_experiment_config(const std::filesystem::path& path);

}  // namespace naqae::io
