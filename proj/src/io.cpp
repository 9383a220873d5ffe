#include "naqae/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "naqae/errors.hpp"

namespace naqae::io {

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

template <typename Int>
bool parse_int(std::string_view text, Int& value) {
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

double parse_double(std::string_view text, std::string_view what) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() ||
      !std::isfinite(value)) {
    throw UsageError("invalid number '" + std::string(text) + "' in " + std::string(what));
  }
  return value;
}

}  // namespace

std::vector<ShotCsvRow> parse_shot_csv_rows(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError("empty file; expected header m,shots,ones[,label]", 1);
  }
  std::size_t columns = 0;
  if (line == "m,shots,ones") {
    columns = 3;
  } else if (line == "m,shots,ones,label") {
    columns = 4;
  } else {
    throw ParseError("header must be exactly 'm,shots,ones' or 'm,shots,ones,label'", 1);
  }

  std::vector<ShotCsvRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != columns) {
      throw ParseError("expected " + std::to_string(columns) + " fields, got " +
                           std::to_string(fields.size()),
                       line_no);
    }
    ShotCsvRow row;
    long long m = 0;
    long long shots = 0;
    long long ones = 0;
    if (!parse_int(fields[0], m) || !parse_int(fields[1], shots) || !parse_int(fields[2], ones)) {
      throw ParseError("m, shots and ones must be integers", line_no);
    }
    if (m < 0 || m > static_cast<long long>(std::numeric_limits<GroverDepth>::max())) {
      throw ValidationError("m must be a non-negative depth", line_no);
    }
    if (shots < 1) throw ValidationError("shots must be >= 1", line_no);
    if (ones < 0) throw ValidationError("ones must be >= 0", line_no);
    if (ones > shots) throw ValidationError("ones exceeds shots", line_no);
    row.m = static_cast<GroverDepth>(m);
    row.shots = static_cast<std::uint64_t>(shots);
    row.ones = static_cast<std::uint64_t>(ones);
    if (columns == 4) row.label = std::string(fields[3]);
    rows.push_back(std::move(row));
  }
  return rows;
}

ShotTable group_rows(const std::vector<ShotCsvRow>& rows) {
  std::map<std::string, std::map<GroverDepth, ShotRecord>> merged;
  for (const auto& row : rows) {
    auto& rec = merged[row.label][row.m];
    rec.m = row.m;
    if (rec.shots > std::numeric_limits<std::uint64_t>::max() - row.shots) {
      throw ValidationError("merged shot count overflows for label '" + row.label + "'", 0);
    }
    rec.shots += row.shots;
    rec.ones += row.ones;
  }
  ShotTable table;
  for (auto& [label, by_depth] : merged) {
    auto& records = table[label];
    for (auto& [m, rec] : by_depth) records.push_back(rec);
  }
  return table;
}

ShotTable parse_shot_csv(std::istream& in) { return group_rows(parse_shot_csv_rows(in)); }

ShotTable read_shot_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open '" + path.string() + "'", 0);
  }
  return parse_shot_csv(in);
}

void write_shot_csv(std::ostream& out, const ShotTable& table) {
  bool labelled = false;
  for (const auto& [label, records] : table) labelled = labelled || !label.empty();
  out << (labelled ? "m,shots,ones,label\n" : "m,shots,ones\n");
  for (const auto& [label, records] : table) {
    for (const auto& r : records) {
      out << r.m << ',' << r.shots << ',' << r.ones;
      if (labelled) out << ',' << label;
      out << '\n';
    }
  }
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

Json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return std::strtod(format_number(x).c_str(), nullptr);
}

Json to_json(const FitResult& fit, bool best) {
  Json j;
  j["label"] = fit.label;
  j["model"] = std::string(to_string(fit.model_kind));
  j["theta"] = number(fit.theta_hat);
  j["a"] = number(std::sin(fit.theta_hat) * std::sin(fit.theta_hat));
  if (const auto* g = std::get_if<GaussianNoiseParams>(&fit.noise_params)) {
    j["k_mu"] = number(g->k_mu);
    j["k_sigma"] = number(g->k_sigma);
  } else {
    j["p_coh"] = number(std::get<DepolParams>(fit.noise_params).p_coh);
  }
  j["sse"] = number(fit.sse);
  j["r_squared"] = number(fit.r_squared);
  j["converged"] = fit.converged;
  j["best"] = best;
  Json residuals = Json::array();
  for (const double r : fit.residuals) residuals.push_back(number(r));
  j["residuals"] = std::move(residuals);
  return j;
}

Json to_json(const AmplitudeEstimate& est, std::string_view label) {
  Json j;
  j["label"] = std::string(label);
  j["method"] = std::string(to_string(est.method));
  j["theta_hat"] = number(est.theta_hat);
  j["a_hat"] = number(est.a_hat);
  j["log_likelihood"] = number(est.log_likelihood);
  j["clamped_records"] = est.clamped_records;
  j["dropped_records"] = est.dropped_records;
  j["flat_likelihood"] = est.flat_likelihood;
  return j;
}

Json to_json(const ShotSchedule& schedule) {
  Json entries = Json::array();
  for (const auto& e : schedule.entries()) {
    Json entry;
    entry["m"] = e.m;
    entry["n_shots"] = e.n_shots;
    entries.push_back(std::move(entry));
  }
  Json j;
  j["entries"] = std::move(entries);
  return j;
}

void write_fit_report_csv(std::ostream& out, const FitReport& report) {
  constexpr ModelKind kinds[] = {ModelKind::gaussian, ModelKind::gaussian_zero_mean,
                                 ModelKind::depolarizing};
  out << "label";
  for (const auto kind : kinds) out << ',' << to_string(kind);
  out << '\n';
  for (const auto& row : report.rows) {
    out << row.label;
    for (const auto kind : kinds) {
      out << ',';
      const auto it = row.r_squared.find(kind);
      if (it == row.r_squared.end()) continue;
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.4f", it->second);
      out << buf;
      if (row.best.at(kind)) out << '*';
    }
    out << '\n';
  }
}

void write_rmse_csv(std::ostream& out, const std::vector<RmseCurve>& curves) {
  out << "setting,x_kind,x,rmse\n";
  for (const auto& curve : curves) {
    for (const auto& p : curve.points) {
      out << curve.setting << ",depth," << p.depth << ',' << format_number(p.rmse) << '\n';
    }
    for (const auto& p : curve.points) {
      out << curve.setting << ",queries," << p.oracle_queries << ',' << format_number(p.rmse)
          << '\n';
    }
  }
}

NoiseModel parse_noise_spec(std::string_view text) {
  if (text == "none") return Noiseless{};
  const auto colon = text.find(':');
  const std::string_view kind = text.substr(0, colon);
  const std::string_view args = colon == std::string_view::npos ? "" : text.substr(colon + 1);
  if (kind == "gaussian") {
    const auto parts = split(args, ',');
    if (parts.size() != 2) {
      throw UsageError("noise spec 'gaussian' expects gaussian:k_mu,k_sigma");
    }
    GaussianNoiseParams g{parse_double(parts[0], "noise spec"),
                          parse_double(parts[1], "noise spec")};
    g.validate();
    return g;
  }
  if (kind == "depol") {
    DepolParams d{parse_double(args, "noise spec")};
    d.validate();
    return d;
  }
  throw UsageError("unknown noise spec '" + std::string(text) +
                   "' (expected none | gaussian:k_mu,k_sigma | depol:p)");
}

std::vector<GroverDepth> parse_depths(std::string_view text) {
  std::vector<GroverDepth> depths;
  if (text.empty()) return depths;
  for (const auto item : split(text, ',')) {
    const auto dots = item.find("..");
    GroverDepth lo = 0;
    GroverDepth hi = 0;
    if (dots == std::string_view::npos) {
      if (!parse_int(item, lo)) throw UsageError("invalid depth '" + std::string(item) + "'");
      hi = lo;
    } else if (!parse_int(item.substr(0, dots), lo) || !parse_int(item.substr(dots + 2), hi) ||
               hi < lo) {
      throw UsageError("invalid depth range '" + std::string(item) + "' (expected a..b, a <= b)");
    }
    for (GroverDepth m = lo;; ++m) {
      depths.push_back(m);
      if (m == hi) break;
    }
  }
  return depths;
}

namespace {

void reject_unknown_keys(const Json& obj, std::initializer_list<std::string_view> allowed,
                         std::string_view where) {
  if (!obj.is_object()) throw UsageError(std::string(where) + " must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const auto a : allowed) known = known || key == a;
    if (!known) throw UsageError("unknown key '" + key + "' in " + std::string(where));
  }
}

NoiseModel noise_from_json(const Json& j) {
  reject_unknown_keys(j, {"kind", "k_mu", "k_sigma", "p_coh"}, "device.noise");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "none") return Noiseless{};
  if (kind == "gaussian") {
    GaussianNoiseParams g{j.value("k_mu", 0.0), j.at("k_sigma").get<double>()};
    g.validate();
    return g;
  }
  if (kind == "depolarizing") {
    DepolParams d{j.at("p_coh").get<double>()};
    d.validate();
    return d;
  }
  throw UsageError("device.noise.kind must be none, gaussian or depolarizing");
}

SamplingMode parse_sampling(std::string_view text) {
  if (text == "bernoulli") return SamplingMode::bernoulli;
  if (text == "binomial") return SamplingMode::binomial;
  throw UsageError("sampling must be bernoulli or binomial");
}

}  // namespace

ExperimentDocument experiment_from_json(const Json& doc) {
  try {
    reject_unknown_keys(doc,
                        {"device", "truth_a", "max_depth", "n_shot_base", "k_sigma_assumed",
                         "settings", "replications", "seed", "grid_points",
                         "misspecification_factors"},
                        "experiment config");
    ExperimentDocument out;
    ExperimentConfig& cfg = out.config;

    const Json& dev = doc.at("device");
    reject_unknown_keys(dev, {"preset", "theta", "noise", "sampling"}, "device");
    if (dev.contains("preset") == dev.contains("theta")) {
      throw UsageError("device needs exactly one of 'preset' or 'theta'");
    }
    const double theta = dev.contains("preset")
                             ? preset_theta(dev.at("preset").get<std::string>())
                             : dev.at("theta").get<double>();
    cfg.device.amp = Amplitude(theta);
    cfg.device.model = dev.contains("noise") ? noise_from_json(dev.at("noise")) : Noiseless{};
    cfg.device.sampling = parse_sampling(dev.value("sampling", std::string("bernoulli")));

    if (doc.contains("truth_a")) cfg.truth_a = doc.at("truth_a").get<double>();
    cfg.max_depth = doc.at("max_depth").get<GroverDepth>();
    cfg.n_shot_base = doc.at("n_shot_base").get<std::uint64_t>();
    if (doc.contains("k_sigma_assumed")) {
      cfg.k_sigma_assumed = doc.at("k_sigma_assumed").get<double>();
    }
    if (doc.contains("settings")) {
      cfg.settings.clear();
      std::set<Setting> seen;
      for (const auto& s : doc.at("settings")) {
        const Setting setting = parse_setting(s.get<std::string>());
        if (!seen.insert(setting).second) throw UsageError("duplicate setting in config");
        cfg.settings.push_back(setting);
      }
    }
    cfg.replications = doc.at("replications").get<std::size_t>();
    cfg.seed = doc.value("seed", std::uint64_t{0});
    if (doc.contains("grid_points")) cfg.grid.points = doc.at("grid_points").get<std::size_t>();
    if (doc.contains("misspecification_factors")) {
      out.misspecification_factors = doc.at("misspecification_factors").get<std::vector<double>>();
    }
    cfg.validate();
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("experiment config: ") + e.what());
  }
}

ExperimentDocument read_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open '" + path.string() + "'", 0);
  }
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("experiment config is not valid JSON: ") + e.what(), 0);
  }
  return experiment_from_json(doc);
}

}  // namespace naqae::io
