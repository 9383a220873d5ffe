#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <tuple>

#include "naqae/device_sim.hpp"
#include "naqae/errors.hpp"
#include "naqae/estimation.hpp"
#include "naqae/experiments.hpp"
#include "naqae/fitting.hpp"
#include "naqae/io.hpp"
#include "naqae/noise_models.hpp"

namespace py = pybind11;

namespace {

naqae::NoiseModel noise_from(const std::string& spec) { return naqae::io::parse_noise_spec(spec); }

py::dict fit_to_dict(const naqae::FitResult& f) {
  py::dict d;
  d["model"] = std::string(naqae::to_string(f.model_kind));
  d["theta"] = f.theta_hat;
  if (const auto* g = std::get_if<naqae::GaussianNoiseParams>(&f.noise_params)) {
    d["k_mu"] = g->k_mu;
    d["k_sigma"] = g->k_sigma;
  } else {
    d["p_coh"] = std::get<naqae::DepolParams>(f.noise_params).p_coh;
  }
  d["sse"] = f.sse;
  d["r_squared"] = f.r_squared;
  d["residuals"] = f.residuals;
  d["converged"] = f.converged;
  return d;
}

std::vector<naqae::ShotRecord> to_records(const std::vector<std::tuple<unsigned, std::uint64_t,
                                                                        std::uint64_t>>& rows) {
  std::vector<naqae::ShotRecord> out;
  for (const auto& [m, shots, ones] : rows) out.push_back({m, shots, ones});
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Noise-aware amplitude estimation core";

  auto error = py::register_exception<naqae::Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<naqae::UsageError>(m, "UsageError", error.ptr());
  py::register_exception<naqae::DomainError>(m, "DomainError", error.ptr());
  py::register_exception<naqae::SingularCorrectionError>(m, "SingularCorrectionError",
                                                         error.ptr());

  m.def(
      "p1",
      [](double theta, unsigned depth, const std::string& noise) {
        return naqae::p1(naqae::Amplitude(theta), depth, noise_from(noise));
      },
      py::arg("theta"), py::arg("m"), py::arg("noise") = "none",
      "Outcome-1 probability after m Grover iterates; noise is 'none', "
      "'gaussian:k_mu,k_sigma' or 'depol:p'.");
  m.def(
      "p1_gaussian_quadrature",
      [](double theta, unsigned depth, double k_mu, double k_sigma, double tol) {
        return naqae::p1_gaussian_quadrature(naqae::Amplitude(theta), depth, {k_mu, k_sigma}, tol);
      },
      py::arg("theta"), py::arg("m"), py::arg("k_mu"), py::arg("k_sigma"), py::arg("tol") = 1e-12);
  m.def(
      "depol_equivalent",
      [](double k_sigma) { return naqae::depol_equivalent({0.0, k_sigma}).p_coh; },
      py::arg("k_sigma"));

  m.def(
      "simulate",
      [](double theta, const std::string& noise, const std::vector<unsigned>& depths,
         const std::vector<std::uint64_t>& shots, std::uint64_t seed) {
        naqae::SimulatedDevice dev;
        dev.amp = naqae::Amplitude(theta);
        dev.model = noise_from(noise);
        dev.seed = seed;
        std::vector<std::tuple<unsigned, std::uint64_t, std::uint64_t>> out;
        for (const auto& r : naqae::run_depth_sweep(dev, depths, shots)) {
          out.emplace_back(r.m, r.shots, r.ones);
        }
        return out;
      },
      py::arg("theta"), py::arg("noise"), py::arg("depths"), py::arg("shots"), py::arg("seed") = 0,
      "List of (m, shots, ones) tallies.");

  m.def(
      "fit",
      [](const std::vector<std::tuple<unsigned, std::uint64_t, std::uint64_t>>& rows,
         const std::string& model) {
        const auto records = to_records(rows);
        const auto points = naqae::to_frequency_points(records);
        py::list out;
        if (model == "all") {
          for (const auto& f : naqae::fit_all(points)) out.append(fit_to_dict(f));
        } else {
          out.append(fit_to_dict(naqae::fit_model(points, naqae::parse_model_kind(model))));
        }
        return out;
      },
      py::arg("records"), py::arg("model") = "all");

  m.def(
      "estimate",
      [](const std::vector<std::tuple<unsigned, std::uint64_t, std::uint64_t>>& rows,
         std::optional<double> p_coh) {
        const auto records = to_records(rows);
        const auto method = p_coh ? naqae::EstimationMethod::corrected({*p_coh})
                                  : naqae::EstimationMethod::naive();
        const auto e = naqae::estimate_amplitude(records, method);
        py::dict d;
        d["theta"] = e.theta_hat;
        d["a"] = e.a_hat;
        d["log_likelihood"] = e.log_likelihood;
        d["clamped_records"] = e.clamped_records;
        d["dropped_records"] = e.dropped_records;
        d["flat_likelihood"] = e.flat_likelihood;
        return d;
      },
      py::arg("records"), py::arg("p_coh") = py::none(),
      "Maximum-likelihood amplitude; passing p_coh selects the corrected method.");

  m.def(
      "shot_schedule",
      [](const std::vector<unsigned>& depths, std::uint64_t base, double k_sigma,
         const std::string& rounding) {
        return naqae::shot_schedule(depths, base, k_sigma, naqae::parse_rounding(rounding))
            .shots();
      },
      py::arg("depths"), py::arg("n_shot_base"), py::arg("k_sigma"),
      py::arg("rounding") = "nearest");

  m.def(
      "run_experiment",
      [](const std::string& config_json) {
        const auto doc = naqae::io::experiment_from_json(naqae::io::Json::parse(config_json));
        py::dict out;
        auto curves = naqae::run_monte_carlo(doc.config);
        if (!doc.misspecification_factors.empty()) {
          auto extra = naqae::run_misspecification_sweep(doc.config, doc.misspecification_factors);
          curves.insert(curves.end(), extra.begin(), extra.end());
        }
        for (const auto& c : curves) {
          py::list pts;
          for (const auto& p : c.points) pts.append(py::make_tuple(p.depth, p.oracle_queries, p.rmse));
          out[py::str(c.setting)] = pts;
        }
        return out;
      },
      py::arg("config_json"),
      "RMSE curves keyed by setting: lists of (depth, oracle_queries, rmse).");
}
