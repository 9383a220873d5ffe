#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "naqae/noise_models.hpp"

namespace naqae {

// Tallies for one circuit depth.
struct ShotRecord {
  GroverDepth m = 0;
  std::uint64_t shots = 0;
  std::uint64_t ones = 0;

  // Throws UsageError unless 1 <= shots and ones <= shots.
  void validate() const;
  double frequency() const { return static_cast<double>(ones) / static_cast<double>(shots); }

  friend bool operator==(const ShotRecord&, const ShotRecord&) = default;
};

enum class SamplingMode {
  bernoulli,  // one uniform draw per shot; portable bit-exact tallies
  binomial,   // single std::binomial_distribution draw; fast, libstdc++-specific
};

// An idealized device: a true angle, a noise model, and a seed. Immutable;
// all randomness is derived from (seed, stream id).
struct SimulatedDevice {
  Amplitude amp{0.0};
  NoiseModel model = Noiseless{};
  std::uint64_t seed = 0;
  SamplingMode sampling = SamplingMode::bernoulli;

  double p1(GroverDepth m) const { return naqae::p1(amp, m, model); }
};

// Draws `shots` outcomes at depth m from stream `stream` of the device.
ShotRecord sample_shots(const SimulatedDevice& dev, GroverDepth m, std::uint64_t shots,
                        std::uint64_t stream = 0);

// Stream used for the i-th entry of a depth sweep rooted at `base_stream`.
std::uint64_t sweep_stream(std::uint64_t base_stream, std::size_t depth_index);

// One record per depth; entry i is drawn from sweep_stream(base_stream, i),
// so the tallies do not depend on evaluation order.
std::vector<ShotRecord> run_depth_sweep(const SimulatedDevice& dev,
                                        std::span<const GroverDepth> depths,
                                        std::span<const std::uint64_t> shots_per_depth,
                                        std::uint64_t base_stream = 0);

// Circuits A1..A5: theta = pi/6, pi/3, 1/2, 1, pi/6.
double preset_theta(std::string_view name);
SimulatedDevice preset_device(std::string_view name, NoiseModel model, std::uint64_t seed);

}  // namespace naqae
