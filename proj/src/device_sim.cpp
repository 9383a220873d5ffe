#include "naqae/device_sim.hpp"

#include <numbers>
#include <random>

#include "naqae/errors.hpp"
#include "naqae/random.hpp"

namespace naqae {

void ShotRecord::validate() const {
  if (shots == 0) {
    throw UsageError("ShotRecord: shots must be >= 1 (m=" + std::to_string(m) + ")");
  }
  if (ones > shots) {
    throw UsageError("ShotRecord: ones exceeds shots (m=" + std::to_string(m) + ")");
  }
}

ShotRecord sample_shots(const SimulatedDevice& dev, GroverDepth m, std::uint64_t shots,
                        std::uint64_t stream) {
  if (shots == 0) {
    throw UsageError("sample_shots: shots must be >= 1");
  }
  const double p = dev.p1(m);
  Philox4x32 rng(dev.seed, stream);
  std::uint64_t ones = 0;
  if (dev.sampling == SamplingMode::binomial) {
    std::binomial_distribution<std::uint64_t> dist(shots, p);
    ones = dist(rng);
  } else {
    for (std::uint64_t i = 0; i < shots; ++i) {
      ones += rng.uniform() < p ? 1 : 0;
    }
  }
  return {m, shots, ones};
}

std::uint64_t sweep_stream(std::uint64_t base_stream, std::size_t depth_index) {
  return derive_stream({base_stream, depth_index});
}

std::vector<ShotRecord> run_depth_sweep(const SimulatedDevice& dev,
                                        std::span<const GroverDepth> depths,
                                        std::span<const std::uint64_t> shots_per_depth,
                                        std::uint64_t base_stream) {
  if (depths.size() != shots_per_depth.size()) {
    throw UsageError("run_depth_sweep: depths and shots_per_depth differ in length (" +
                     std::to_string(depths.size()) + " vs " +
                     std::to_string(shots_per_depth.size()) + ")");
  }
  std::vector<ShotRecord> records;
  records.reserve(depths.size());
  for (std::size_t i = 0; i < depths.size(); ++i) {
    records.push_back(
        sample_shots(dev, depths[i], shots_per_depth[i], sweep_stream(base_stream, i)));
  }
  return records;
}

double preset_theta(std::string_view name) {
  using std::numbers::pi;
  if (name == "A1" || name == "A5") return pi / 6.0;
  if (name == "A2") return pi / 3.0;
  if (name == "A3") return 0.5;
  if (name == "A4") return 1.0;
  throw UsageError("unknown preset '" + std::string(name) + "' (expected A1..A5)");
}

SimulatedDevice preset_device(std::string_view name, NoiseModel model, std::uint64_t seed) {
  return SimulatedDevice{Amplitude(preset_theta(name)), std::move(model), seed};
}

}  // namespace naqae
