#pragma once

#include <array>
#include <cstdint>
#include <string>

// Experiment settings shared by the setup runs and the criteria that read
// their artifacts.
namespace amortize::acceptance {

inline constexpr std::array<std::uint64_t, 3> kSeeds = {0, 1, 2};

// Fiber: 1000 paths at the default sampler settings.
inline constexpr int kFiberPaths = 1000;
inline constexpr std::uint64_t kFiberDataSeed = 4040;
inline constexpr int kFiberDecoderEpochs = 4;
inline constexpr int kFiberNetworkEpochs = 1;
inline constexpr std::array<double, 5> kFiberLambdas = {0.1, 0.3, 0.6, 1.0, 1.5};
inline constexpr std::array<double, 4> kFiberDoLambdas = {1e-4, 3e-4, 6e-4, 1e-3};
inline constexpr int kFiberDoIterations = 200;
inline constexpr std::size_t kFiberDoTuneGoals = 20;

inline const std::string kFiberData = "fiber_data.ndjson";
inline const std::string kFiberResults = "fiber_results.json";
inline const std::string kFiberTimingEncoder = "fiber_encoder_timing.json";
inline std::string fiber_decoder(std::uint64_t seed) { return "fiber_decoder_" + std::to_string(seed) + ".json"; }

// Arm: 8000 samples, test split of 400 goals.
inline constexpr int kArmSamples = 8000;
inline constexpr std::uint64_t kArmDataSeed = 5050;
inline constexpr int kArmEpochs = 50;
inline constexpr std::uint64_t kArmObstacleSeed = 0;

inline const std::string kArmResults = "arm_results.json";
inline std::string arm_model(const std::string& kind, std::uint64_t seed) {
  return "arm_" + kind + "_" + std::to_string(seed) + ".json";
}

}  // namespace amortize::acceptance
