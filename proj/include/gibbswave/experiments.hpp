#pragma once

#include "gibbswave/config.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace gibbswave {

inline constexpr int kExitOk = 0;
inline constexpr int kExitBadConfig = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitInconclusive = 3;

// Runs one named experiment (sample, evolve, invariance, tails, converge,
// growth), writing RFC-4180 CSV outputs plus manifest.json into out_dir.
// CSV bytes are a pure function of (config, seed) — independent of workers.
// Returns a CLI exit code; config/numerical errors are thrown as
// config_error / numerical_error for the caller to map.
int run_command(const std::string& command, const Config& cfg,
                std::uint64_t seed, const std::filesystem::path& out_dir,
                int workers = 0);

}  // namespace gibbswave
