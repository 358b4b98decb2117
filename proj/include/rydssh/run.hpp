// run.hpp - orchestrate one configured experiment and write its outputs
#pragma once

#include "rydssh/config.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rydssh {

// Environment variable consulted when neither --out nor output.dir is given.
inline constexpr const char* kOutputDirEnv = "RYDSSH_OUTPUT_DIR";

struct RunOptions {
    std::optional<std::filesystem::path> out_dir;  // overrides config and environment
    std::uint64_t seed = 0;                        // noise in sfi_pipeline only
};

struct RunSummary {
    std::string experiment;
    std::map<std::string, double> scalars;
    std::vector<std::filesystem::path> files;
};

std::filesystem::path resolve_output_dir(const RunConfig& config, const RunOptions& options);

// Writes CSV outputs plus <stem>_summary.json. Deterministic for fixed config and seed.
RunSummary run(const RunConfig& config, const RunOptions& options = {});

}  // namespace rydssh
