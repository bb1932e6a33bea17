#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "app/config.hpp"

namespace wavesearch::app {

struct CommandResult {
  std::vector<std::filesystem::path> files;  // in write order
  nlohmann::json summary;
};

/// Runs a validated config and writes its CSV table(s) and summary JSON into
/// `output_dir`, creating it when missing. Outputs depend only on the config.
CommandResult run_command(const RunConfig& config, const std::filesystem::path& output_dir);

/// Query count used when the config leaves `q` unset.
std::uint64_t default_queries(std::size_t n_items, std::size_t n_targets);

}  // namespace wavesearch::app
