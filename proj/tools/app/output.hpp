#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wavesearch/wave_engine.hpp"

namespace wavesearch::app {

/// Formats a double with 17 significant digits, the shortest width that
/// round-trips every binary64 value.
std::string format_double(double value);

/// A header plus rows of numbers, written as comma-separated LF-terminated text.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::string to_csv() const;
};

/// t,X,Xdot,x_1..x_N,xdot_1..xdot_N,E_total,E_big,E_register,target_fraction.
/// An empty trajectory yields the header for `n_items` oscillators only.
Table trajectory_table(const Trajectory& trajectory, std::size_t n_items);

/// Writes `contents` byte for byte; throws Error(io) naming the path.
void write_file(const std::filesystem::path& path, const std::string& contents);

/// Two-space indented JSON with a trailing newline.
std::string format_json(const nlohmann::json& doc);

}  // namespace wavesearch::app
