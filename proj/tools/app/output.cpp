#include "app/output.hpp"

#include <cstdio>
#include <fstream>

#include "wavesearch/error.hpp"

namespace wavesearch::app {

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string Table::to_csv() const {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

Table trajectory_table(const Trajectory& trajectory, std::size_t n_items) {
  Table table;
  table.header = {"t", "X", "Xdot"};
  for (std::size_t i = 1; i <= n_items; ++i) table.header.push_back("x_" + std::to_string(i));
  for (std::size_t i = 1; i <= n_items; ++i) table.header.push_back("xdot_" + std::to_string(i));
  for (const char* h : {"E_total", "E_big", "E_register", "target_fraction"}) {
    table.header.emplace_back(h);
  }
  for (const auto& sample : trajectory.samples) {
    const auto& s = sample.state;
    std::vector<double> row{s.time, s.big_pos, s.big_vel};
    row.insert(row.end(), s.small_pos.begin(), s.small_pos.end());
    row.insert(row.end(), s.small_vel.begin(), s.small_vel.end());
    row.push_back(sample.energy.total);
    row.push_back(sample.energy.big());
    row.push_back(sample.energy.register_energy());
    row.push_back(sample.target_fraction);
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, path.string() + ": cannot open for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.close();
  if (!out) throw Error(ErrorKind::io, path.string() + ": write failed");
}

std::string format_json(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

}  // namespace wavesearch::app
