#include "benjamin/io.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "benjamin/version.hpp"

namespace benjamin {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out.precision(17);
  return out;
}

}  // namespace

const char* version() { return kVersion; }

fs::path output_directory(const std::string& fallback) {
  const char* env = std::getenv("BENJAMIN_OUTPUT_DIR");
  if (env != nullptr && *env != '\0') return fs::path(env);
  return fs::path(fallback);
}

std::string format_number(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

void write_trajectory_csv(const fs::path& path, const std::vector<DiagnosticsRecord>& rows) {
  auto out = open_out(path);
  out << kTrajectoryHeader << '\n';
  for (const auto& d : rows) {
    out << d.t << ',' << d.l2 << ',' << d.hs << ',' << d.I1 << ',' << d.I2 << ',' << d.control_energy << '\n';
  }
}

void write_trajectory_csv(const fs::path& path, const Trajectory& traj) {
  write_trajectory_csv(path, traj.diagnostics);
}

std::vector<DiagnosticsRecord> read_trajectory_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || line != kTrajectoryHeader) {
    throw std::runtime_error("'" + path.string() + "' does not start with the trajectory header");
  }
  std::vector<DiagnosticsRecord> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    DiagnosticsRecord d;
    double* fields[] = {&d.t, &d.l2, &d.hs, &d.I1, &d.I2, &d.control_energy};
    std::string cell;
    for (int i = 0; i < 6; ++i) {
      if (!std::getline(row, cell, ',')) throw std::runtime_error("short row in '" + path.string() + "'");
      std::size_t used = 0;
      try {
        *fields[i] = std::stod(cell, &used);
      } catch (const std::logic_error&) {
        used = std::string::npos;
      }
      if (used != cell.size()) throw std::runtime_error("malformed number '" + cell + "'");
    }
    if (std::getline(row, cell, ',')) throw std::runtime_error("long row in '" + path.string() + "'");
    rows.push_back(d);
  }
  return rows;
}

void write_spectrum_csv(const fs::path& path, const Trajectory& traj) {
  auto out = open_out(path);
  out << "t,k,amplitude\n";
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto& u = traj.states[i];
    for (int k = 1; k < u.max_mode(); ++k) out << traj.times[i] << ',' << k << ',' << std::abs(u.coeff(k)) << '\n';
  }
}

void write_control_csv(const fs::path& path, const ControlSignal& h, double s) {
  auto out = open_out(path);
  out << "t,h_l2,h_hs\n";
  for (std::size_t i = 0; i < h.size(); ++i) {
    out << h.times()[i] << ',' << l2_norm(h.values()[i]) << ',' << sobolev_norm(h.values()[i], s) << '\n';
  }
}

void write_gramian_csv(const fs::path& path, const std::vector<double>& eigenvalues) {
  auto out = open_out(path);
  out << "index,eigenvalue\n";
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) out << i << ',' << eigenvalues[i] << '\n';
}

void write_key_values(const fs::path& path, const KeyValues& kv) {
  auto out = open_out(path);
  for (const auto& [k, v] : kv) out << k << '=' << v << '\n';
}

KeyValues read_key_values(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
  KeyValues kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    kv.emplace_back(line.substr(0, eq), line.substr(eq + 1));
  }
  return kv;
}

}  // namespace benjamin
