#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "benjamin/control_signal.hpp"
#include "benjamin/evolution.hpp"

namespace benjamin {

/// Exact header of trajectory CSV files.
inline constexpr const char* kTrajectoryHeader = "t,l2,hs,I1,I2,control_energy";

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Library version string, echoed into meta.txt.
const char* version();

/// $BENJAMIN_OUTPUT_DIR when set and non-empty, otherwise `fallback`.
std::filesystem::path output_directory(const std::string& fallback);

/// One row per sample, 17 significant digits.
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);
void write_trajectory_csv(const std::filesystem::path& path, const std::vector<DiagnosticsRecord>& rows);
/// Throws std::runtime_error on a header mismatch or a malformed row.
std::vector<DiagnosticsRecord> read_trajectory_csv(const std::filesystem::path& path);

/// t,k,amplitude with amplitude = |u_hat(k)| for k = 1..N/2-1.
void write_spectrum_csv(const std::filesystem::path& path, const Trajectory& traj);
/// t,h_l2,h_hs for each control sample.
void write_control_csv(const std::filesystem::path& path, const ControlSignal& h, double s);
/// index,eigenvalue in ascending order.
void write_gramian_csv(const std::filesystem::path& path, const std::vector<double>& eigenvalues);

/// "key=value" lines.
void write_key_values(const std::filesystem::path& path, const KeyValues& kv);
KeyValues read_key_values(const std::filesystem::path& path);

/// Formats v with 17 significant digits.
std::string format_number(double v);

}  // namespace benjamin
