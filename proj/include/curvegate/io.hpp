#pragma once

// File formats: pulse CSV, device JSON, unitary JSON, reports and plot data.
//
// Pulse CSV: header "t_ns,amp_mhz", one sample per line, LF endings, values
// printed with 17 significant digits. amp_mhz is Omega / (2 pi 1e6).

#include <filesystem>
#include <string>
#include <vector>

#include "curvegate/curvegeom.hpp"
#include "curvegate/device_sim.hpp"
#include "curvegate/dressing.hpp"
#include "curvegate/invariants.hpp"
#include "curvegate/slepian.hpp"
#include "json.hpp"

namespace curvegate {

// The pulse exactly as stored on disk. Writing and reading a table is
// bit-exact; conversion to SI units costs at most a rounding per value.
struct PulseTable {
  std::vector<double> t_ns;
  std::vector<double> amp_mhz;
};

PulseTable to_table(const Pulse& p);
Pulse from_table(const PulseTable& t);

std::string format_pulse_csv(const PulseTable& t);
// Throws InputError naming the offending line.
PulseTable parse_pulse_csv(const std::string& text);

void write_pulse_csv(const std::filesystem::path& path, const Pulse& p);
void write_pulse_table(const std::filesystem::path& path, const PulseTable& t);
PulseTable read_pulse_table(const std::filesystem::path& path);
Pulse read_pulse_csv(const std::filesystem::path& path);

nlohmann::json device_to_json(const DeviceParams& p);
// Throws InputError naming the missing or malformed key.
DeviceParams device_from_json(const nlohmann::json& j);
DeviceParams read_device(const std::filesystem::path& path);
void write_device(const std::filesystem::path& path, const DeviceParams& p);

// {"real": 4x4, "imag": 4x4}
Mat4 unitary_from_json(const nlohmann::json& j);
nlohmann::json unitary_to_json(const Mat4& u);
Mat4 read_unitary(const std::filesystem::path& path);

nlohmann::json dressing_to_json(const DressingResult& d);

// Columns written one sequence per column, header k0,k1,...
void write_basis_csv(const std::filesystem::path& path, const SlepianBasis& basis);

// Plot data: tidy CSVs for external plotting.
void write_curve_csv(const std::filesystem::path& path, const SpaceCurve& c);
void write_trace_csv(const std::filesystem::path& path, const std::vector<double>& trace);

std::string read_text(const std::filesystem::path& path);
// Writes to a temporary sibling and renames it into place.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace curvegate
