#include "curvegate/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <unistd.h>

#include "curvegate/errors.hpp"

namespace curvegate {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string fmt17(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s, std::size_t line, const char* column) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
    std::ostringstream msg;
    msg << "pulse CSV line " << line << ": cannot parse " << column << " value '" << s << "'";
    throw InputError(msg.str());
  }
  return v;
}

double json_number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw InputError(std::string("device JSON: missing key '") + key + "'");
  const auto& v = j.at(key);
  if (!v.is_number()) throw InputError(std::string("device JSON: key '") + key + "' must be a number");
  return v.get<double>();
}

}  // namespace

PulseTable to_table(const Pulse& p) {
  validate_pulse(p);
  PulseTable t;
  t.t_ns.resize(p.t.size());
  t.amp_mhz.resize(p.t.size());
  for (std::size_t i = 0; i < p.t.size(); ++i) {
    t.t_ns[i] = p.t[i] * 1e9;
    t.amp_mhz[i] = p.omega[i] / (kTwoPi * 1e6);
  }
  return t;
}

Pulse from_table(const PulseTable& t) {
  Pulse p;
  p.t.resize(t.t_ns.size());
  p.omega.resize(t.t_ns.size());
  for (std::size_t i = 0; i < t.t_ns.size(); ++i) {
    p.t[i] = t.t_ns[i] * 1e-9;
    p.omega[i] = t.amp_mhz[i] * (kTwoPi * 1e6);
  }
  validate_pulse(p);
  return p;
}

std::string format_pulse_csv(const PulseTable& t) {
  std::string out = "t_ns,amp_mhz\n";
  for (std::size_t i = 0; i < t.t_ns.size(); ++i) {
    out += fmt17(t.t_ns[i]);
    out += ',';
    out += fmt17(t.amp_mhz[i]);
    out += '\n';
  }
  return out;
}

PulseTable parse_pulse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  PulseTable t;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header) {
      if (line != "t_ns,amp_mhz") {
        throw InputError("pulse CSV line " + std::to_string(lineno) + ": expected header 't_ns,amp_mhz'");
      }
      header = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw InputError("pulse CSV line " + std::to_string(lineno) + ": expected exactly two columns");
    }
    const std::string_view sv(line);
    t.t_ns.push_back(parse_double(sv.substr(0, comma), lineno, "t_ns"));
    t.amp_mhz.push_back(parse_double(sv.substr(comma + 1), lineno, "amp_mhz"));
  }
  if (!header) throw InputError("pulse CSV is empty");
  if (t.t_ns.size() < 2) throw InputError("pulse CSV needs at least two samples");
  if (t.t_ns.front() != 0.0) throw InputError("pulse CSV: first sample must be at t_ns = 0");
  for (std::size_t i = 1; i < t.t_ns.size(); ++i) {
    if (!(t.t_ns[i] > t.t_ns[i - 1])) {
      throw InputError("pulse CSV: times must be strictly increasing (data row " + std::to_string(i + 1) + ")");
    }
  }
  return t;
}

void write_pulse_table(const std::filesystem::path& path, const PulseTable& t) {
  write_text_atomic(path, format_pulse_csv(t));
}

void write_pulse_csv(const std::filesystem::path& path, const Pulse& p) { write_pulse_table(path, to_table(p)); }

PulseTable read_pulse_table(const std::filesystem::path& path) {
  try {
    return parse_pulse_csv(read_text(path));
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

Pulse read_pulse_csv(const std::filesystem::path& path) { return from_table(read_pulse_table(path)); }

nlohmann::json device_to_json(const DeviceParams& p) {
  nlohmann::json j;
  j["bz_l0_ghz"] = p.bz_l0 / (kTwoPi * 1e9);
  j["bz_r0_ghz"] = p.bz_r0 / (kTwoPi * 1e9);
  j["bz_l1_mhz"] = p.bz_l1 / (kTwoPi * 1e6);
  j["bz_r1_mhz"] = p.bz_r1 / (kTwoPi * 1e6);
  j["by_l0_mhz"] = p.by_l0 / (kTwoPi * 1e6);
  j["by_r0_mhz"] = p.by_r0 / (kTwoPi * 1e6);
  j["phi_rad"] = p.phi;
  j["j_mhz"] = p.j / (kTwoPi * 1e6);
  if (p.drive_omega) {
    j["drive_omega"] = *p.drive_omega / (kTwoPi * 1e9);
  } else {
    j["drive_omega"] = "auto";
  }
  j["crosstalk"] = p.crosstalk;
  if (!p.static_transverse) j["static_transverse"] = false;
  return j;
}

DeviceParams device_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("device JSON must be an object");
  DeviceParams p;
  p.bz_l0 = json_number(j, "bz_l0_ghz") * kTwoPi * 1e9;
  p.bz_r0 = json_number(j, "bz_r0_ghz") * kTwoPi * 1e9;
  p.bz_l1 = json_number(j, "bz_l1_mhz") * kTwoPi * 1e6;
  p.bz_r1 = json_number(j, "bz_r1_mhz") * kTwoPi * 1e6;
  p.by_l0 = json_number(j, "by_l0_mhz") * kTwoPi * 1e6;
  p.by_r0 = json_number(j, "by_r0_mhz") * kTwoPi * 1e6;
  p.phi = json_number(j, "phi_rad");
  p.j = json_number(j, "j_mhz") * kTwoPi * 1e6;
  if (!j.contains("drive_omega")) throw InputError("device JSON: missing key 'drive_omega'");
  const auto& w = j.at("drive_omega");
  if (w.is_string()) {
    if (w.get<std::string>() != "auto") throw InputError("device JSON: 'drive_omega' must be \"auto\" or a number");
  } else if (w.is_number()) {
    p.drive_omega = w.get<double>() * kTwoPi * 1e9;
  } else {
    throw InputError("device JSON: 'drive_omega' must be \"auto\" or a number");
  }
  p.crosstalk = j.contains("crosstalk") ? json_number(j, "crosstalk") : 0.0;
  if (j.contains("static_transverse")) {
    if (!j.at("static_transverse").is_boolean()) throw InputError("device JSON: 'static_transverse' must be boolean");
    p.static_transverse = j.at("static_transverse").get<bool>();
  }
  validate_device(p);
  return p;
}

DeviceParams read_device(const std::filesystem::path& path) {
  try {
    return device_from_json(read_json(path));
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_device(const std::filesystem::path& path, const DeviceParams& p) { write_json(path, device_to_json(p)); }

Mat4 unitary_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("real") || !j.contains("imag")) {
    throw InputError("unitary JSON needs 'real' and 'imag' 4x4 arrays");
  }
  Mat4 u;
  for (const char* part : {"real", "imag"}) {
    const auto& rows = j.at(part);
    if (!rows.is_array() || rows.size() != 4) throw InputError(std::string("unitary JSON: '") + part + "' needs 4 rows");
    for (int r = 0; r < 4; ++r) {
      const auto& row = rows.at(r);
      if (!row.is_array() || row.size() != 4) {
        throw InputError(std::string("unitary JSON: '") + part + "' row " + std::to_string(r) + " needs 4 numbers");
      }
      for (int c = 0; c < 4; ++c) {
        if (!row.at(c).is_number()) throw InputError(std::string("unitary JSON: non-numeric entry in '") + part + "'");
        const double v = row.at(c).get<double>();
        if (part[0] == 'r') {
          u(r, c).real(v);
        } else {
          u(r, c).imag(v);
        }
      }
    }
  }
  return u;
}

nlohmann::json unitary_to_json(const Mat4& u) {
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (int r = 0; r < 4; ++r) {
    nlohmann::json a = nlohmann::json::array(), b = nlohmann::json::array();
    for (int c = 0; c < 4; ++c) {
      a.push_back(u(r, c).real());
      b.push_back(u(r, c).imag());
    }
    re.push_back(a);
    im.push_back(b);
  }
  return {{"real", re}, {"imag", im}};
}

Mat4 read_unitary(const std::filesystem::path& path) {
  try {
    return unitary_from_json(read_json(path));
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

nlohmann::json dressing_to_json(const DressingResult& d) {
  return {{"k1_angles", d.k1_angles}, {"k2_angles", d.k2_angles}, {"fidelity", d.fidelity}, {"target", d.target}};
}

void write_basis_csv(const std::filesystem::path& path, const SlepianBasis& basis) {
  std::string out;
  for (int q = 0; q < basis.k; ++q) out += (q ? ",k" : "k") + std::to_string(q);
  out += '\n';
  for (int i = 0; i < basis.n; ++i) {
    for (int q = 0; q < basis.k; ++q) {
      if (q) out += ',';
      out += fmt17(basis.vectors[q][i]);
    }
    out += '\n';
  }
  write_text_atomic(path, out);
}

void write_curve_csv(const std::filesystem::path& path, const SpaceCurve& c) {
  std::string out = "t_ns,x_ns,y_ns,z_ns,kappa_mhz\n";
  for (std::size_t i = 0; i < c.t.size(); ++i) {
    out += fmt17(c.t[i] * 1e9) + ',' + fmt17(c.r[i][0] * 1e9) + ',' + fmt17(c.r[i][1] * 1e9) + ',' +
           fmt17(c.r[i][2] * 1e9) + ',' + fmt17(c.kappa.empty() ? 0.0 : c.kappa[i] / (kTwoPi * 1e6)) + '\n';
  }
  write_text_atomic(path, out);
}

void write_trace_csv(const std::filesystem::path& path, const std::vector<double>& trace) {
  std::string out = "iter,cost\n";
  for (std::size_t i = 0; i < trace.size(); ++i) out += std::to_string(i) + ',' + fmt17(trace[i]) + '\n';
  write_text_atomic(path, out);
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + tmp.string() + "'");
    out << text;
    out.flush();
    if (!out) throw InputError("failed writing '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) { write_text_atomic(path, j.dump(2) + "\n"); }

nlohmann::json read_json(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("malformed JSON in '" + path.string() + "': " + e.what());
  }
}

}  // namespace curvegate
