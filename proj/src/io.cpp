#include "symplectic/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

#include "symplectic/errors.hpp"

namespace symplectic {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CapabilityError("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw CapabilityError("short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw CapabilityError("cannot move output into place at " + path.string() +
                          ": " + ec.message());
  }
}

std::string trajectory_csv(const Trajectory& traj) {
  std::string out = "t";
  const Index n = traj.states.empty() ? 0 : traj.states.front().size();
  for (Index i = 1; i <= n; ++i) out += ",x_" + std::to_string(i);
  out += '\n';
  for (std::size_t r = 0; r < traj.size(); ++r) {
    out += format_double(traj.times[r]);
    for (Index i = 0; i < n; ++i) {
      out += ',';
      out += format_double(traj.states[r][i]);
    }
    out += '\n';
  }
  return out;
}

std::string drift_csv(const DriftSeries& drift) {
  std::string out = "t,H,rel_drift\n";
  for (std::size_t r = 0; r < drift.times.size(); ++r) {
    out += format_double(drift.times[r]) + ',' + format_double(drift.energy[r]) +
           ',' + format_double(drift.relative_drift[r]) + '\n';
  }
  return out;
}

std::string triplet_csv(const SpMat& m) {
  std::string out = "i,j,value\n";
  for (Index k = 0; k < m.outerSize(); ++k) {
    for (SpMat::InnerIterator it(m, k); it; ++it) {
      out += std::to_string(it.row()) + ',' + std::to_string(it.col()) + ',' +
             format_double(it.value()) + '\n';
    }
  }
  return out;
}

void KeyValueReport::add(const std::string& key, double value) {
  entries_.emplace_back(key, format_double(value));
}

void KeyValueReport::add(const std::string& key, long long value) {
  entries_.emplace_back(key, std::to_string(value));
}

void KeyValueReport::add(const std::string& key, bool value) {
  entries_.emplace_back(key, value ? "true" : "false");
}

void KeyValueReport::add(const std::string& key, const std::string& value) {
  entries_.emplace_back(key, value);
}

std::string KeyValueReport::str() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + " = " + v + '\n';
  return out;
}

}  // namespace symplectic
