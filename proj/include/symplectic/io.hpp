#pragma once

// CSV and report serialization. Numbers are written with 17 significant
// digits, comma separated, with a header row and LF line endings. Files are
// written to a temporary sibling and renamed into place.

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "symplectic/diagnostics.hpp"
#include "symplectic/linalg.hpp"
#include "symplectic/rkg.hpp"

namespace symplectic {

std::string format_double(double v);

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content);

/// t,x_1,...,x_n
std::string trajectory_csv(const Trajectory& traj);
/// t,H,rel_drift
std::string drift_csv(const DriftSeries& drift);
/// i,j,value (0-based, column-major order)
std::string triplet_csv(const SpMat& m);

/// Flat `key = value` text report with insertion order preserved.
class KeyValueReport {
 public:
  void add(const std::string& key, double value);
  void add(const std::string& key, long long value);
  void add(const std::string& key, int value) { add(key, static_cast<long long>(value)); }
  void add(const std::string& key, bool value);
  void add(const std::string& key, const std::string& value);
  void add(const std::string& key, const char* value) { add(key, std::string(value)); }

  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }
  std::string str() const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace symplectic
