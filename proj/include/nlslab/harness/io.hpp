#pragma once

// Report and table output.
//
// Trajectory CSV: header `t,n,re,im`, then one row per (recorded instant,
// mode) with modes -K..K in increasing order inside each instant.  Numbers use
// the shortest decimal form that round-trips, so identical runs give
// identical bytes.

#include <filesystem>
#include <initializer_list>
#include <string>
#include <vector>

#include "nlslab/dynamics.hpp"

namespace nlslab::harness {

/// Shortest round-trip decimal form of x.
std::string format_number(double x);

/// Column-oriented CSV builder.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);
  void add_row(std::initializer_list<double> values);
  void add_row(const std::vector<double>& values);
  std::size_t rows() const noexcept { return rows_; }
  std::string str() const;

 private:
  std::vector<std::string> columns_;
  std::string body_;
  std::size_t rows_ = 0;
};

std::string trajectory_csv(const Trajectory& traj);

/// Inverse of trajectory_csv; the band is inferred from the largest |n|.
Trajectory read_trajectory_csv(const std::filesystem::path& path, const EquationSpec& spec);

/// Writes `content` to a sibling temporary file and renames it over `path`.
void atomic_write(const std::filesystem::path& path, const std::string& content);

}  // namespace nlslab::harness
