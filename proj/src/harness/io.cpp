#include "nlslab/harness/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

#include "nlslab/errors.hpp"

namespace nlslab::harness {

std::string format_number(double x) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return {buf.data(), res.ptr};
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvTable::add_row(std::initializer_list<double> values) { add_row(std::vector<double>(values)); }

void CsvTable::add_row(const std::vector<double>& values) {
  if (values.size() != columns_.size()) throw DimensionError("CsvTable: row width differs from header");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) body_ += ',';
    body_ += format_number(values[i]);
  }
  body_ += '\n';
  ++rows_;
}

std::string CsvTable::str() const {
  std::string head;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) head += ',';
    head += columns_[i];
  }
  return head + '\n' + body_;
}

std::string trajectory_csv(const Trajectory& traj) {
  CsvTable table({"t", "n", "re", "im"});
  const int K = traj.grid().max_mode();
  for (std::size_t i = 0; i < traj.size(); ++i) {
    for (int n = -K; n <= K; ++n) {
      const complex c = traj.state(i)[n];
      table.add_row({traj.times()[i], static_cast<double>(n), c.real(), c.imag()});
    }
  }
  return table.str();
}

namespace {

double parse_double(const std::string& field, std::size_t line) {
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
    throw ParameterError("trajectory csv: bad number '" + field + "' on line " + std::to_string(line));
  }
  return v;
}

}  // namespace

Trajectory read_trajectory_csv(const std::filesystem::path& path, const EquationSpec& spec) {
  std::ifstream in(path);
  if (!in) throw ParameterError("trajectory csv: cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "t,n,re,im") {
    throw ParameterError("trajectory csv: expected header t,n,re,im");
  }
  std::vector<double> times;
  std::vector<std::map<int, complex>> rows;
  int K = 0;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::array<std::string, 4> f;
    std::stringstream ss(line);
    for (auto& x : f) {
      if (!std::getline(ss, x, ',')) {
        throw ParameterError("trajectory csv: short row on line " + std::to_string(lineno));
      }
    }
    const double t = parse_double(f[0], lineno);
    const int n = static_cast<int>(parse_double(f[1], lineno));
    if (times.empty() || times.back() != t) {
      times.push_back(t);
      rows.emplace_back();
    }
    rows.back()[n] = {parse_double(f[2], lineno), parse_double(f[3], lineno)};
    K = std::max(K, std::abs(n));
  }
  const TorusGrid grid(2 * K + 2);
  std::vector<SpectralField> states;
  for (const auto& r : rows) {
    if (r.size() != static_cast<std::size_t>(2 * K + 1)) {
      throw DimensionError("trajectory csv: instant with missing modes");
    }
    SpectralField f(grid);
    for (const auto& [n, c] : r) f.set(n, c);
    states.push_back(std::move(f));
  }
  return Trajectory(std::move(times), std::move(states), spec);
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  const auto tmp = path.parent_path() / ("." + path.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace nlslab::harness
