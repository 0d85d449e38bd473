#include "discomax/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace discomax {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

double parse_cell(const std::string& cell, std::size_t data_row, const std::string& column) {
  const std::string where =
      "row " + std::to_string(data_row) + ", column '" + column + "'";
  if (cell.empty()) throw csv_error("missing value at " + where);
  double value = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw csv_error("non-numeric value '" + cell + "' at " + where);
  if (!std::isfinite(value))
    throw csv_error("non-finite value '" + cell + "' at " + where);
  return value;
}

struct RawCsv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

RawCsv read_raw_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path + "'");

  RawCsv raw;
  std::string line;
  if (!std::getline(in, line)) throw csv_error("'" + path + "' is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  raw.header = split_line(line);
  if (raw.header.empty()) throw csv_error("'" + path + "' has an empty header row");
  for (const std::string& name : raw.header)
    if (name.empty()) throw csv_error("'" + path + "' has an unnamed header column");

  std::size_t data_row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;
    ++data_row;
    const std::vector<std::string> cells = split_line(line);
    if (cells.size() != raw.header.size())
      throw csv_error("row " + std::to_string(data_row) + " has " +
                      std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(raw.header.size()));
    std::vector<double> values(cells.size());
    for (std::size_t j = 0; j < cells.size(); ++j)
      values[j] = parse_cell(cells[j], data_row, raw.header[j]);
    raw.rows.push_back(std::move(values));
  }
  return raw;
}

}  // namespace

Dataset load_csv(const std::string& path, const std::vector<std::string>& response_columns,
                 bool standardize) {
  if (response_columns.empty()) throw csv_error("at least one response column is required");
  const RawCsv raw = read_raw_csv(path);

  std::set<std::string> seen;
  for (const std::string& name : raw.header)
    if (!seen.insert(name).second)
      throw csv_error("duplicate column name '" + name + "' in '" + path + "'");

  std::vector<bool> is_response(raw.header.size(), false);
  for (const std::string& name : response_columns) {
    const auto it = std::find(raw.header.begin(), raw.header.end(), name);
    if (it == raw.header.end())
      throw csv_error("unknown response column '" + name + "'");
    is_response[static_cast<std::size_t>(it - raw.header.begin())] = true;
  }

  const std::size_t n = raw.rows.size();
  if (n < 3) throw csv_error("'" + path + "' has " + std::to_string(n) +
                             " data rows; at least 3 are required");

  Dataset ds;
  std::vector<std::size_t> feature_idx, response_idx;
  for (std::size_t j = 0; j < raw.header.size(); ++j) {
    if (is_response[j]) {
      response_idx.push_back(j);
      ds.response_names.push_back(raw.header[j]);
    } else {
      feature_idx.push_back(j);
      ds.feature_names.push_back(raw.header[j]);
    }
  }
  if (feature_idx.empty()) throw csv_error("no feature columns left after removing responses");

  ds.x = Matrix(n, feature_idx.size());
  ds.y = Matrix(n, response_idx.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < feature_idx.size(); ++j) ds.x(i, j) = raw.rows[i][feature_idx[j]];
    for (std::size_t j = 0; j < response_idx.size(); ++j) ds.y(i, j) = raw.rows[i][response_idx[j]];
  }

  for (std::size_t j = 0; j < response_idx.size(); ++j) {
    double lo = ds.y(0, j), hi = ds.y(0, j);
    for (std::size_t i = 1; i < n; ++i) {
      lo = std::min(lo, ds.y(i, j));
      hi = std::max(hi, ds.y(i, j));
    }
    if (lo == hi)
      throw degenerate_error("response column '" + ds.response_names[j] + "' is constant");
  }

  if (standardize) {
    const double dn = static_cast<double>(n);
    for (std::size_t j = 0; j < ds.x.cols(); ++j) {
      double mean = 0.0;
      for (std::size_t i = 0; i < n; ++i) mean += ds.x(i, j);
      mean /= dn;
      double var = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = ds.x(i, j) - mean;
        var += d * d;
      }
      const double sd = std::max(std::sqrt(var / (dn - 1.0)), 1e-12);
      for (std::size_t i = 0; i < n; ++i) ds.x(i, j) = (ds.x(i, j) - mean) / sd;
    }
    ds.standardized = true;
  }
  return ds;
}

Matrix read_csv_matrix(const std::string& path) {
  const RawCsv raw = read_raw_csv(path);
  if (raw.rows.empty()) throw csv_error("'" + path + "' has no data rows");
  Matrix out(raw.rows.size(), raw.header.size());
  for (std::size_t i = 0; i < raw.rows.size(); ++i)
    for (std::size_t j = 0; j < raw.header.size(); ++j) out(i, j) = raw.rows[i][j];
  return out;
}

}  // namespace discomax
