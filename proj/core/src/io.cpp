#include "rlasso/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

#include "rlasso/error.hpp"

namespace rlasso {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

CsvRegression read_csv_regression(const std::string& path, const std::string& response_column) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw DataError("'" + path + "' is empty (header row required)");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  const std::vector<std::string> header = split_csv_line(line);
  std::set<std::string> seen;
  for (const auto& h : header) {
    if (h.empty()) throw DataError("'" + path + "': empty column name in header");
    if (!seen.insert(h).second) throw DataError("'" + path + "': duplicate column '" + h + "'");
  }
  std::size_t response_idx = header.size();
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] == response_column) response_idx = j;
  }
  if (response_idx == header.size()) {
    throw DataError("'" + path + "': response column '" + response_column + "' not found");
  }
  if (header.size() < 2) throw DataError("'" + path + "': no predictor columns");

  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw DataError("'" + path + "' line " + std::to_string(line_no) + ": expected " +
                      std::to_string(header.size()) + " fields, found " +
                      std::to_string(cells.size()));
    }
    std::vector<double> values(cells.size());
    for (std::size_t j = 0; j < cells.size(); ++j) {
      const std::string& c = cells[j];
      double v = 0.0;
      const char* first = c.data();
      const char* last = c.data() + c.size();
      if (!c.empty() && *first == '+') ++first;
      const auto res = std::from_chars(first, last, v);
      if (c.empty() || res.ec != std::errc() || res.ptr != last || !std::isfinite(v)) {
        throw DataError("'" + path + "' row " + std::to_string(rows.size() + 1) + ", column '" +
                        header[j] + "': non-numeric value '" + c + "'");
      }
      values[j] = v;
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw DataError("'" + path + "' has no data rows");

  CsvRegression out;
  out.response = response_column;
  const auto n = static_cast<Index>(rows.size());
  const auto p = static_cast<Index>(header.size() - 1);
  out.y.resize(n);
  out.X.resize(n, p);
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j != response_idx) out.names.push_back(header[j]);
  }
  for (Index i = 0; i < n; ++i) {
    Index col = 0;
    for (std::size_t j = 0; j < header.size(); ++j) {
      if (j == response_idx) {
        out.y(i) = rows[static_cast<std::size_t>(i)][j];
      } else {
        out.X(i, col++) = rows[static_cast<std::size_t>(i)][j];
      }
    }
  }
  return out;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace rlasso
