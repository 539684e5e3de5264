#include "clic/csv.hpp"

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace clic {

namespace {

std::string position(const std::string& path, long long row, long long col,
                     const std::string& what) {
  std::ostringstream s;
  s << path << ": row " << row << ", column " << col << ": " << what;
  return s.str();
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream stream(line);
  while (std::getline(stream, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

// Strips a trailing carriage return so CRLF files parse like LF files.
std::string chomp(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

CsvError::CsvError(const std::string& path, long long row, long long col, const std::string& what)
    : std::runtime_error(position(path, row, col, what)), row_(row), col_(col) {}

std::vector<std::vector<double>> read_matrix_csv(const std::string& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw CsvError(path, 0, 0, "cannot open file");
  std::vector<std::vector<double>> rows;
  std::string line;
  long long line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = chomp(line);
    if (line_no == 1 && has_header) continue;
    if (line.empty()) continue;
    std::vector<std::string> cells = split_line(line);
    std::vector<double> values(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      try {
        std::size_t used = 0;
        values[c] = std::stod(cells[c], &used);
        if (used != cells[c].size())
          throw CsvError(path, line_no, static_cast<long long>(c) + 1, "trailing characters");
      } catch (const CsvError&) {
        throw;
      } catch (const std::exception&) {
        throw CsvError(path, line_no, static_cast<long long>(c) + 1,
                       "not a number: '" + cells[c] + "'");
      }
    }
    if (rows.empty())
      width = values.size();
    else if (values.size() != width)
      throw CsvError(path, line_no, static_cast<long long>(values.size()), "ragged row");
    rows.push_back(std::move(values));
  }
  return rows;
}

void write_matrix_csv(const std::string& path, const std::vector<std::vector<double>>& rows,
                      const std::vector<std::string>& header) {
  std::ofstream out(path);
  if (!out) throw CsvError(path, 0, 0, "cannot open file for writing");
  out.precision(17);
  if (!header.empty()) {
    for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
    out << '\n';
  }
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
    out << '\n';
  }
}

void write_label_rows_csv(const std::string& path, const std::vector<std::vector<int>>& rows) {
  std::ofstream out(path);
  if (!out) throw CsvError(path, 0, 0, "cannot open file for writing");
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
    out << '\n';
  }
}

std::vector<std::vector<int>> read_label_rows_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CsvError(path, 0, 0, "cannot open file");
  std::vector<std::vector<int>> rows;
  std::string line;
  long long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = chomp(line);
    if (line.empty()) continue;
    std::vector<std::string> cells = split_line(line);
    std::vector<int> values(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      try {
        std::size_t used = 0;
        values[c] = std::stoi(cells[c], &used);
        if (used != cells[c].size())
          throw CsvError(path, line_no, static_cast<long long>(c) + 1, "trailing characters");
      } catch (const CsvError&) {
        throw;
      } catch (const std::exception&) {
        throw CsvError(path, line_no, static_cast<long long>(c) + 1,
                       "not an integer: '" + cells[c] + "'");
      }
    }
    rows.push_back(std::move(values));
  }
  return rows;
}

void write_manifest(const std::string& path, const std::map<std::string, std::string>& kv) {
  std::ofstream out(path);
  if (!out) throw CsvError(path, 0, 0, "cannot open file for writing");
  for (const auto& [key, value] : kv) out << key << " = " << value << '\n';
}

std::map<std::string, std::string> read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CsvError(path, 0, 0, "cannot open file");
  std::map<std::string, std::string> kv;
  std::string line;
  long long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = chomp(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw CsvError(path, line_no, 1, "expected 'key = value'");
    auto trim = [](std::string s) {
      std::size_t b = s.find_first_not_of(" \t");
      std::size_t e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw CsvError(path, line_no, 1, "empty key");
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

std::string file_hash_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CsvError(path, 0, 0, "cannot open file");
  std::uint64_t hash = 1469598103934665603ULL;
  char byte;
  while (in.get(byte)) {
    hash ^= static_cast<unsigned char>(byte);
    hash *= 1099511628211ULL;
  }
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << hash;
  return s.str();
}

}  // namespace clic
