#ifndef CLIC_CSV_HPP
#define CLIC_CSV_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace clic {

// Data-format failure with 1-based row/column coordinates for diagnostics.
class CsvError : public std::runtime_error {
 public:
  CsvError(const std::string& path, long long row, long long col, const std::string& what);
  long long row() const { return row_; }
  long long col() const { return col_; }

 private:
  long long row_;
  long long col_;
};

// Rectangular numeric CSV: '.' decimal point, optional header row, no missing
// cells. Ragged rows or non-numeric cells raise CsvError with coordinates.
std::vector<std::vector<double>> read_matrix_csv(const std::string& path, bool has_header);

void write_matrix_csv(const std::string& path, const std::vector<std::vector<double>>& rows,
                      const std::vector<std::string>& header);

// Integer label rows (one partition per row, comma separated, 1-based).
void write_label_rows_csv(const std::string& path, const std::vector<std::vector<int>>& rows);
std::vector<std::vector<int>> read_label_rows_csv(const std::string& path);

// Flat key = value manifest, one pair per line, keys written in sorted order
// so equal configurations produce byte-identical files.
void write_manifest(const std::string& path, const std::map<std::string, std::string>& kv);
std::map<std::string, std::string> read_manifest(const std::string& path);

// FNV-1a hash of a file's bytes, rendered as 16 hex digits; summaries carry
// the manifest hash for provenance.
std::string file_hash_hex(const std::string& path);

}  // namespace clic

#endif  // CLIC_CSV_HPP
