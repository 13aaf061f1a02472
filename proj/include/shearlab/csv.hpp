#pragma once

#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

namespace shearlab {

// Numeric CSV with '#'-prefixed metadata lines ("# key: value").  Every
// number is written with %.17g so a rerun under the same spec reproduces
// the file byte for byte.
std::string format_g17(double v);

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns,
            const std::map<std::string, std::string>& meta);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void row(const std::vector<double>& values);
  // Pre-formatted row for mixed numeric/text tables; caller owns the commas.
  void row_raw(const std::string& line);
  void close();
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::FILE* f_ = nullptr;
  size_t ncol_ = 0;
};

struct CsvFile {
  std::map<std::string, std::string> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  size_t col(const std::string& name) const;  // BadConfig if absent
  double num(size_t r, size_t c) const;
};

CsvFile read_csv(const std::string& path);

// fnv1a over the raw bytes; the determinism check compares these.
uint64_t hash_file(const std::string& path);

}  // namespace shearlab
