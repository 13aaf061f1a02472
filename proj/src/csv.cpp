#include "shearlab/csv.hpp"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "shearlab/common.hpp"

namespace shearlab {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns,
                     const std::map<std::string, std::string>& meta)
    : path_(path), ncol_(columns.size()) {
  f_ = std::fopen(path.c_str(), "wb");
  require(f_ != nullptr, ErrorCode::IoError, "cannot open for write: " + path);
  for (const auto& [k, v] : meta) std::fprintf(f_, "# %s: %s\n", k.c_str(), v.c_str());
  for (size_t i = 0; i < ncol_; ++i)
    std::fprintf(f_, "%s%s", columns[i].c_str(), i + 1 < ncol_ ? "," : "\n");
}

CsvWriter::~CsvWriter() { close(); }

void CsvWriter::row(const std::vector<double>& values) {
  require(f_ != nullptr, ErrorCode::IoError, "row after close: " + path_);
  require(values.size() == ncol_, ErrorCode::IoError, "column count mismatch in " + path_);
  for (size_t i = 0; i < ncol_; ++i)
    std::fprintf(f_, "%.17g%s", values[i], i + 1 < ncol_ ? "," : "\n");
}

void CsvWriter::row_raw(const std::string& line) {
  require(f_ != nullptr, ErrorCode::IoError, "row after close: " + path_);
  std::fprintf(f_, "%s\n", line.c_str());
}

void CsvWriter::close() {
  if (f_ != nullptr) {
    std::fclose(f_);
    f_ = nullptr;
  }
}

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

}  // namespace

size_t CsvFile::col(const std::string& name) const {
  for (size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  fail(ErrorCode::BadConfig, "missing CSV column: " + name);
}

double CsvFile::num(size_t r, size_t c) const {
  require(r < rows.size() && c < rows[r].size(), ErrorCode::IoError, "CSV index out of range");
  return std::strtod(rows[r][c].c_str(), nullptr);
}

CsvFile read_csv(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::IoError, "cannot open for read: " + path);
  CsvFile f;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = trim(line.substr(1));
      size_t colon = body.find(':');
      if (colon != std::string::npos)
        f.meta[trim(body.substr(0, colon))] = trim(body.substr(colon + 1));
      continue;
    }
    if (!header_seen) {
      f.columns = split(line, ',');
      header_seen = true;
    } else {
      f.rows.push_back(split(line, ','));
    }
  }
  require(header_seen, ErrorCode::IoError, "CSV has no header row: " + path);
  return f;
}

uint64_t hash_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::IoError, "cannot open for hash: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string bytes = ss.str();
  return fnv1a(bytes.data(), bytes.size());
}

}  // namespace shearlab
