#pragma once
// Binary snapshot container shared by wave-data caches and simulation
// checkpoints: magic + version + kind + owner hash, then named sections of
// little-endian f64 / c128 / i64 payloads. Writes go to a temp file first and
// rename into place, so an interrupted run never leaves a torn snapshot.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "shearlab/numerics.hpp"

namespace shearlab {

inline constexpr std::uint32_t kSnapshotWave = 1;
inline constexpr std::uint32_t kSnapshotSim = 2;

class SnapshotWriter {
 public:
  SnapshotWriter(std::uint32_t kind, std::uint64_t hash) : kind_(kind), hash_(hash) {}
  void add(const std::string& name, const std::vector<double>& v);
  void add(const std::string& name, const std::vector<cplx>& v);
  void add(const std::string& name, const std::vector<std::int64_t>& v);
  void add_scalar(const std::string& name, double x) { add(name, std::vector<double>{x}); }
  void add_scalar(const std::string& name, std::int64_t x) {
    add(name, std::vector<std::int64_t>{x});
  }
  void write(const std::string& path) const;

 private:
  struct Section {
    std::string name;
    std::uint8_t elem = 0;  // 0 f64, 1 c128, 2 i64
    std::vector<char> payload;
  };
  std::uint32_t kind_ = 0;
  std::uint64_t hash_ = 0;
  std::vector<Section> sections_;
  void push(const std::string& name, std::uint8_t elem, const void* data, std::size_t bytes);
};

class SnapshotReader {
 public:
  explicit SnapshotReader(const std::string& path);
  std::uint32_t kind() const { return kind_; }
  std::uint64_t hash() const { return hash_; }
  bool has(const std::string& name) const;
  const std::vector<double>& f64(const std::string& name) const;
  const std::vector<cplx>& c128(const std::string& name) const;
  const std::vector<std::int64_t>& i64(const std::string& name) const;
  double scalar(const std::string& name) const;
  std::int64_t scalar_i(const std::string& name) const;

 private:
  std::uint32_t kind_ = 0;
  std::uint64_t hash_ = 0;
  std::string path_;
  std::map<std::string, std::vector<double>> f64_;
  std::map<std::string, std::vector<cplx>> c128_;
  std::map<std::string, std::vector<std::int64_t>> i64_;
};

}  // namespace shearlab
