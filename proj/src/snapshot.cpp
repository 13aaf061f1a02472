#include "shearlab/snapshot.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>

#include "shearlab/common.hpp"

namespace shearlab {

namespace {
constexpr char kMagic[4] = {'S', 'H', 'L', 'B'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::string& buf, const T& x) {
  char tmp[sizeof(T)];
  std::memcpy(tmp, &x, sizeof(T));
  buf.append(tmp, sizeof(T));
}

template <class T>
T take(const std::string& buf, std::size_t& pos, const std::string& path) {
  require(pos + sizeof(T) <= buf.size(), ErrorCode::IoError, "snapshot truncated: " + path);
  T x;
  std::memcpy(&x, buf.data() + pos, sizeof(T));
  pos += sizeof(T);
  return x;
}
}  // namespace

void SnapshotWriter::push(const std::string& name, std::uint8_t elem, const void* data,
                          std::size_t bytes) {
  require(name.size() >= 1 && name.size() <= 8, ErrorCode::BadConfig,
          "snapshot section name must be 1..8 chars: " + name);
  Section s;
  s.name = name;
  s.elem = elem;
  s.payload.assign(static_cast<const char*>(data), static_cast<const char*>(data) + bytes);
  sections_.push_back(std::move(s));
}

void SnapshotWriter::add(const std::string& name, const std::vector<double>& v) {
  push(name, 0, v.data(), v.size() * sizeof(double));
}
void SnapshotWriter::add(const std::string& name, const std::vector<cplx>& v) {
  push(name, 1, v.data(), v.size() * sizeof(cplx));
}
void SnapshotWriter::add(const std::string& name, const std::vector<std::int64_t>& v) {
  push(name, 2, v.data(), v.size() * sizeof(std::int64_t));
}

void SnapshotWriter::write(const std::string& path) const {
  std::string buf;
  buf.append(kMagic, 4);
  put(buf, kVersion);
  put(buf, kind_);
  put(buf, hash_);
  put(buf, static_cast<std::uint32_t>(sections_.size()));
  for (const auto& s : sections_) {
    char name[8] = {0};
    std::memcpy(name, s.name.data(), s.name.size());
    buf.append(name, 8);
    buf.push_back(static_cast<char>(s.elem));
    const std::size_t esz = s.elem == 1 ? sizeof(cplx) : 8;
    put(buf, static_cast<std::uint64_t>(s.payload.size() / esz));
    buf.append(s.payload.data(), s.payload.size());
  }

  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(out.good(), ErrorCode::IoError, "cannot open for write: " + tmp);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    out.flush();
    require(out.good(), ErrorCode::IoError, "short write: " + tmp);
  }
  require(std::rename(tmp.c_str(), path.c_str()) == 0, ErrorCode::IoError,
          "cannot move snapshot into place: " + path);
}

SnapshotReader::SnapshotReader(const std::string& path) : path_(path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::IoError, "cannot open snapshot: " + path);
  std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::size_t pos = 0;
  require(buf.size() >= 4 && std::memcmp(buf.data(), kMagic, 4) == 0, ErrorCode::IoError,
          "not a snapshot file: " + path);
  pos = 4;
  const auto ver = take<std::uint32_t>(buf, pos, path);
  require(ver == kVersion, ErrorCode::IoError, "unsupported snapshot version: " + path);
  kind_ = take<std::uint32_t>(buf, pos, path);
  hash_ = take<std::uint64_t>(buf, pos, path);
  const auto nsec = take<std::uint32_t>(buf, pos, path);
  for (std::uint32_t s = 0; s < nsec; ++s) {
    require(pos + 9 <= buf.size(), ErrorCode::IoError, "snapshot truncated: " + path);
    char name[9] = {0};
    std::memcpy(name, buf.data() + pos, 8);
    pos += 8;
    const std::uint8_t elem = static_cast<std::uint8_t>(buf[pos++]);
    const auto count = take<std::uint64_t>(buf, pos, path);
    const std::size_t esz = elem == 1 ? sizeof(cplx) : 8;
    require(pos + count * esz <= buf.size(), ErrorCode::IoError, "snapshot truncated: " + path);
    if (elem == 0) {
      std::vector<double> v(count);
      std::memcpy(v.data(), buf.data() + pos, count * esz);
      f64_[name] = std::move(v);
    } else if (elem == 1) {
      std::vector<cplx> v(count);
      std::memcpy(v.data(), buf.data() + pos, count * esz);
      c128_[name] = std::move(v);
    } else if (elem == 2) {
      std::vector<std::int64_t> v(count);
      std::memcpy(v.data(), buf.data() + pos, count * esz);
      i64_[name] = std::move(v);
    } else {
      fail(ErrorCode::IoError, "unknown snapshot element kind in " + path);
    }
    pos += count * esz;
  }
}

bool SnapshotReader::has(const std::string& name) const {
  return f64_.count(name) || c128_.count(name) || i64_.count(name);
}

const std::vector<double>& SnapshotReader::f64(const std::string& name) const {
  auto it = f64_.find(name);
  require(it != f64_.end(), ErrorCode::IoError, "snapshot misses section " + name + ": " + path_);
  return it->second;
}
const std::vector<cplx>& SnapshotReader::c128(const std::string& name) const {
  auto it = c128_.find(name);
  require(it != c128_.end(), ErrorCode::IoError, "snapshot misses section " + name + ": " + path_);
  return it->second;
}
const std::vector<std::int64_t>& SnapshotReader::i64(const std::string& name) const {
  auto it = i64_.find(name);
  require(it != i64_.end(), ErrorCode::IoError, "snapshot misses section " + name + ": " + path_);
  return it->second;
}
double SnapshotReader::scalar(const std::string& name) const {
  const auto& v = f64(name);
  require(v.size() == 1, ErrorCode::IoError, "section " + name + " is not a scalar: " + path_);
  return v[0];
}
std::int64_t SnapshotReader::scalar_i(const std::string& name) const {
  const auto& v = i64(name);
  require(v.size() == 1, ErrorCode::IoError, "section " + name + " is not a scalar: " + path_);
  return v[0];
}

}  // namespace shearlab
