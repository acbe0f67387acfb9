#include "mns/snapshot.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>

namespace mns::fields {

namespace {

template <class T>
void put(std::string& out, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.append(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get(const std::string& in, std::size_t& pos) {
  if (pos + sizeof(T) > in.size()) throw std::runtime_error("snapshot: truncated file");
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, in.data() + pos, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  pos += sizeof(T);
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_snapshot(const std::filesystem::path& path, const VectorField& u, double t) {
  const auto& g = u.grid();
  std::string buf;
  buf.reserve(32 + 3 * g.real_size() * sizeof(double));
  buf.append("MNSF", 4);
  put<std::uint32_t>(buf, kSnapshotVersion);
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(g.points()));
  put<double>(buf, g.side_length());
  put<double>(buf, t);
  for (int c = 0; c < 3; ++c) {
    for (double x : u.component(c)) put<double>(buf, x);
  }
  write_file_atomic(path, buf);
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open snapshot " + path.string());
  const std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < 4 || buf.compare(0, 4, "MNSF") != 0) {
    throw std::runtime_error("snapshot: bad magic in " + path.string());
  }
  std::size_t pos = 4;
  const auto version = get<std::uint32_t>(buf, pos);
  if (version != kSnapshotVersion) {
    throw std::runtime_error("snapshot: unsupported version " + std::to_string(version));
  }
  const auto n = get<std::uint32_t>(buf, pos);
  const auto l = get<double>(buf, pos);
  const auto t = get<double>(buf, pos);
  const TorusGrid grid(l, static_cast<int>(n));
  std::array<std::vector<double>, 3> comps;
  for (auto& c : comps) {
    c.resize(grid.real_size());
    for (auto& x : c) x = get<double>(buf, pos);
  }
  if (pos != buf.size()) throw std::runtime_error("snapshot: trailing bytes in " + path.string());
  return {VectorField(grid, std::move(comps)), t};
}

}  // namespace mns::fields
