#include "meanfield/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace meanfield {

namespace {

std::uint64_t to_le(double x) {
  std::uint64_t u;
  std::memcpy(&u, &x, sizeof(u));
  if (std::endian::native == std::endian::big) u = __builtin_bswap64(u);
  return u;
}

double from_le(std::uint64_t u) {
  if (std::endian::native == std::endian::big) u = __builtin_bswap64(u);
  double x;
  std::memcpy(&x, &u, sizeof(x));
  return x;
}

}  // namespace

void write_snapshot(const std::string& base, const Eigen::VectorXcd& v,
                    const SnapshotMeta& meta) {
  std::vector<std::uint64_t> raw(2 * v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    raw[2 * i] = to_le(v(i).real());
    raw[2 * i + 1] = to_le(v(i).imag());
  }
  std::ofstream bin(base + ".bin", std::ios::binary | std::ios::trunc);
  if (!bin) throw std::runtime_error("snapshot: cannot open " + base + ".bin for writing");
  bin.write(reinterpret_cast<const char*>(raw.data()), raw.size() * sizeof(std::uint64_t));
  if (!bin) throw std::runtime_error("snapshot: short write to " + base + ".bin");
  bin.close();

  nlohmann::json side;
  side["format"] = "interleaved-re-im-f64-le";
  side["count"] = v.size();
  side["sites"] = meta.sites;
  side["n_max"] = meta.n_max;
  side["basis_hash"] = meta.basis_hash;
  side["time"] = meta.time;
  std::ofstream js(base + ".json", std::ios::trunc);
  if (!js) throw std::runtime_error("snapshot: cannot open " + base + ".json for writing");
  js << side.dump(2) << "\n";
}

Eigen::VectorXcd read_snapshot(const std::string& base, SnapshotMeta* meta) {
  std::ifstream js(base + ".json");
  if (!js) throw std::runtime_error("snapshot: cannot open " + base + ".json");
  nlohmann::json side = nlohmann::json::parse(js);
  if (side.at("format") != "interleaved-re-im-f64-le")
    throw std::runtime_error("snapshot: unknown format in " + base + ".json");
  const std::int64_t count = side.at("count").get<std::int64_t>();

  std::ifstream bin(base + ".bin", std::ios::binary | std::ios::ate);
  if (!bin) throw std::runtime_error("snapshot: cannot open " + base + ".bin");
  const std::int64_t bytes = bin.tellg();
  if (bytes != count * 16)
    throw std::runtime_error("snapshot: " + base + ".bin holds " + std::to_string(bytes) +
                             " bytes, sidecar expects " + std::to_string(count * 16));
  bin.seekg(0);
  std::vector<std::uint64_t> raw(2 * count);
  bin.read(reinterpret_cast<char*>(raw.data()), bytes);
  if (!bin) throw std::runtime_error("snapshot: short read from " + base + ".bin");

  Eigen::VectorXcd v(count);
  for (std::int64_t i = 0; i < count; ++i)
    v(i) = cplx(from_le(raw[2 * i]), from_le(raw[2 * i + 1]));
  if (meta) {
    meta->sites = side.at("sites").get<int>();
    meta->n_max = side.at("n_max").get<int>();
    meta->basis_hash = side.at("basis_hash").get<std::uint64_t>();
    meta->time = side.at("time").get<double>();
  }
  return v;
}

}  // namespace meanfield
