#include "fplab/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>

namespace fplab {

namespace {

static_assert(std::endian::native == std::endian::little, "binary layout assumes a little-endian host");

template <typename T>
void put(std::vector<char>& out, T v) {
  const auto* p = reinterpret_cast<const char*>(&v);
  out.insert(out.end(), p, p + sizeof(T));
}

template <typename T>
T take(const std::vector<char>& in, std::size_t& pos) {
  if (pos + sizeof(T) > in.size()) throw std::runtime_error("trajectory: truncated input");
  T v;
  std::memcpy(&v, in.data() + pos, sizeof(T));
  pos += sizeof(T);
  return v;
}

}  // namespace

std::vector<char> encode_trajectory(const Trajectory& traj) {
  const Grid& g = traj.grid();
  std::vector<char> out;
  out.reserve(12 + 8 * traj.size() * (1 + g.size()));
  put<std::int32_t>(out, g.dim());
  put<std::int32_t>(out, g.points_per_axis());
  put<std::int32_t>(out, static_cast<std::int32_t>(traj.size()));
  for (double t : traj.times()) put(out, t);
  for (const auto& f : traj.fields()) {
    for (double v : f.values()) put(out, v);
  }
  return out;
}

Trajectory decode_trajectory(const std::vector<char>& bytes) {
  std::size_t pos = 0;
  const auto dim = take<std::int32_t>(bytes, pos);
  const auto n = take<std::int32_t>(bytes, pos);
  const auto count = take<std::int32_t>(bytes, pos);
  if (count < 0) throw std::runtime_error("trajectory: negative sample count");
  const Grid grid(dim, n);
  std::vector<double> times(static_cast<std::size_t>(count));
  for (auto& t : times) t = take<double>(bytes, pos);
  Trajectory traj(grid);
  for (double t : times) {
    std::vector<double> v(grid.size());
    for (auto& x : v) x = take<double>(bytes, pos);
    traj.push_back(t, ScalarField(grid, std::move(v)));
  }
  if (pos != bytes.size()) throw std::runtime_error("trajectory: trailing bytes");
  return traj;
}

void write_trajectory(const Trajectory& traj, const std::filesystem::path& path) {
  const auto bytes = encode_trajectory(traj);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

Trajectory read_trajectory(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return decode_trajectory(bytes);
}

std::string trajectory_csv(const Trajectory& traj) {
  const Grid& g = traj.grid();
  if (g.size() > 4096) throw std::invalid_argument("trajectory_csv: grid too large for CSV");
  std::ostringstream os;
  os.precision(17);
  os << (g.dim() == 1 ? "t,x,value\n" : "t,x,y,value\n");
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto& f = traj.field(k);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const Point p = g.node(i);
      os << traj.time(k) << ',' << p[0] << ',';
      if (g.dim() == 2) os << p[1] << ',';
      os << f[i] << '\n';
    }
  }
  return os.str();
}

}  // namespace fplab
