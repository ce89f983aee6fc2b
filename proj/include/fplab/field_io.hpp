#pragma once

// Flat binary and CSV serialization of trajectories (layout in docs/formats.md).

#include <filesystem>
#include <string>
#include <vector>

#include "fplab/grid.hpp"

namespace fplab {

/// Little-endian: int32 dim, int32 N, int32 count, count times, then each
/// snapshot's N^dim values row-major (x fastest).
std::vector<char> encode_trajectory(const Trajectory& traj);
Trajectory decode_trajectory(const std::vector<char>& bytes);

void write_trajectory(const Trajectory& traj, const std::filesystem::path& path);
Trajectory read_trajectory(const std::filesystem::path& path);

/// Columns: t, x, y (y omitted in 1D), value. Refuses grids with more than
/// 4096 nodes.
std::string trajectory_csv(const Trajectory& traj);

}  // namespace fplab
