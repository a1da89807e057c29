#pragma once

#include <string>
#include <utility>

#include "hllg/field.hpp"

namespace hllg {

// Flat binary state file: magic "HLLG", u32 version, u32 n, u32 m,
// u32 dims[3], f64 box[3], f64 t, u64 payload length, then the nodal values
// row major with the m+1 components interleaved per node. Everything is
// little-endian regardless of the host.
//
// The base point Q is not part of the format; read_snapshot reconstructs it
// as the normalized spatial mean (falling back to the last basis vector for
// mean-free fields).
inline constexpr std::uint32_t kSnapshotVersion = 1;

void write_snapshot(const SphereField& u, double t, const std::string& path);
std::pair<SphereField, double> read_snapshot(const std::string& path);

// Header summary for `inspect`.
std::string describe_snapshot(const std::string& path);

}  // namespace hllg
