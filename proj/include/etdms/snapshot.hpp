#pragma once

#include <cstdint>
#include <string>

#include "etdms/field.hpp"

namespace etdms {

// Bit-exact snapshot file:
//   magic "ETDS", u32 version=1, u64 N, f64 L, f64 t,
//   then N*N f64 nodal values, row-major, little-endian.
struct SnapshotData {
    std::uint64_t N = 0;
    double L = 0.0;
    double t = 0.0;
    std::vector<double> values;
};

void write_snapshot(const std::string& path, const Field& f, double t);
SnapshotData read_snapshot(const std::string& path);

}  // namespace etdms
