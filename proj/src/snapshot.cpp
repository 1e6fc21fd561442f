#include "etdms/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace etdms {

static_assert(std::endian::native == std::endian::little,
              "snapshot I/O assumes a little-endian host");

namespace {
constexpr char kMagic[4] = {'E', 'T', 'D', 'S'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

void write_snapshot(const std::string& path, const Field& f, double t) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("write_snapshot: cannot open " + path);
    const std::uint64_t N = static_cast<std::uint64_t>(f.grid->N);
    const double L = f.grid->L;
    os.write(kMagic, 4);
    os.write(reinterpret_cast<const char*>(&kVersion), sizeof(kVersion));
    os.write(reinterpret_cast<const char*>(&N), sizeof(N));
    os.write(reinterpret_cast<const char*>(&L), sizeof(L));
    os.write(reinterpret_cast<const char*>(&t), sizeof(t));
    os.write(reinterpret_cast<const char*>(f.v.data()),
             static_cast<std::streamsize>(f.v.size() * sizeof(double)));
    if (!os) throw std::runtime_error("write_snapshot: write failed for " + path);
}

SnapshotData read_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_snapshot: cannot open " + path);
    char magic[4];
    std::uint32_t version = 0;
    SnapshotData d;
    is.read(magic, 4);
    is.read(reinterpret_cast<char*>(&version), sizeof(version));
    if (!is || std::memcmp(magic, kMagic, 4) != 0) {
        throw std::runtime_error("read_snapshot: bad magic in " + path);
    }
    if (version != kVersion) {
        throw std::runtime_error("read_snapshot: unsupported version in " + path);
    }
    is.read(reinterpret_cast<char*>(&d.N), sizeof(d.N));
    is.read(reinterpret_cast<char*>(&d.L), sizeof(d.L));
    is.read(reinterpret_cast<char*>(&d.t), sizeof(d.t));
    if (!is || d.N == 0 || d.N > (1u << 20)) {
        throw std::runtime_error("read_snapshot: corrupt header in " + path);
    }
    d.values.resize(d.N * d.N);
    is.read(reinterpret_cast<char*>(d.values.data()),
            static_cast<std::streamsize>(d.values.size() * sizeof(double)));
    if (!is) throw std::runtime_error("read_snapshot: truncated data in " + path);
    return d;
}

}  // namespace etdms
