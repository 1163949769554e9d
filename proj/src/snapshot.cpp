#include "hsflow/snapshot.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "hsflow/errors.hpp"

namespace hsflow {

namespace {

constexpr char kMagic[4] = {'H', 'S', 'F', '1'};
constexpr std::uint32_t kTripleCount = 3;

template <typename T>
void put(std::ostream& os, T value) {
    char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
    os.write(bytes, sizeof(T));
}

template <typename T>
T get(std::istream& is, const std::filesystem::path& path) {
    char bytes[sizeof(T)];
    if (!is.read(bytes, sizeof(T))) throw IoError("truncated snapshot: " + path.string());
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
    T value;
    std::memcpy(&value, bytes, sizeof(T));
    return value;
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const TripleField& field, double time) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open snapshot for writing: " + path.string());
    os.write(kMagic, 4);
    const Lattice& lat = field.lattice();
    for (int a = 0; a < 4; ++a) put<std::uint32_t>(os, static_cast<std::uint32_t>(lat.n()[a]));
    for (int a = 0; a < 4; ++a) put<double>(os, lat.lengths()[a]);
    put<double>(os, time);
    put<std::uint32_t>(os, kTripleCount);
    for (int i = 0; i < 3; ++i)
        for (double v : field[i].raw()) put<double>(os, v);
    if (!os) throw IoError("failed writing snapshot: " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open snapshot: " + path.string());
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) throw IoError("not an HSF1 snapshot: " + path.string());
    std::array<int, 4> n{};
    std::array<double, 4> lengths{};
    for (int a = 0; a < 4; ++a) n[a] = static_cast<int>(get<std::uint32_t>(is, path));
    for (int a = 0; a < 4; ++a) lengths[a] = get<double>(is, path);
    const double time = get<double>(is, path);
    const auto count = get<std::uint32_t>(is, path);
    if (count != kTripleCount)
        throw IoError("snapshot " + path.string() + " stores " + std::to_string(count) + " fields, expected 3");
    Snapshot snap{TripleField(Lattice(n, lengths)), time};
    for (int i = 0; i < 3; ++i)
        for (double& v : snap.field[i].raw()) v = get<double>(is, path);
    if (is.peek() != std::char_traits<char>::eof()) throw IoError("trailing bytes in snapshot: " + path.string());
    return snap;
}

std::filesystem::path sidecar_path(const std::filesystem::path& snapshot) {
    return std::filesystem::path(snapshot.string() + ".json");
}

void write_sidecar(const std::filesystem::path& snapshot, const nlohmann::json& provenance) {
    const auto path = sidecar_path(snapshot);
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw IoError("cannot open sidecar for writing: " + path.string());
    os << provenance.dump(2) << '\n';
}

}  // namespace hsflow
