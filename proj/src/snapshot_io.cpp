#include "chemfront/snapshot_io.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace chemfront {

namespace {

constexpr char kMagic[8] = {'K', 'S', 'F', 'I', 'E', 'L', 'D', '1'};

template <typename T>
void put(std::string& buf, T v) {
    char tmp[sizeof(T)];
    std::memcpy(tmp, &v, sizeof(T));
    buf.append(tmp, sizeof(T));
}

template <typename T>
T take(std::istream& in, const std::string& path) {
    T v;
    if (!in.read(reinterpret_cast<char*>(&v), sizeof(T)))
        throw std::runtime_error("snapshot read failed: " + path);
    return v;
}

}  // namespace

void write_field(const std::string& path, const Field& f, double time) {
    std::string buf;
    buf.reserve(64 + f.size() * 8);
    buf.append(kMagic, 8);
    put<std::uint32_t>(buf, 1);
    put<std::uint32_t>(buf, static_cast<std::uint32_t>(f.grid.dim));
    for (int a = 0; a < 3; ++a) put<std::uint32_t>(buf, static_cast<std::uint32_t>(f.grid.n[a]));
    put<std::uint32_t>(buf, f.grid.boundary == Boundary::Periodic ? 1u : 0u);
    put<double>(buf, time);
    put<double>(buf, f.grid.lo[0]);
    put<double>(buf, f.grid.hi[0]);
    buf.append(8, '\0');
    for (int a = 1; a < f.grid.dim; ++a) {
        put<double>(buf, f.grid.lo[a]);
        put<double>(buf, f.grid.hi[a]);
    }
    for (double v : f.values) put<double>(buf, v);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw std::runtime_error("snapshot write failed: " + path);
}

std::pair<Field, double> read_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open snapshot: " + path);
    char magic[8];
    if (!in.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0)
        throw std::runtime_error("bad snapshot magic: " + path);
    const auto version = take<std::uint32_t>(in, path);
    if (version != 1) throw std::runtime_error("unsupported snapshot version: " + path);
    Grid g;
    g.dim = static_cast<int>(take<std::uint32_t>(in, path));
    for (int a = 0; a < 3; ++a) g.n[a] = static_cast<int>(take<std::uint32_t>(in, path));
    g.boundary = take<std::uint32_t>(in, path) == 1u ? Boundary::Periodic : Boundary::Neumann;
    const double time = take<double>(in, path);
    g.lo[0] = take<double>(in, path);
    g.hi[0] = take<double>(in, path);
    in.ignore(8);
    for (int a = 1; a < g.dim; ++a) {
        g.lo[a] = take<double>(in, path);
        g.hi[a] = take<double>(in, path);
    }
    g.validate();
    Field f(g);
    if (!in.read(reinterpret_cast<char*>(f.values.data()),
                 static_cast<std::streamsize>(f.size() * sizeof(double))))
        throw std::runtime_error("snapshot data truncated: " + path);
    return {std::move(f), time};
}

}  // namespace chemfront
