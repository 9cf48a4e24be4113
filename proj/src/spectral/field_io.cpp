#include "phi4/field_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace phi4 {
namespace {

constexpr char kMagic[8] = {'P', 'H', 'I', '4', 'F', 'L', 'D', '1'};

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T>
T to_little(T v) {
    if constexpr (std::endian::native == std::endian::big) {
        std::array<unsigned char, sizeof(T)> b;
        std::memcpy(b.data(), &v, sizeof(T));
        std::reverse(b.begin(), b.end());
        std::memcpy(&v, b.data(), sizeof(T));
    }
    return v;
}

template <class T>
void put(std::ostream& out, T v) {
    v = to_little(v);
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& in) {
    T v;
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw std::runtime_error("field file truncated");
    return to_little(v);
}

}  // namespace

void write_field(std::ostream& out, const Field& f, const std::string& tag) {
    if (tag.size() > 8) throw std::invalid_argument("field tag longer than 8 bytes: " + tag);
    const auto& g = f.grid();
    out.write(kMagic, 8);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(g.dim()));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(g.n()));
    put<double>(out, g.period());
    char t[8] = {};
    std::memcpy(t, tag.data(), tag.size());
    out.write(t, 8);
    for (double x : f.physical()) put<double>(out, x);
    if (!out) throw std::runtime_error("failed writing field");
}

FieldRecord read_field(std::istream& in) {
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kMagic, 8) != 0) throw std::runtime_error("not a PHI4FLD1 field file");
    const auto d = get<std::uint32_t>(in);
    const auto n = get<std::uint32_t>(in);
    const auto period = get<double>(in);
    char t[9] = {};
    in.read(t, 8);
    if (!in) throw std::runtime_error("field file truncated");
    const Grid g(static_cast<int>(d), static_cast<int>(n), period);
    RealArray v(g.size());
    for (auto& x : v) x = get<double>(in);
    return {Field::from_physical(g, std::move(v)), std::string(t)};
}

void save_field(const std::string& path, const Field& f, const std::string& tag) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    write_field(out, f, tag);
}

FieldRecord load_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_field(in);
}

}  // namespace phi4
