#pragma once

#include <iosfwd>
#include <string>

#include "phi4/field.hpp"

namespace phi4 {

// Binary field file, all integers and doubles little-endian:
//   bytes  0..7   magic "PHI4FLD1"
//   bytes  8..11  uint32 dimension d
//   bytes 12..15  uint32 points per axis N
//   bytes 16..23  float64 period L
//   bytes 24..31  component tag, ASCII, NUL padded (e.g. "X", "I3", "u")
//   then N^d float64 physical values in row-major order (last axis fastest).
struct FieldRecord {
    Field field;
    std::string tag;
};

void write_field(std::ostream& out, const Field& f, const std::string& tag = "");
FieldRecord read_field(std::istream& in);

void save_field(const std::string& path, const Field& f, const std::string& tag = "");
FieldRecord load_field(const std::string& path);

}  // namespace phi4
