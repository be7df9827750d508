#pragma once

#include <filesystem>
#include <iosfwd>

#include "bitvar/quantize.hpp"

namespace bitvar {

/// BITVAR1 container:
///   "BITVAR1 d T |E| has_thresholds\n"
///   one "i j\n" line per edge
///   one line of d thresholds (only when has_thresholds is 1)
///   then d + |E| packed rows of ceil(T/8) bytes; bit t of a row is bit
///   (t % 8) of byte t / 8, trailing bits zero.
void write_record(std::ostream& out, const BinaryRecord& rec);
BinaryRecord read_record(std::istream& in);

void save_record(const BinaryRecord& rec, const std::filesystem::path& path);
BinaryRecord load_record(const std::filesystem::path& path);

}  // namespace bitvar
