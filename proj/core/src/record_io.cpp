#include "bitvar/record_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <system_error>

#include "bitvar/error.hpp"

namespace bitvar {
namespace {

void write_bits(std::ostream& out, const std::uint8_t* bits, std::size_t T) {
  std::string packed((T + 7) / 8, '\0');
  for (std::size_t t = 0; t < T; ++t) {
    if (bits[t]) packed[t / 8] = static_cast<char>(packed[t / 8] | (1u << (t % 8)));
  }
  out.write(packed.data(), static_cast<std::streamsize>(packed.size()));
}

void read_bits(std::istream& in, std::uint8_t* bits, std::size_t T) {
  std::string packed((T + 7) / 8, '\0');
  in.read(packed.data(), static_cast<std::streamsize>(packed.size()));
  if (in.gcount() != static_cast<std::streamsize>(packed.size())) {
    throw Error(ErrorCode::kIoError, "BITVAR1: truncated bit rows");
  }
  for (std::size_t t = 0; t < T; ++t) {
    bits[t] = (static_cast<unsigned char>(packed[t / 8]) >> (t % 8)) & 1u;
  }
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

void write_record(std::ostream& out, const BinaryRecord& rec) {
  out << "BITVAR1 " << rec.d << ' ' << rec.T << ' ' << rec.edges.size() << ' '
      << (rec.thresholds ? 1 : 0) << '\n';
  for (const auto& [i, j] : rec.edges) out << i << ' ' << j << '\n';
  if (rec.thresholds) {
    for (std::size_t i = 0; i < rec.thresholds->size(); ++i) {
      out << (i ? " " : "") << format_double((*rec.thresholds)[i]);
    }
    out << '\n';
  }
  for (std::size_t i = 0; i < rec.d; ++i) write_bits(out, &rec.x_bits[i * rec.T], rec.T);
  for (std::size_t e = 0; e < rec.edges.size(); ++e) {
    write_bits(out, &rec.q_bits[e * rec.T], rec.T);
  }
  if (!out) throw Error(ErrorCode::kIoError, "BITVAR1: write failed");
}

BinaryRecord read_record(std::istream& in) {
  std::string magic;
  std::size_t n_edges = 0;
  int has_thresholds = 0;
  BinaryRecord rec;
  in >> magic >> rec.d >> rec.T >> n_edges >> has_thresholds;
  if (!in || magic != "BITVAR1" || (has_thresholds != 0 && has_thresholds != 1)) {
    throw Error(ErrorCode::kIoError, "BITVAR1: bad header");
  }
  rec.edges.resize(n_edges);
  for (auto& [i, j] : rec.edges) {
    in >> i >> j;
    if (!in || i >= j || j >= rec.d) throw Error(ErrorCode::kIoError, "BITVAR1: bad edge");
  }
  if (has_thresholds) {
    std::vector<double> c(rec.d);
    for (double& v : c) in >> v;
    if (!in) throw Error(ErrorCode::kIoError, "BITVAR1: bad thresholds");
    rec.thresholds = std::move(c);
  }
  if (in.get() != '\n') throw Error(ErrorCode::kIoError, "BITVAR1: missing newline");
  rec.x_bits.resize(rec.d * rec.T);
  rec.q_bits.resize(n_edges * rec.T);
  for (std::size_t i = 0; i < rec.d; ++i) read_bits(in, &rec.x_bits[i * rec.T], rec.T);
  for (std::size_t e = 0; e < n_edges; ++e) read_bits(in, &rec.q_bits[e * rec.T], rec.T);
  return rec;
}

void save_record(const BinaryRecord& rec, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  write_record(out, rec);
}

BinaryRecord load_record(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return read_record(in);
}

}  // namespace bitvar
