#include "teamscope/binary_io.hpp"

#include <bit>
#include <cstring>
#include <istream>
#include <ostream>

#include "teamscope/error.hpp"

static_assert(std::endian::native == std::endian::little, "binary artifacts assume a little-endian host");

namespace teamscope {

void BinaryWriter::raw(const void* p, std::size_t n) {
  out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
  if (!out_) throw IoError("binary write failed");
}

void BinaryWriter::header(std::string_view magic, std::uint32_t version) {
  raw(magic.data(), magic.size());
  u32(version);
}

void BinaryWriter::u8(std::uint8_t v) { raw(&v, 1); }
void BinaryWriter::u32(std::uint32_t v) { raw(&v, 4); }
void BinaryWriter::u64(std::uint64_t v) { raw(&v, 8); }
void BinaryWriter::f32(float v) { raw(&v, 4); }
void BinaryWriter::f64(double v) { raw(&v, 8); }

void BinaryWriter::str(std::string_view s) {
  u64(s.size());
  raw(s.data(), s.size());
}

void BinaryWriter::f32s(std::span<const float> v) {
  u64(v.size());
  raw(v.data(), v.size_bytes());
}

void BinaryWriter::f64s(std::span<const double> v) {
  u64(v.size());
  raw(v.data(), v.size_bytes());
}

void BinaryWriter::u32s(std::span<const std::uint32_t> v) {
  u64(v.size());
  raw(v.data(), v.size_bytes());
}

void BinaryReader::raw(void* p, std::size_t n) {
  in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in_.gcount()) != n) throw FormatError(source_ + ": truncated binary artifact");
}

std::uint64_t BinaryReader::length(std::size_t elem_size) {
  const std::uint64_t n = u64();
  // Guards against garbage lengths allocating absurd buffers.
  if (n > (std::uint64_t{1} << 40) / elem_size) throw FormatError(source_ + ": corrupt length field");
  return n;
}

void BinaryReader::expect_header(std::string_view magic, std::uint32_t version) {
  std::string got(magic.size(), '\0');
  raw(got.data(), got.size());
  if (got != magic) throw FormatError(source_ + ": not a " + std::string(magic) + " artifact");
  const std::uint32_t v = u32();
  if (v != version) {
    throw FormatError(source_ + ": format version " + std::to_string(v) + " does not match expected version " +
                      std::to_string(version));
  }
}

std::uint8_t BinaryReader::u8() {
  std::uint8_t v;
  raw(&v, 1);
  return v;
}
std::uint32_t BinaryReader::u32() {
  std::uint32_t v;
  raw(&v, 4);
  return v;
}
std::uint64_t BinaryReader::u64() {
  std::uint64_t v;
  raw(&v, 8);
  return v;
}
float BinaryReader::f32() {
  float v;
  raw(&v, 4);
  return v;
}
double BinaryReader::f64() {
  double v;
  raw(&v, 8);
  return v;
}

std::string BinaryReader::str() {
  std::string s(length(1), '\0');
  raw(s.data(), s.size());
  return s;
}

std::vector<float> BinaryReader::f32s() {
  std::vector<float> v(length(sizeof(float)));
  raw(v.data(), v.size() * sizeof(float));
  return v;
}

std::vector<double> BinaryReader::f64s() {
  std::vector<double> v(length(sizeof(double)));
  raw(v.data(), v.size() * sizeof(double));
  return v;
}

std::vector<std::uint32_t> BinaryReader::u32s() {
  std::vector<std::uint32_t> v(length(sizeof(std::uint32_t)));
  raw(v.data(), v.size() * sizeof(std::uint32_t));
  return v;
}

}  // namespace teamscope
