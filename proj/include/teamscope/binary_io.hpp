#pragma once

// Little-endian binary serialization for snapshots and model artifacts.
// Every artifact starts with a 4-byte magic and a u32 format version.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace teamscope {

class BinaryWriter {
 public:
  explicit BinaryWriter(std::ostream& out) : out_(out) {}

  void header(std::string_view magic, std::uint32_t version);
  void u8(std::uint8_t v);
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
  void f32(float v);
  void f64(double v);
  void str(std::string_view s);
  void f32s(std::span<const float> v);
  void f64s(std::span<const double> v);
  void u32s(std::span<const std::uint32_t> v);

 private:
  void raw(const void* p, std::size_t n);
  std::ostream& out_;
};

class BinaryReader {
 public:
  BinaryReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  // Throws FormatError when the magic or version does not match.
  void expect_header(std::string_view magic, std::uint32_t version);
  std::uint8_t u8();
  std::uint32_t u32();
  std::uint64_t u64();
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  float f32();
  double f64();
  std::string str();
  std::vector<float> f32s();
  std::vector<double> f64s();
  std::vector<std::uint32_t> u32s();

 private:
  void raw(void* p, std::size_t n);
  std::uint64_t length(std::size_t elem_size);
  std::istream& in_;
  std::string source_;
};

}  // namespace teamscope
