#ifndef UBOCO_SRC_BINARY_IO_HPP
#define UBOCO_SRC_BINARY_IO_HPP

// Little-endian primitives shared by the binary file formats.

#include "uboco/error.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>

namespace uboco::detail {

template <typename UInt>
void put_le(std::string& out, UInt value) {
  for (std::size_t i = 0; i < sizeof(UInt); ++i) out.push_back(static_cast<char>((value >> (8 * i)) & 0xffu));
}

inline void put_u32(std::string& out, std::uint32_t v) { put_le(out, v); }
inline void put_f32(std::string& out, float v) { put_le(out, std::bit_cast<std::uint32_t>(v)); }
inline void put_f64(std::string& out, double v) { put_le(out, std::bit_cast<std::uint64_t>(v)); }

/// Bounds-checked cursor over an in-memory file image.
class ByteReader {
 public:
  ByteReader(std::string_view bytes, std::string context) : bytes_(bytes), context_(std::move(context)) {}

  std::string_view take(std::size_t n) {
    if (bytes_.size() - pos_ < n) throw FormatError(context_ + ": truncated file");
    auto view = bytes_.substr(pos_, n);
    pos_ += n;
    return view;
  }

  template <typename UInt>
  UInt get_le() {
    auto raw = take(sizeof(UInt));
    UInt v = 0;
    for (std::size_t i = 0; i < sizeof(UInt); ++i)
      v |= static_cast<UInt>(static_cast<unsigned char>(raw[i])) << (8 * i);
    return v;
  }

  std::uint32_t u32() { return get_le<std::uint32_t>(); }
  float f32() { return std::bit_cast<float>(get_le<std::uint32_t>()); }
  double f64() { return std::bit_cast<double>(get_le<std::uint64_t>()); }

  void expect_magic(std::string_view magic) {
    if (take(magic.size()) != magic) throw FormatError(context_ + ": bad magic, expected \"" + std::string(magic) + "\"");
  }
  void expect_end() const {
    if (pos_ != bytes_.size()) throw FormatError(context_ + ": trailing bytes after payload");
  }

 private:
  std::string_view bytes_;
  std::string context_;
  std::size_t pos_ = 0;
};

inline std::string read_file(const std::filesystem::path& path) {
  std::error_code ec;
  if (std::filesystem::is_directory(path, ec)) throw IoError(path.string() + ": is a directory");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string() + ": cannot open for reading");
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError(path.string() + ": read failed");
  return bytes;
}

inline void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::error_code ec;
  if (std::filesystem::is_directory(path, ec)) throw IoError(path.string() + ": is a directory");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError(path.string() + ": write failed");
}

}  // namespace uboco::detail

#endif  // UBOCO_SRC_BINARY_IO_HPP
