#pragma once

// Little-endian binary container helpers shared by the buffer snapshot and
// policy checkpoint formats.

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "fac/errors.hpp"
#include "fac/linalg.hpp"

namespace fac::detail {

inline std::uint32_t crc32(const char* data, std::size_t len) {
  static const auto table = [] {
    std::array<std::uint32_t, 256> t{};
    for (std::uint32_t i = 0; i < 256; ++i) {
      std::uint32_t c = i;
      for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xedb88320u ^ (c >> 1) : c >> 1;
      t[i] = c;
    }
    return t;
  }();
  std::uint32_t c = 0xffffffffu;
  for (std::size_t i = 0; i < len; ++i)
    c = table[(c ^ static_cast<unsigned char>(data[i])) & 0xffu] ^ (c >> 8);
  return c ^ 0xffffffffu;
}

struct Writer {
  std::string buf;

  template <typename T>
  void raw(T v) {
    char tmp[sizeof(T)];
    std::memcpy(tmp, &v, sizeof(T));
    buf.append(tmp, sizeof(T));
  }
  void u8(std::uint8_t v) { raw(v); }
  void u32(std::uint32_t v) { raw(v); }
  void u64(std::uint64_t v) { raw(v); }
  void i32(std::int32_t v) { raw(v); }
  void f64(double v) { raw(v); }
  void vec(const Vector& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) f64(v(i));
  }

  /// Appends the CRC of everything written so far and writes to disk.
  void finish(const std::string& path) {
    u32(crc32(buf.data(), buf.size()));
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw IoError("write failed: " + path);
  }
};

struct Reader {
  std::string buf;
  std::size_t pos = 0;

  /// Reads the whole file, verifies magic and trailing CRC, and positions
  /// the cursor just after the magic.
  Reader(const std::string& path, const char* magic) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    buf.assign((std::istreambuf_iterator<char>(in)),
               std::istreambuf_iterator<char>());
    if (buf.size() < 8 || buf.compare(0, 4, magic) != 0)
      throw FormatError(std::string("bad magic, expected ") + magic);
    std::uint32_t stored;
    std::memcpy(&stored, buf.data() + buf.size() - 4, 4);
    if (stored != crc32(buf.data(), buf.size() - 4))
      throw CorruptSnapshot("checksum mismatch");
    pos = 4;
  }

  template <typename T>
  T raw() {
    if (pos + sizeof(T) > buf.size() - 4) throw FormatError("file truncated");
    T v;
    std::memcpy(&v, buf.data() + pos, sizeof(T));
    pos += sizeof(T);
    return v;
  }
  std::uint8_t u8() { return raw<std::uint8_t>(); }
  std::uint32_t u32() { return raw<std::uint32_t>(); }
  std::uint64_t u64() { return raw<std::uint64_t>(); }
  std::int32_t i32() { return raw<std::int32_t>(); }
  double f64() { return raw<double>(); }
  Vector vec(std::size_t n) {
    Vector v(n);
    for (std::size_t i = 0; i < n; ++i) v(i) = f64();
    return v;
  }

  void expect_end() const {
    if (pos != buf.size() - 4) throw FormatError("trailing bytes");
  }
};

}  // namespace fac::detail
