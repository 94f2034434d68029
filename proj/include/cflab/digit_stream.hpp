#pragma once

// Digit streams: finite or lazily produced sequences of CF digits, plus the
// CFD1 stream file format (magic "CFD1", little-endian u64 digit count,
// digits as unsigned LEB128 varints).

#include <cstdint>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cflab {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string msg, std::uint64_t offset)
      : std::runtime_error(msg + " (byte offset " + std::to_string(offset) + ")"),
        byte_offset(offset) {}
  std::uint64_t byte_offset;
};

class DigitStream {
 public:
  DigitStream() = default;

  static DigitStream from_digits(std::vector<std::uint64_t> digits) {
    for (auto d : digits)
      if (d < 1) throw std::domain_error("digit stream: digits must be >= 1");
    DigitStream s;
    s.count_ = digits.size();
    s.cache_ = std::move(digits);
    s.source_ = "list";
    return s;
  }

  // Lazily pulls digits from gen until count digits are materialized.
  static DigitStream generated(std::function<std::uint64_t()> gen, std::uint64_t count,
                               std::string source) {
    DigitStream s;
    s.gen_ = std::move(gen);
    s.count_ = count;
    s.source_ = std::move(source);
    return s;
  }

  static DigitStream from_file(const std::string& path);

  std::uint64_t size() const { return count_; }
  const std::string& source() const { return source_; }

  // 0-based access; digit a_{i+1} in 1-based CF notation.
  std::uint64_t at(std::uint64_t i) {
    if (i >= count_) throw std::out_of_range("digit stream: index past end");
    materialize(i + 1);
    return cache_[i];
  }

  const std::vector<std::uint64_t>& all() {
    materialize(count_);
    return cache_;
  }

  void write_file(const std::string& path);

 private:
  void materialize(std::uint64_t upto) {
    if (upto > count_) upto = count_;
    while (cache_.size() < upto) {
      std::uint64_t d = gen_();
      if (d < 1) throw std::domain_error("digit stream: generator produced digit < 1");
      cache_.push_back(d);
    }
  }

  std::function<std::uint64_t()> gen_;
  std::vector<std::uint64_t> cache_;
  std::uint64_t count_ = 0;
  std::string source_ = "empty";
};

namespace detail {

inline void leb128_encode(std::uint64_t v, std::vector<unsigned char>& out) {
  do {
    unsigned char byte = v & 0x7f;
    v >>= 7;
    if (v) byte |= 0x80;
    out.push_back(byte);
  } while (v);
}

}  // namespace detail

inline void DigitStream::write_file(const std::string& path) {
  materialize(count_);
  std::vector<unsigned char> buf;
  buf.reserve(16 + cache_.size());
  buf.insert(buf.end(), {'C', 'F', 'D', '1'});
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<unsigned char>((count_ >> (8 * i)) & 0xff));
  for (auto d : cache_) detail::leb128_encode(d, buf);
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  std::size_t written = std::fwrite(buf.data(), 1, buf.size(), f);
  std::fclose(f);
  if (written != buf.size()) throw std::runtime_error("short write: " + path);
}

inline DigitStream DigitStream::from_file(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw std::runtime_error("cannot open for reading: " + path);
  std::vector<unsigned char> buf;
  unsigned char chunk[65536];
  std::size_t got;
  while ((got = std::fread(chunk, 1, sizeof chunk, f)) > 0) buf.insert(buf.end(), chunk, chunk + got);
  std::fclose(f);

  if (buf.size() < 4 || buf[0] != 'C' || buf[1] != 'F' || buf[2] != 'D' || buf[3] != '1')
    throw ParseError("bad magic, expected CFD1", 0);
  if (buf.size() < 12) throw ParseError("truncated header", buf.size());
  std::uint64_t count = 0;
  for (int i = 0; i < 8; ++i) count |= static_cast<std::uint64_t>(buf[4 + i]) << (8 * i);

  std::vector<std::uint64_t> digits;
  digits.reserve(count);
  std::size_t pos = 12;
  for (std::uint64_t n = 0; n < count; ++n) {
    std::uint64_t v = 0;
    int shift = 0;
    for (;;) {
      if (pos >= buf.size()) throw ParseError("truncated varint", pos);
      unsigned char byte = buf[pos++];
      if (shift >= 64 || (shift == 63 && (byte & 0x7e)))
        throw ParseError("varint overflows 64 bits", pos - 1);
      v |= static_cast<std::uint64_t>(byte & 0x7f) << shift;
      if (!(byte & 0x80)) break;
      shift += 7;
    }
    if (v < 1) throw ParseError("digit 0 in stream", pos - 1);
    digits.push_back(v);
  }
  if (pos != buf.size()) throw ParseError("trailing bytes after digit data", pos);

  DigitStream s = from_digits(std::move(digits));
  s.source_ = "file:" + path;
  return s;
}

}  // namespace cflab
