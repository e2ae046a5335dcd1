#include "causerank/binio.hpp"

#include <fstream>

#include "causerank/error.hpp"

namespace crk {

uint32_t ByteReader::u32() {
  if (pos_ + 4 > bytes_.size()) fail(ErrorCode::parse, "binary read past end of buffer");
  uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(bytes_[pos_ + i]);
  pos_ += 4;
  return v;
}

uint64_t ByteReader::u64() {
  if (pos_ + 8 > bytes_.size()) fail(ErrorCode::parse, "binary read past end of buffer");
  uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(bytes_[pos_ + i]);
  pos_ += 8;
  return v;
}

std::string_view ByteReader::raw(size_t size) {
  if (pos_ + size > bytes_.size()) fail(ErrorCode::parse, "binary read past end of buffer");
  std::string_view out = bytes_.substr(pos_, size);
  pos_ += size;
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open file: " + path);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) fail(ErrorCode::io, "read error: " + path);
  return content;
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::io, "cannot open file for writing: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) fail(ErrorCode::io, "write error: " + path);
}

}  // namespace crk
