#include "analogcast/io_util.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "analogcast/errors.hpp"

namespace analogcast {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path.string());
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  if (in.bad()) throw DataError("error reading file: " + path.string());
  return content;
}

void atomic_write_file(const std::filesystem::path& path,
                       const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open file for writing: " + tmp.string());
    out.write(content.data(), std::streamsize(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw DataError("error writing file: " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw DataError("cannot finalize file: " + path.string());
  }
}

void append_u32_le(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(char((v >> (8 * i)) & 0xff));
}

void append_u64_le(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(char((v >> (8 * i)) & 0xff));
}

void append_f64_le(std::string& out, double v) {
  append_u64_le(out, std::bit_cast<std::uint64_t>(v));
}

namespace {
void need(const std::string& in, std::size_t pos, std::size_t n) {
  if (pos + n > in.size()) {
    throw DataError("truncated binary record (need " + std::to_string(n) +
                    " bytes at offset " + std::to_string(pos) + ")");
  }
}
}  // namespace

std::uint32_t read_u32_le(const std::string& in, std::size_t& pos) {
  need(in, pos, 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i)
    v |= std::uint32_t(std::uint8_t(in[pos + i])) << (8 * i);
  pos += 4;
  return v;
}

std::uint64_t read_u64_le(const std::string& in, std::size_t& pos) {
  need(in, pos, 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v |= std::uint64_t(std::uint8_t(in[pos + i])) << (8 * i);
  pos += 8;
  return v;
}

double read_f64_le(const std::string& in, std::size_t& pos) {
  return std::bit_cast<double>(read_u64_le(in, pos));
}

}  // namespace analogcast
