#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

namespace analogcast {

/// Reads a whole file; throws DataError if unreadable.
std::string read_file(const std::filesystem::path& path);

/// Writes via a sibling temp file and atomic rename, so failures never
/// leave a partial file at `path`.
void atomic_write_file(const std::filesystem::path& path,
                       const std::string& content);

// Little-endian scalar packing for the store's binary series files.
void append_u32_le(std::string& out, std::uint32_t v);
void append_u64_le(std::string& out, std::uint64_t v);
void append_f64_le(std::string& out, double v);
std::uint32_t read_u32_le(const std::string& in, std::size_t& pos);
std::uint64_t read_u64_le(const std::string& in, std::size_t& pos);
double read_f64_le(const std::string& in, std::size_t& pos);

}  // namespace analogcast
