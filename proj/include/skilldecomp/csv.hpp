#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace skilldecomp {

/// Minimal CSV support for the project's fixed schemas. Fields are split on
/// commas with no quoting; identifiers are opaque tokens that must not
/// contain commas or newlines.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // 1-based source line of each row

  int column(const std::string& name) const;  // -1 when absent
};

CsvTable read_csv(const std::filesystem::path& path);
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

std::vector<std::string> split_csv_line(const std::string& line);

/// Full-precision decimal formatting that survives a parse round trip.
std::string format_full(double v);
/// Fixed two-decimal formatting used by the report tables.
std::string format_2f(double v);

double parse_double(const std::string& s, std::size_t line, const std::string& field);
std::int64_t parse_int(const std::string& s, std::size_t line, const std::string& field);

/// FNV-1a 64-bit digest of a file's bytes, hex-encoded. Used for manifest
/// content digests.
std::string fnv1a_digest(const std::filesystem::path& path);
std::string fnv1a_digest_bytes(const std::string& bytes);

}  // namespace skilldecomp
