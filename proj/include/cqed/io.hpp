#pragma once

// Artifact plumbing: CSV formatting, atomic file writes, checksums.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "cqed/tomo.hpp"
#include "cqed/wigner.hpp"

namespace cqed::io {

// 17 significant digits, round-trips every double.
std::string format_double(double v);
// RFC 4180 quoting: fields with a comma, quote, CR or LF are quoted and
// embedded quotes doubled.
std::string csv_field(std::string_view s);
std::string csv_row(const std::vector<std::string>& fields);

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  // Optional single comment line "# <text>" placed before the header.
  void set_preamble(std::string text) { preamble_ = std::move(text); }
  void add_row(const std::vector<std::string>& fields);
  void add_row(const std::vector<double>& values);
  std::string str() const;

 private:
  std::size_t columns_;
  std::string preamble_;
  std::string body_;
};

// Parses the output of CsvWriter back into rows of fields (header included,
// preamble skipped).
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

// 64-bit FNV-1a, lowercase hex.
std::uint64_t fnv1a64(std::string_view data);
std::string fnv1a64_hex(std::string_view data);

// Map CSV: "# {json metadata}" preamble, then q1,q2,W rows in grid order.
std::string wigner_map_csv(const WignerMap& map);
// Sinogram CSV: theta,q,density rows.
std::string sinogram_csv(const SinogramSet& sinogram);

}  // namespace cqed::io
