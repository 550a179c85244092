#include "cqed/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

namespace cqed::io {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out += ',';
    out += csv_field(fields[i]);
  }
  out += '\n';
  return out;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()), body_(csv_row(header)) {}

void CsvWriter::add_row(const std::vector<std::string>& fields) {
  if (fields.size() != columns_) throw DomainError("CsvWriter: row width does not match the header");
  body_ += csv_row(fields);
}

void CsvWriter::add_row(const std::vector<double>& values) {
  std::vector<std::string> fields;
  fields.reserve(values.size());
  for (const double v : values) fields.push_back(format_double(v));
  add_row(fields);
}

std::string CsvWriter::str() const {
  if (preamble_.empty()) return body_;
  return "# " + preamble_ + "\n" + body_;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
      ++i;
      continue;
    }
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    for (; i < text.size(); ++i) {
      const char c = text[i];
      if (quoted) {
        if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else if (c == '"') {
          quoted = false;
        } else {
          field += c;
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        row.push_back(std::move(field));
        field.clear();
      } else if (c == '\n') {
        break;
      } else if (c != '\r') {
        field += c;
      }
    }
    ++i;
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("write_atomic: cannot open " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw std::runtime_error("write_atomic: write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_file: cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string fnv1a64_hex(std::string_view data) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(data)));
  return buf;
}

std::string wigner_map_csv(const WignerMap& map) {
  nlohmann::ordered_json meta;
  meta["convention"] = map.convention;
  meta["provenance"] = map.provenance;
  meta["grid"] = {{"q1_min", map.grid.q1_min}, {"q1_max", map.grid.q1_max}, {"n1", map.grid.n1},
                  {"q2_min", map.grid.q2_min}, {"q2_max", map.grid.q2_max}, {"n2", map.grid.n2}};
  CsvWriter csv({"q1", "q2", "W"});
  csv.set_preamble(meta.dump());
  for (int i = 0; i < map.grid.n1; ++i) {
    for (int j = 0; j < map.grid.n2; ++j) csv.add_row(std::vector<double>{map.grid.q1(i), map.grid.q2(j), map.values(i, j)});
  }
  return csv.str();
}

std::string sinogram_csv(const SinogramSet& sinogram) {
  CsvWriter csv({"theta", "q", "density"});
  for (std::size_t k = 0; k < sinogram.thetas.size(); ++k) {
    for (std::size_t i = 0; i < sinogram.q.size(); ++i) {
      csv.add_row(std::vector<double>{sinogram.thetas[k], sinogram.q[i], sinogram.density[k][i]});
    }
  }
  return csv.str();
}

}  // namespace cqed::io
