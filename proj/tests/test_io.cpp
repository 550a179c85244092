#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>

#include <json.hpp>

#include "cqed/io.hpp"

using namespace cqed;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("cqed_io_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST(FormatDouble, RoundTrips) {
  for (const double v : {0.1, -2.0 / 3.0, 1e-300, 6.02214076e23, 0.0, 2.0}) {
    EXPECT_EQ(std::stod(io::format_double(v)), v);
  }
  EXPECT_EQ(io::format_double(2.0), "2");
}

TEST(Csv, FieldQuoting) {
  EXPECT_EQ(io::csv_field("plain"), "plain");
  EXPECT_EQ(io::csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(io::csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(io::csv_field("two\nlines"), "\"two\nlines\"");
  EXPECT_EQ(io::csv_row({"x", "y,z"}), "x,\"y,z\"\n");
}

TEST(Csv, WriterRoundTrip) {
  io::CsvWriter w({"name", "value"});
  w.set_preamble("{\"k\": 1}");
  w.add_row(std::vector<std::string>{"comma, inside", "1"});
  w.add_row(std::vector<std::string>{"quote \" inside", "line\nbreak"});
  const std::string text = w.str();
  EXPECT_EQ(text.rfind("# {\"k\": 1}\n", 0), 0u);
  const auto rows = io::parse_csv(text);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"name", "value"}));
  EXPECT_EQ(rows[1][0], "comma, inside");
  EXPECT_EQ(rows[2][0], "quote \" inside");
  EXPECT_EQ(rows[2][1], "line\nbreak");
}

TEST(Csv, NumericRowsAndWidthCheck) {
  io::CsvWriter w({"a", "b"});
  w.add_row(std::vector<double>{0.1, -3.0});
  const auto rows = io::parse_csv(w.str());
  EXPECT_EQ(std::stod(rows[1][0]), 0.1);
  EXPECT_THROW(w.add_row(std::vector<double>{1.0}), DomainError);
}

TEST(WriteAtomic, CreatesDirectoriesAndLeavesNoTemporary) {
  const fs::path dir = scratch_dir("atomic");
  const fs::path file = dir / "nested" / "out.txt";
  io::write_atomic(file, "first");
  io::write_atomic(file, "second");
  EXPECT_EQ(io::read_file(file), "second");
  int entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(file.parent_path())) ++entries;
  EXPECT_EQ(entries, 1);
  fs::remove_all(dir);
}

TEST(Fnv1a, KnownVectors) {
  EXPECT_EQ(io::fnv1a64_hex(""), "cbf29ce484222325");
  EXPECT_EQ(io::fnv1a64_hex("a"), "af63dc4c8601ec8c");
  EXPECT_EQ(io::fnv1a64_hex("foobar"), "85944171f73967e8");
  EXPECT_EQ(io::fnv1a64(""), 0xcbf29ce484222325ull);
}

TEST(WignerCsv, HeaderAndRows) {
  const WignerMap m = wigner_map(pure_to_density(fock_state(HilbertSpec(4), 0)), PhaseSpaceGrid::square(1.0, 3));
  const std::string text = io::wigner_map_csv(m);
  ASSERT_EQ(text.rfind("# ", 0), 0u);
  const auto meta = nlohmann::json::parse(text.substr(2, text.find('\n') - 2));
  EXPECT_EQ(meta["convention"], "alpha-normalized");
  EXPECT_EQ(meta["provenance"], "computed");
  EXPECT_EQ(meta["grid"]["n1"], 3);
  const auto rows = io::parse_csv(text);
  ASSERT_EQ(rows.size(), 10u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"q1", "q2", "W"}));
  EXPECT_EQ(std::stod(rows[5][2]), m.values(1, 1));
}

TEST(SinogramCsv, Rows) {
  const SinogramSet s = exact_sinogram(pure_to_density(fock_state(HilbertSpec(4), 0)), uniform_angles(2),
                                       symmetric_q_grid(1.0, 0.5));
  const auto rows = io::parse_csv(io::sinogram_csv(s));
  ASSERT_EQ(rows.size(), 1u + 2u * s.q.size());
  EXPECT_EQ(rows[0], (std::vector<std::string>{"theta", "q", "density"}));
}
