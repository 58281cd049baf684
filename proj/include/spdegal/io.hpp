#pragma once

// Output formats: CSV series with commented metadata headers and binary state
// snapshots.
//
// Snapshot layout, all little-endian:
//   "SPDEGAL1" | u32 version | u8 dim | u8 model kind | u16 field count |
//   u32 cutoff | u64 mode count | f64 time
//   per field: u16 name length | name bytes | u16 components |
//              modes * components (f64 re, f64 im) in basis order

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "spdegal/models.hpp"

namespace spdegal {

inline constexpr const char* kEngineName = "spdegal";
inline constexpr const char* kEngineVersion = "1.0.0";
inline constexpr std::uint32_t kSnapshotVersion = 1;

// Shortest round-trip decimal form.
std::string format_double(double x);

class CsvWriter {
 public:
  // Metadata lines are written as "# key: value" before the column row.
  CsvWriter(std::vector<std::pair<std::string, std::string>> meta, std::vector<std::string> columns);

  void row(const std::vector<double>& values);
  void row_text(const std::vector<std::string>& values);
  std::string str() const { return text_; }
  void save(const std::string& path) const;  // IoError on failure

 private:
  std::size_t columns_;
  std::string text_;
};

// Reader for the files written by CsvWriter.
struct CsvTable {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;  // FormatError if absent
  double number(std::size_t row, const std::string& name) const;
};

CsvTable parse_csv(const std::string& text);  // FormatError on malformed input
CsvTable read_csv(const std::string& path);

// Engine, generator and convention lines shared by every artifact.
std::vector<std::pair<std::string, std::string>> standard_metadata(const ModelSpec& model,
                                                                   int cutoff);

void write_text_file(const std::string& path, const std::string& text);  // IoError
std::string read_text_file(const std::string& path);                     // IoError

struct Snapshot {
  int dim = 2;
  ModelKind kind = ModelKind::cbf;
  int cutoff = 1;
  double time = 0.0;
  StateVector state;
};

std::string encode_snapshot(const StateVector& state, ModelKind kind, double time);
// FormatError on bad magic, version, truncation or inconsistent header.
Snapshot decode_snapshot(const std::string& bytes);

void write_snapshot(const std::string& path, const StateVector& state, ModelKind kind, double time);
Snapshot read_snapshot(const std::string& path);

}  // namespace spdegal
