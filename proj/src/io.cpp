#include "spdegal/io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "spdegal/errors.hpp"
#include "spdegal/noise.hpp"

namespace spdegal {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

namespace {

std::string quote(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char ch : cell) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

CsvWriter::CsvWriter(std::vector<std::pair<std::string, std::string>> meta,
                     std::vector<std::string> columns)
    : columns_(columns.size()) {
  for (const auto& [k, v] : meta) text_ += "# " + k + ": " + v + "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) text_ += (i ? "," : "") + quote(columns[i]);
  text_ += "\n";
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_) throw ShapeError("CSV row has the wrong number of columns");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) text_ += ',';
    text_ += format_double(values[i]);
  }
  text_ += '\n';
}

void CsvWriter::row_text(const std::vector<std::string>& values) {
  if (values.size() != columns_) throw ShapeError("CSV row has the wrong number of columns");
  for (std::size_t i = 0; i < values.size(); ++i) text_ += (i ? "," : "") + quote(values[i]);
  text_ += '\n';
}

void CsvWriter::save(const std::string& path) const { write_text_file(path, text_); }

namespace {

std::vector<std::string> split_record(const std::string& line) {
  std::vector<std::string> cells(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cells.back() += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cells.back() += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      cells.emplace_back();
    } else {
      cells.back() += ch;
    }
  }
  if (quoted) throw FormatError("unterminated quote in CSV record");
  return cells;
}

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw FormatError("CSV has no column '" + name + "'");
}

double CsvTable::number(std::size_t row, const std::string& name) const {
  const std::string& cell = rows.at(row).at(column(name));
  double x = 0.0;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), x);
  if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
    if (cell == "inf") return std::numeric_limits<double>::infinity();
    if (cell == "-inf") return -std::numeric_limits<double>::infinity();
    if (cell == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw FormatError("CSV cell '" + cell + "' is not a number");
  }
  return x;
}

CsvTable parse_csv(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (!header && line.rfind("# ", 0) == 0) {
      const auto colon = line.find(": ");
      if (colon == std::string::npos) throw FormatError("malformed CSV metadata line");
      t.meta.emplace_back(line.substr(2, colon - 2), line.substr(colon + 2));
    } else if (!header) {
      t.columns = split_record(line);
      header = true;
    } else {
      auto cells = split_record(line);
      if (cells.size() != t.columns.size()) throw FormatError("CSV row has the wrong number of cells");
      t.rows.push_back(std::move(cells));
    }
  }
  if (!header) throw FormatError("CSV has no column row");
  return t;
}

CsvTable read_csv(const std::string& path) { return parse_csv(read_text_file(path)); }

std::vector<std::pair<std::string, std::string>> standard_metadata(const ModelSpec& model,
                                                                   int cutoff) {
  return {
      {"engine", std::string(kEngineName) + " " + kEngineVersion},
      {"generator", std::string(kGeneratorName) + " v" + std::to_string(kGeneratorVersion)},
      {"model", std::string(to_string(model.kind)) + " d=" + std::to_string(model.dim) +
                    " cutoff=" + std::to_string(cutoff)},
      {"conventions", "stopped_process=freeze dealias=3/2,cubic=2 norms=diffusivity_weighted "
                      "ordering=|k|^2,lexicographic r=" + format_double(model.exponent)},
  };
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write to '" + path + "' failed");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------

namespace {

constexpr char kMagic[8] = {'S', 'P', 'D', 'E', 'G', 'A', 'L', '1'};

template <class T>
void put_le(std::string& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>(static_cast<unsigned char>(value >> (8 * i))));
  }
}

void put_f64(std::string& out, double x) { put_le(out, std::bit_cast<std::uint64_t>(x)); }

class ByteReader {
 public:
  explicit ByteReader(const std::string& bytes) : bytes_(bytes) {}

  template <class T>
  T get() {
    need(sizeof(T));
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      v |= static_cast<T>(static_cast<T>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i));
    }
    pos_ += sizeof(T);
    return v;
  }
  double f64() { return std::bit_cast<double>(get<std::uint64_t>()); }
  std::string text(std::size_t n) {
    need(n);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw FormatError("snapshot is truncated");
  }
  const std::string& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string encode_snapshot(const StateVector& state, ModelKind kind, double time) {
  const SpectralBasis& b = state.basis();
  std::string out(kMagic, sizeof(kMagic));
  put_le<std::uint32_t>(out, kSnapshotVersion);
  put_le<std::uint8_t>(out, static_cast<std::uint8_t>(b.dim()));
  put_le<std::uint8_t>(out, static_cast<std::uint8_t>(kind));
  put_le<std::uint16_t>(out, static_cast<std::uint16_t>(state.field_count()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(b.cutoff()));
  put_le<std::uint64_t>(out, b.size());
  put_f64(out, time);
  for (std::size_t f = 0; f < state.field_count(); ++f) {
    const std::string& name = state.name(f);
    if (name.size() > 0xffff) throw FormatError("field name too long for a snapshot");
    put_le<std::uint16_t>(out, static_cast<std::uint16_t>(name.size()));
    out += name;
    const Field& x = state.field(f);
    put_le<std::uint16_t>(out, static_cast<std::uint16_t>(x.components()));
    for (const cplx& z : x.data()) {
      put_f64(out, z.real());
      put_f64(out, z.imag());
    }
  }
  return out;
}

Snapshot decode_snapshot(const std::string& bytes) {
  ByteReader in(bytes);
  if (in.text(sizeof(kMagic)) != std::string(kMagic, sizeof(kMagic))) {
    throw FormatError("snapshot magic mismatch");
  }
  const auto version = in.get<std::uint32_t>();
  if (version != kSnapshotVersion) {
    throw FormatError("unsupported snapshot version " + std::to_string(version));
  }
  Snapshot s;
  s.dim = in.get<std::uint8_t>();
  const auto kind = in.get<std::uint8_t>();
  if (kind > static_cast<std::uint8_t>(ModelKind::tropical)) throw FormatError("unknown model kind in snapshot");
  s.kind = static_cast<ModelKind>(kind);
  const auto fields = in.get<std::uint16_t>();
  s.cutoff = static_cast<int>(in.get<std::uint32_t>());
  const auto modes = in.get<std::uint64_t>();
  s.time = in.f64();
  std::shared_ptr<const SpectralBasis> basis;
  try {
    basis = std::make_shared<const SpectralBasis>(s.dim, s.cutoff);
  } catch (const ConfigError& e) {
    throw FormatError(std::string("snapshot header: ") + e.what());
  }
  if (basis->size() != modes) throw FormatError("snapshot mode count does not match dim and cutoff");
  s.state = StateVector(basis);
  for (std::size_t f = 0; f < fields; ++f) {
    const auto len = in.get<std::uint16_t>();
    std::string name = in.text(len);
    const auto comps = in.get<std::uint16_t>();
    if (comps != 1 && comps != s.dim) throw FormatError("snapshot field '" + name + "' has bad shape");
    Field& x = s.state.add_field(name, comps, false);
    for (auto& z : x.data()) {
      const double re = in.f64();
      const double im = in.f64();
      z = {re, im};
    }
  }
  if (!in.done()) throw FormatError("trailing bytes after snapshot payload");
  return s;
}

void write_snapshot(const std::string& path, const StateVector& state, ModelKind kind, double time) {
  write_text_file(path, encode_snapshot(state, kind, time));
}

Snapshot read_snapshot(const std::string& path) { return decode_snapshot(read_text_file(path)); }

}  // namespace spdegal
