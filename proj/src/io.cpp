#include "odsym/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace odsym {

namespace {

struct Header {
  bool pattern = false;
  bool symmetric = false;
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw FormatError("line " + std::to_string(line) + ": " + what);
}

Header parse_header(std::istream& in, std::size_t& line_no) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty Matrix Market stream");
  ++line_no;
  std::istringstream ss(line);
  std::string banner, object, format, field, symmetry;
  ss >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket") fail(line_no, "missing %%MatrixMarket banner");
  if (lower(object) != "matrix" || lower(format) != "coordinate") {
    fail(line_no, "only 'matrix coordinate' files are supported");
  }
  Header h;
  field = lower(field);
  if (field == "pattern") {
    h.pattern = true;
  } else if (field != "real" && field != "integer" && field != "double") {
    fail(line_no, "unsupported field '" + field + "'");
  }
  symmetry = lower(symmetry);
  if (symmetry == "symmetric") {
    h.symmetric = true;
  } else if (symmetry != "general") {
    fail(line_no, "unsupported symmetry '" + symmetry + "'");
  }
  return h;
}

// Next non-comment, non-blank line.
bool next_data_line(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '%') continue;
    return true;
  }
  return false;
}

template <typename T>
bool parse_token(std::string_view& rest, T& out) {
  auto b = rest.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return false;
  rest.remove_prefix(b);
  auto e = rest.find_first_of(" \t\r");
  auto tok = rest.substr(0, e);
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) return false;
  rest.remove_prefix(tok.size());
  return true;
}

struct Coordinates {
  Index rows = 0;
  Index cols = 0;
  Header header;
  std::vector<Triplet> entries;
};

Coordinates read_coordinates(std::istream& in) {
  std::size_t line_no = 0;
  Coordinates c;
  c.header = parse_header(in, line_no);
  std::string line;
  if (!next_data_line(in, line, line_no)) throw FormatError("missing size line");
  std::string_view rest(line);
  std::size_t nnz = 0;
  if (!parse_token(rest, c.rows) || !parse_token(rest, c.cols) || !parse_token(rest, nnz)) {
    fail(line_no, "malformed size line");
  }
  c.entries.reserve(nnz);
  while (next_data_line(in, line, line_no)) {
    rest = line;
    Index i = 0, j = 0;
    double v = 1.0;
    if (!parse_token(rest, i) || !parse_token(rest, j)) fail(line_no, "malformed entry");
    if (!c.header.pattern && !parse_token(rest, v)) fail(line_no, "malformed entry value");
    if (i == 0 || j == 0 || i > c.rows || j > c.cols) fail(line_no, "index out of range");
    if (!std::isfinite(v)) fail(line_no, "non-finite entry");
    if (v < 0.0) fail(line_no, "negative entry " + std::to_string(v));
    c.entries.push_back({i - 1, j - 1, v});
  }
  if (c.entries.size() != nnz) {
    throw FormatError("expected " + std::to_string(nnz) + " entries, found " +
                      std::to_string(c.entries.size()));
  }
  return c;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

// Shortest representation that parses back to the same double.
void put_double(std::ostream& out, double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.write(buf, ptr - buf);
}

}  // namespace

SparseSymMatrix read_matrix(std::istream& in) {
  Coordinates c = read_coordinates(in);
  if (c.rows != c.cols) throw FormatError("symmetric matrix must be square");
  if (!c.header.symmetric) {
    std::map<std::pair<Index, Index>, double> directed;
    for (const auto& t : c.entries) directed[{t.row, t.col}] = t.value;
    for (const auto& [key, v] : directed) {
      auto mirror = directed.find({key.second, key.first});
      double w = mirror == directed.end() ? 0.0 : mirror->second;
      if (w != v) {
        throw FormatError("asymmetric input at (" + std::to_string(key.first + 1) + "," +
                          std::to_string(key.second + 1) + ")");
      }
    }
  }
  try {
    return SparseSymMatrix::from_triplets(c.rows, std::move(c.entries));
  } catch (const PreconditionError& e) {
    throw FormatError(e.what());
  }
}

void write_matrix(std::ostream& out, const SparseSymMatrix& a) {
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << a.size() << ' ' << a.size() << ' ' << a.upper().size() << '\n';
  for (const auto& t : a.upper()) {
    out << t.col + 1 << ' ' << t.row + 1 << ' ';
    put_double(out, t.value);
    out << '\n';
  }
}

SparseSymMatrix load_matrix(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_matrix(in);
}

void save_matrix(const std::filesystem::path& path, const SparseSymMatrix& a) {
  auto out = open_out(path);
  write_matrix(out, a);
  finish(out, path);
}

SparseCounts read_counts(std::istream& in) {
  Coordinates c = read_coordinates(in);
  if (c.header.symmetric) {
    const auto n = c.entries.size();
    for (std::size_t e = 0; e < n; ++e) {
      const auto t = c.entries[e];
      if (t.row != t.col) c.entries.push_back({t.col, t.row, t.value});
    }
  }
  try {
    return SparseCounts::from_triplets(c.rows, c.cols, std::move(c.entries));
  } catch (const PreconditionError& e) {
    throw FormatError(e.what());
  }
}

SparseCounts load_counts(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_counts(in);
}

FactorMatrix read_factor(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    std::string_view rest(line);
    while (true) {
      auto comma = rest.find(',');
      auto cell = rest.substr(0, comma);
      auto b = cell.find_first_not_of(" \t");
      auto e = cell.find_last_not_of(" \t");
      if (b == std::string_view::npos) fail(line_no, "empty CSV cell");
      cell = cell.substr(b, e - b + 1);
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
        fail(line_no, "not a number: '" + std::string(cell) + "'");
      }
      if (!std::isfinite(v) || v < 0.0) fail(line_no, "factor entries must be finite and >= 0");
      row.push_back(v);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (!rows.empty() && row.size() != rows.front().size()) fail(line_no, "ragged CSV row");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw FormatError("empty factor file");
  FactorMatrix h(rows.size(), rows.front().size());
  for (Index i = 0; i < h.rows(); ++i) {
    for (Index l = 0; l < h.cols(); ++l) h(i, l) = rows[i][l];
  }
  return h;
}

void write_factor(std::ostream& out, const FactorMatrix& h) {
  for (Index i = 0; i < h.rows(); ++i) {
    for (Index l = 0; l < h.cols(); ++l) {
      if (l > 0) out << ',';
      put_double(out, h(i, l));
    }
    out << '\n';
  }
}

FactorMatrix load_factor(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_factor(in);
}

void save_factor(const std::filesystem::path& path, const FactorMatrix& h) {
  auto out = open_out(path);
  write_factor(out, h);
  finish(out, path);
}

}  // namespace odsym
