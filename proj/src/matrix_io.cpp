#include "conered/matrix_io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace conered {
namespace {

constexpr std::array<char, 4> kMagic = {'H', 'S', 'M', '1'};
constexpr std::size_t kHeaderBytes = 4 + 8 + 8;

static_assert(std::endian::native == std::endian::little,
              "hsm1 encoding assumes a little-endian host");

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path.string() + " for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::io, "failed reading " + path.string());
  return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io, "cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::io, "failed writing " + path.string());
}

std::uint64_t read_u64(const std::string& bytes, std::size_t offset) {
  std::uint64_t v = 0;
  std::memcpy(&v, bytes.data() + offset, sizeof v);
  return v;
}

Matrix parse_hsm1(const std::string& bytes) {
  if (bytes.size() < kHeaderBytes) {
    throw ParseError("hsm1: truncated header", 0, bytes.size());
  }
  if (std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0) {
    throw ParseError("hsm1: bad magic", 0, 0);
  }
  const std::uint64_t rows = read_u64(bytes, 4);
  const std::uint64_t cols = read_u64(bytes, 12);
  if (rows == 0 || cols == 0) throw ParseError("hsm1: empty shape", 0, 4);
  if (rows > (std::uint64_t{1} << 40) / cols) throw ParseError("hsm1: implausible shape", 0, 4);
  const std::uint64_t expected = kHeaderBytes + rows * cols * sizeof(double);
  if (bytes.size() != expected) {
    throw ParseError("hsm1: payload size " + std::to_string(bytes.size() - kHeaderBytes) +
                         " does not match shape " + std::to_string(rows) + "x" + std::to_string(cols),
                     0, bytes.size());
  }
  Matrix A(static_cast<Index>(rows), static_cast<Index>(cols));
  std::memcpy(A.data(), bytes.data() + kHeaderBytes, rows * cols * sizeof(double));
  return A;
}

std::string format_hsm1(const Matrix& A) {
  std::string bytes(kHeaderBytes + static_cast<std::size_t>(A.size()) * sizeof(double), '\0');
  std::memcpy(bytes.data(), kMagic.data(), kMagic.size());
  const std::uint64_t rows = static_cast<std::uint64_t>(A.rows());
  const std::uint64_t cols = static_cast<std::uint64_t>(A.cols());
  std::memcpy(bytes.data() + 4, &rows, 8);
  std::memcpy(bytes.data() + 12, &cols, 8);
  std::memcpy(bytes.data() + kHeaderBytes, A.data(), static_cast<std::size_t>(A.size()) * sizeof(double));
  return bytes;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

MatrixFormat parse_matrix_format(const std::string& name) {
  if (name == "csv") return MatrixFormat::csv;
  if (name == "hsm1" || name == "hsm") return MatrixFormat::hsm1;
  throw Error(ErrorCode::invalid_argument, "unknown matrix format '" + name + "'");
}

MatrixFormat format_from_extension(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? MatrixFormat::csv : MatrixFormat::hsm1;
}

std::string format_double(double value) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), end);
}

Matrix parse_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string_view line = trim(std::string_view(text).substr(pos, eol - pos));
    ++line_no;
    const std::size_t line_start = pos;
    pos = eol + 1;
    if (line.empty()) continue;

    std::vector<double> values;
    std::size_t field_start = 0;
    while (true) {
      std::size_t comma = line.find(',', field_start);
      std::string_view field =
          trim(line.substr(field_start, comma == std::string_view::npos ? std::string_view::npos : comma - field_start));
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
        throw ParseError("csv: bad number '" + std::string(field) + "' on line " + std::to_string(line_no),
                         line_no, line_start + field_start);
      }
      values.push_back(v);
      if (comma == std::string_view::npos) break;
      field_start = comma + 1;
    }
    if (!rows.empty() && values.size() != rows.front().size()) {
      throw ParseError("csv: line " + std::to_string(line_no) + " has " + std::to_string(values.size()) +
                           " fields, expected " + std::to_string(rows.front().size()),
                       line_no, line_start);
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw ParseError("csv: no data", line_no, 0);

  Matrix A(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < A.rows(); ++i) {
    for (Index j = 0; j < A.cols(); ++j) A(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return A;
}

std::string format_csv(const Matrix& A) {
  std::string out;
  for (Index i = 0; i < A.rows(); ++i) {
    for (Index j = 0; j < A.cols(); ++j) {
      if (j > 0) out.push_back(',');
      out += format_double(A(i, j));
    }
    out.push_back('\n');
  }
  return out;
}

Matrix load_matrix(const std::filesystem::path& path, MatrixFormat format) {
  const std::string bytes = read_file(path);
  return format == MatrixFormat::csv ? parse_csv(bytes) : parse_hsm1(bytes);
}

void store_matrix(const Matrix& A, const std::filesystem::path& path, MatrixFormat format) {
  write_file(path, format == MatrixFormat::csv ? format_csv(A) : format_hsm1(A));
}

Matrix load_matrix(const std::filesystem::path& path) {
  return load_matrix(path, format_from_extension(path));
}

void store_matrix(const Matrix& A, const std::filesystem::path& path) {
  store_matrix(A, path, format_from_extension(path));
}

KeyValues load_key_values(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  KeyValues out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw ParseError("key=value: malformed line " + std::to_string(line_no), line_no, 0);
    }
    out[std::string(trim(view.substr(0, eq)))] = std::string(trim(view.substr(eq + 1)));
  }
  return out;
}

std::string format_key_values(const KeyValues& values) {
  std::string out;
  for (const auto& [key, value] : values) out += key + "=" + value + "\n";
  return out;
}

void store_key_values(const KeyValues& values, const std::filesystem::path& path) {
  write_file(path, format_key_values(values));
}

std::vector<Index> load_indices(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  std::vector<Index> out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    long long value = 0;
    const auto [end, ec] = std::from_chars(view.data(), view.data() + view.size(), value);
    if (ec != std::errc() || end != view.data() + view.size() || value < 1) {
      throw ParseError("index file: line " + std::to_string(line_no) + " is not a positive integer", line_no, 0);
    }
    out.push_back(static_cast<Index>(value - 1));
  }
  return out;
}

void store_indices(std::span<const Index> indices, const std::filesystem::path& path) {
  std::string out;
  for (Index i : indices) out += std::to_string(i + 1) + "\n";
  write_file(path, out);
}

std::string format_index_list(std::span<const Index> indices) {
  std::string out;
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (k) out += ',';
    out += std::to_string(indices[k] + 1);
  }
  return out;
}

}  // namespace conered
