#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "conered/core.hpp"

namespace conered {

/// csv: one text row per band, comma separated, no header.
/// hsm1: "HSM1", u64 rows, u64 cols, rows*cols little-endian f64, column-major.
enum class MatrixFormat { csv, hsm1 };

MatrixFormat parse_matrix_format(const std::string& name);
/// ".csv" -> csv; anything else -> hsm1.
MatrixFormat format_from_extension(const std::filesystem::path& path);

Matrix load_matrix(const std::filesystem::path& path, MatrixFormat format);
void store_matrix(const Matrix& A, const std::filesystem::path& path, MatrixFormat format);

/// Convenience overloads that pick the format from the file extension.
Matrix load_matrix(const std::filesystem::path& path);
void store_matrix(const Matrix& A, const std::filesystem::path& path);

Matrix parse_csv(const std::string& text);
std::string format_csv(const Matrix& A);

/// Line-oriented key=value files (instance sidecars, run reports). Keys are
/// written in sorted order so output is byte-stable.
using KeyValues = std::map<std::string, std::string>;
KeyValues load_key_values(const std::filesystem::path& path);
void store_key_values(const KeyValues& values, const std::filesystem::path& path);
std::string format_key_values(const KeyValues& values);

/// Index files hold one 1-based column index per line; in memory indices are
/// 0-based.
std::vector<Index> load_indices(const std::filesystem::path& path);
void store_indices(std::span<const Index> indices, const std::filesystem::path& path);
/// "3,1,7" (1-based) for the given 0-based indices.
std::string format_index_list(std::span<const Index> indices);

/// Shortest round-trip decimal representation.
std::string format_double(double value);

}  // namespace conered
