#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cpd/error.hpp"

namespace cpd {

/// Malformed or invalid line in a user-supplied CSV file. `row` is 1-based.
class ParseError : public InvalidInput {
public:
    ParseError(std::size_t row, const std::string& message);
    std::size_t row() const { return row_; }

private:
    std::size_t row_;
};

/// Shortest decimal text that reads back as exactly the same double.
std::string format_shortest(double value);

/// Fixed notation with `decimals` digits after the point.
std::string format_fixed(double value, int decimals);

/// Reads one observation per line. A non-numeric first line is taken as a
/// header; with two columns the first is an index and the second the value.
std::vector<double> read_series_csv(const std::filesystem::path& path);
std::vector<double> parse_series_csv(std::string_view text);

/// Writes `i,x` with a 1-based index.
void write_series_csv(const std::filesystem::path& path, std::span<const double> values);

/// Writes `k,stat` with k = 1..n-1.
void write_profile_csv(const std::filesystem::path& path, std::span<const double> stats);

void write_text_file(const std::filesystem::path& path, std::string_view contents);
std::string read_text_file(const std::filesystem::path& path);

/// 64-bit FNV-1a digest rendered as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view data);

}  // namespace cpd
