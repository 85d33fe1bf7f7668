#include "cpd/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

namespace cpd {

ParseError::ParseError(std::size_t row, const std::string& message)
    : InvalidInput("row " + std::to_string(row) + ": " + message), row_(row) {}

std::string format_shortest(double value) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) throw Error("cannot format number");
    return std::string(buf.data(), ptr);
}

std::string format_fixed(double value, int decimals) {
    std::array<char, 128> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                   std::chars_format::fixed, decimals);
    if (ec != std::errc{}) throw Error("cannot format number");
    return std::string(buf.data(), ptr);
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

// from_chars accepts "nan"/"inf" spellings; they are parsed so the caller can
// reject them with a precise message.
bool parse_double(std::string_view text, double& out) {
    if (text.empty()) return false;
    if (text.front() == '+') text.remove_prefix(1);
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

}  // namespace

std::vector<double> parse_series_csv(std::string_view text) {
    std::vector<double> values;
    std::size_t row = 0;
    std::size_t columns = 0;
    bool first_content = true;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
        ++row;
        const std::string_view line = trim(raw);
        if (line.empty()) continue;

        const auto fields = split_fields(line);
        if (first_content) {
            first_content = false;
            columns = fields.size();
            if (columns > 2) throw ParseError(row, "expected one or two columns, found " + std::to_string(columns));
            double probe = 0.0;
            if (!parse_double(fields.back(), probe)) continue;  // header line
        }
        if (fields.size() != columns) {
            throw ParseError(row, "expected " + std::to_string(columns) + " column(s), found " +
                                      std::to_string(fields.size()));
        }
        double value = 0.0;
        if (!parse_double(fields.back(), value)) {
            throw ParseError(row, "cannot parse '" + std::string(fields.back()) + "' as a number");
        }
        if (!std::isfinite(value)) {
            throw ParseError(row, "non-finite value '" + std::string(fields.back()) + "'");
        }
        values.push_back(value);
    }
    return values;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::vector<double> read_series_csv(const std::filesystem::path& path) {
    return parse_series_csv(read_text_file(path));
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error("write to '" + path.string() + "' failed");
}

void write_series_csv(const std::filesystem::path& path, std::span<const double> values) {
    std::string out = "i,x\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
        out += std::to_string(i + 1);
        out += ',';
        out += format_shortest(values[i]);
        out += '\n';
    }
    write_text_file(path, out);
}

void write_profile_csv(const std::filesystem::path& path, std::span<const double> stats) {
    std::string out = "k,stat\n";
    for (std::size_t k = 0; k < stats.size(); ++k) {
        out += std::to_string(k + 1);
        out += ',';
        out += format_shortest(stats[k]);
        out += '\n';
    }
    write_text_file(path, out);
}

std::string fnv1a_hex(std::string_view data) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    static constexpr char digits[] = "0123456789abcdef";
    std::string hex(16, '0');
    for (int i = 15; i >= 0; --i) {
        hex[static_cast<std::size_t>(i)] = digits[hash & 0xF];
        hash >>= 4;
    }
    return hex;
}

}  // namespace cpd
