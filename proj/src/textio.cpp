#include "foamfab/textio.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <system_error>

#include "foamfab/error.hpp"

namespace foamfab {

std::string fmt_fixed(double value, int decimals) {
    if (!std::isfinite(value)) {
        throw DomainError("cannot format non-finite value");
    }
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, decimals);
    std::string out(buf, res.ptr);
    // "-0.000" and "0.000" denote the same coordinate
    if (out.find_first_not_of("-0.") == std::string::npos && out[0] == '-') {
        out.erase(0, 1);
    }
    return out;
}

std::string fmt_num(double value) {
    if (!std::isfinite(value)) {
        throw DomainError("cannot format non-finite value");
    }
    if (value == 0.0) {
        return "0";
    }
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view token, std::size_t line) {
    token = trim(token);
    double value = 0.0;
    auto res = std::from_chars(token.data(), token.data() + token.size(), value);
    if (res.ec != std::errc() || res.ptr != token.data() + token.size() || token.empty()) {
        throw ParseError("line " + std::to_string(line) + ": malformed number '" +
                             std::string(token) + "'",
                         line);
    }
    if (!std::isfinite(value)) {
        throw ParseError("line " + std::to_string(line) + ": non-finite number", line);
    }
    return value;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return fields;
}

std::vector<CsvRow> parse_csv_table(std::string_view text, std::string_view expected_header) {
    const std::size_t expected_fields = split_csv(expected_header).size();
    std::vector<CsvRow> rows;
    bool header_seen = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() : eol + 1;
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        if (!header_seen) {
            if (line != expected_header) {
                throw ParseError("line " + std::to_string(line_no) + ": expected header '" +
                                     std::string(expected_header) + "'",
                                 line_no);
            }
            header_seen = true;
            continue;
        }
        auto fields = split_csv(line);
        if (fields.size() != expected_fields) {
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                                 std::to_string(expected_fields) + " fields, got " +
                                 std::to_string(fields.size()),
                             line_no);
        }
        rows.push_back({line_no, std::move(fields)});
    }
    if (!header_seen) {
        throw ParseError("line 1: empty table, missing header '" + std::string(expected_header) +
                             "'",
                         1);
    }
    return rows;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open file: " + path);
    }
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return content;
}

void write_file_atomic(const std::string& path, std::string_view content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw ConfigError("cannot open file for writing: " + tmp);
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) {
            throw ConfigError("write failed: " + tmp);
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        throw ConfigError("cannot rename " + tmp + " to " + path + ": " + ec.message());
    }
}

} // namespace foamfab
