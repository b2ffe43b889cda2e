#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace foamfab {

// Fixed-point decimal formatting, locale independent. Negative zero is
// normalized so identical geometry always serializes to identical bytes.
std::string fmt_fixed(double value, int decimals);

// Shortest representation that parses back to the exact same double.
std::string fmt_num(double value);

// Strict double parse of a whole token. Throws ParseError (with `line`)
// on trailing garbage, empty input, or non-finite values.
double parse_double(std::string_view token, std::size_t line);

std::string_view trim(std::string_view s);

// Splits one CSV record on commas; fields are trimmed of surrounding blanks.
std::vector<std::string_view> split_csv(std::string_view line);

// One data record of a CSV table, with its 1-based source line number.
struct CsvRow {
    std::size_t line;
    std::vector<std::string_view> fields;
};

// Parses a headered CSV table. Blank lines and `#` comments are skipped; the
// first remaining line must equal expected_header and every record must have
// as many fields as the header. Field views point into `text`.
std::vector<CsvRow> parse_csv_table(std::string_view text, std::string_view expected_header);

std::string read_file(const std::string& path);

// Write-temp-then-rename so partially written outputs are never observed.
void write_file_atomic(const std::string& path, std::string_view content);

} // namespace foamfab
