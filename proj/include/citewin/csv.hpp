#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace citewin::csv {

struct Row {
    std::size_t line = 0;  // 1-based line in the source file
    std::vector<std::string> fields;
};

struct Table {
    std::string file;
    std::vector<std::string> header;
    std::vector<Row> rows;
};

// Reads a comma-separated file with a header row. Fields are unquoted; blank
// lines are skipped and surrounding whitespace is trimmed. Throws
// MissingInputError when the file does not exist and ParseError when the header
// differs from `expected_header` or a row has the wrong number of fields.
Table read(const std::filesystem::path& path, const std::vector<std::string>& expected_header);

std::vector<std::string> split(std::string_view text, char sep);
std::string_view trim(std::string_view text);

// Fixed-point rendering with `decimals` digits; never prints "-0".
std::string fixed(double value, int decimals);

std::string join(const std::vector<std::string>& fields, char sep = ',');

}  // namespace citewin::csv
