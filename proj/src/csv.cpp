#include "citewin/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "citewin/error.hpp"

namespace citewin::csv {

std::string_view trim(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = text.find_last_not_of(" \t\r\n");
    return text.substr(first, last - first + 1);
}

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        out.emplace_back(trim(text.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

Table read(const std::filesystem::path& path, const std::vector<std::string>& expected_header) {
    Table table;
    table.file = path.filename().string();
    std::ifstream in(path);
    if (!in) throw MissingInputError("missing input file " + path.string());

    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
        if (trim(line).empty()) continue;
        auto fields = split(line, ',');
        if (!have_header) {
            if (fields != expected_header)
                throw ParseError(table.file, line_no, "expected header '" + join(expected_header) + "'");
            table.header = std::move(fields);
            have_header = true;
            continue;
        }
        if (fields.size() != expected_header.size())
            throw ParseError(table.file, line_no,
                             "expected " + std::to_string(expected_header.size()) + " fields, found " +
                                 std::to_string(fields.size()));
        table.rows.push_back({line_no, std::move(fields)});
    }
    if (!have_header) throw ParseError(table.file, line_no == 0 ? 1 : line_no, "missing header row");
    return table;
}

std::string fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    std::string out(buf);
    if (out.starts_with('-') && out.find_first_not_of("-0.") == std::string::npos) out.erase(0, 1);
    return out;
}

std::string join(const std::vector<std::string>& fields, char sep) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += sep;
        out += fields[i];
    }
    return out;
}

}  // namespace citewin::csv
