#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

// Minimal CSV dialect shared by every tool output: UTF-8, comma separated,
// `#`-prefixed comment lines before the header, one mandatory header row,
// doubles in shortest round-trip decimal form.
namespace npdisc::csv {

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Table {
    std::vector<std::string> comments;  // without the leading "# "
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(std::string_view name) const;
    double number(std::size_t row, std::string_view name) const;
};

/// Shortest decimal that parses back to the same double; "inf", "-inf", "nan".
std::string format_double(double x);

double parse_double(std::string_view text);

void write(std::ostream& out, const Table& table);
std::string to_string(const Table& table);

Table read(std::istream& in);
Table parse(const std::string& text);

}  // namespace npdisc::csv
