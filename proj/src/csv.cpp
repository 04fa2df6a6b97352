#include "npdisc/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace npdisc::csv {

namespace {

std::vector<std::string> split_fields(std::string_view line)
{
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            fields.emplace_back(line.substr(start));
            break;
        }
        fields.emplace_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

std::string_view trim_cr(std::string_view line)
{
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
}

}  // namespace

std::size_t Table::column(std::string_view name) const
{
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw ParseError("csv: no column named '" + std::string(name) + "'");
}

double Table::number(std::size_t row, std::string_view name) const
{
    return parse_double(rows.at(row).at(column(name)));
}

std::string format_double(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text)
{
    if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw ParseError("csv: not a number: '" + std::string(text) + "'");
    return value;
}

void write(std::ostream& out, const Table& table)
{
    for (const auto& c : table.comments) out << "# " << c << '\n';
    auto emit = [&out](const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out << ',';
            out << fields[i];
        }
        out << '\n';
    };
    emit(table.header);
    for (const auto& row : table.rows) emit(row);
}

std::string to_string(const Table& table)
{
    std::ostringstream os;
    write(os, table);
    return os.str();
}

Table read(std::istream& in)
{
    Table table;
    std::string raw;
    bool have_header = false;
    while (std::getline(in, raw)) {
        const auto line = trim_cr(raw);
        if (line.empty()) continue;
        if (line.front() == '#') {
            auto body = line.substr(1);
            if (!body.empty() && body.front() == ' ') body.remove_prefix(1);
            table.comments.emplace_back(body);
            continue;
        }
        auto fields = split_fields(line);
        if (!have_header) {
            table.header = std::move(fields);
            have_header = true;
            continue;
        }
        if (fields.size() != table.header.size())
            throw ParseError("csv: row has " + std::to_string(fields.size()) +
                             " fields, header has " + std::to_string(table.header.size()));
        table.rows.push_back(std::move(fields));
    }
    if (!have_header) throw ParseError("csv: missing header row");
    return table;
}

Table parse(const std::string& text)
{
    std::istringstream is(text);
    return read(is);
}

}  // namespace npdisc::csv
