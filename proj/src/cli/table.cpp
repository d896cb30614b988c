#include "hieram/cli/table.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace hieram::cli {

void Table::add(std::vector<Cell> row)
{
    if (row.size() != columns.size())
        throw std::logic_error("row width does not match table '" + name + "'");
    rows.push_back(std::move(row));
}

namespace {

std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string json_string(const std::string& s)
{
    std::string out = "\"";
    for (char ch : s) {
        switch (ch) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        default: out += ch;
        }
    }
    return out + "\"";
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char ch : s)
        out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return out + "\"";
}

} // namespace

std::string format_cell(const Cell& c)
{
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>)
                return format_double(v);
            else if constexpr (std::is_same_v<T, bool>)
                return v ? "true" : "false";
            else if constexpr (std::is_same_v<T, std::string>)
                return v;
            else
                return std::to_string(v);
        },
        c);
}

std::string to_csv(const Table& t)
{
    std::string out;
    for (std::size_t j = 0; j < t.columns.size(); ++j)
        out += (j ? "," : "") + csv_field(t.columns[j]);
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t j = 0; j < row.size(); ++j)
            out += (j ? "," : "") + csv_field(format_cell(row[j]));
        out += '\n';
    }
    return out;
}

std::string to_json_text(const Table& t)
{
    std::string out = "[\n";
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        out += "  {";
        for (std::size_t j = 0; j < t.columns.size(); ++j) {
            const auto& c = t.rows[i][j];
            std::string v;
            if (std::holds_alternative<std::string>(c))
                v = json_string(std::get<std::string>(c));
            else if (std::holds_alternative<double>(c) && !std::isfinite(std::get<double>(c)))
                v = json_string(format_cell(c)); // JSON has no inf or nan
            else
                v = format_cell(c);
            out += (j ? ", " : "") + json_string(t.columns[j]) + ": " + v;
        }
        out += i + 1 < t.rows.size() ? "},\n" : "}\n";
    }
    return out + "]\n";
}

std::filesystem::path write_table(const Table& t, const std::filesystem::path& dir, Format f)
{
    const auto path = dir / (t.name + (f == Format::Csv ? ".csv" : ".json"));
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write '" + path.string() + "'");
    out << (f == Format::Csv ? to_csv(t) : to_json_text(t));
    return path;
}

} // namespace hieram::cli
