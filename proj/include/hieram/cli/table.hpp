#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "hieram/cli/config.hpp"

namespace hieram::cli {

using Cell = std::variant<double, std::int64_t, std::uint64_t, bool, std::string>;

struct Table
{
    std::string name; // file stem
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row);
};

// %.17g for doubles; inf and nan spelled out.
std::string format_cell(const Cell& c);

std::string to_csv(const Table& t);
// Array of objects keyed by column name.
std::string to_json_text(const Table& t);

// Writes <dir>/<name>.csv or .json and returns the path.
std::filesystem::path write_table(const Table& t, const std::filesystem::path& dir, Format f);

} // namespace hieram::cli
