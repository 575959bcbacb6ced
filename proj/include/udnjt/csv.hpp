#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

namespace udnjt::csv {

/// Shortest text that reads back to the same double (17 significant digits).
std::string format_double(double v);

/// Cells are kept as text; numeric() parses one back.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(const std::vector<double>& values);
    double numeric(std::size_t row, std::size_t col) const;
    std::size_t column(const std::string& name) const;  // throws if absent
};

std::string to_string(const Table& t);
void write(const std::filesystem::path& path, const Table& t);

/// Comma-separated, no quoting, header on the first line; rows must match the header width.
Table parse(std::istream& in);
Table read(const std::filesystem::path& path);

}  // namespace udnjt::csv
