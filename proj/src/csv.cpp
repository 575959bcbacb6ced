#include "udnjt/csv.hpp"

#include <charconv>
#include <limits>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace udnjt::csv {

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

void Table::add_row(const std::vector<double>& values) {
    std::vector<std::string> row;
    row.reserve(values.size());
    for (double v : values) row.push_back(format_double(v));
    rows.push_back(std::move(row));
}

double Table::numeric(std::size_t row, std::size_t col) const {
    const auto& s = rows.at(row).at(col);
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size())
        throw std::runtime_error(fmt::format("csv: cell ({}, {}) is not numeric: '{}'", row, col, s));
    return v;
}

std::size_t Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw std::runtime_error(fmt::format("csv: no column '{}'", name));
}

std::string to_string(const Table& t) {
    std::string out;
    auto line = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(t.header);
    for (const auto& r : t.rows) line(r);
    return out;
}

void write(const std::filesystem::path& path, const Table& t) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(fmt::format("csv: cannot write '{}'", path.string()));
    out << to_string(t);
    if (!out) throw std::runtime_error(fmt::format("csv: write failed for '{}'", path.string()));
}

Table parse(std::istream& in) {
    Table t;
    std::string line;
    bool first = true;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (line.back() == ',') cells.emplace_back();
        if (first) {
            t.header = std::move(cells);
            first = false;
        } else {
            if (cells.size() != t.header.size())
                throw std::runtime_error(fmt::format("csv: line {} has {} cells, header has {}", n, cells.size(),
                                                     t.header.size()));
            t.rows.push_back(std::move(cells));
        }
    }
    if (first) throw std::runtime_error("csv: empty input");
    return t;
}

Table read(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error(fmt::format("csv: cannot open '{}'", path.string()));
    return parse(in);
}

}  // namespace udnjt::csv
