#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace uict::cli {

using Cell = std::variant<std::int64_t, double, std::string>;

// A named result table with typed cells.
struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row);
    std::size_t column(std::string_view col) const;
    std::size_t size() const noexcept { return rows.size(); }

    double number(std::size_t row, std::string_view col) const;
    std::string text(std::size_t row, std::string_view col) const;
    std::vector<double> numbers(std::string_view col) const;
};

std::string format_cell(const Cell& c);

// Comma-separated, preceded by a "# manifest=<hash>" line.
void write_csv(std::ostream& out, const Table& t, std::string_view manifest_hash);
// Space-aligned columns for terminals, cut after max_rows rows.
void write_aligned(std::ostream& out, const Table& t, std::size_t max_rows = 40);

}  // namespace uict::cli
