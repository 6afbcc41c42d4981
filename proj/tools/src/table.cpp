#include "uict/cli/table.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace uict::cli {

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw std::logic_error("row width differs from the header of table " + name);
    rows.push_back(std::move(row));
}

std::size_t Table::column(std::string_view col) const {
    const auto it = std::find(columns.begin(), columns.end(), col);
    if (it == columns.end()) throw std::out_of_range("table " + name + " has no column " + std::string(col));
    return static_cast<std::size_t>(it - columns.begin());
}

double Table::number(std::size_t row, std::string_view col) const {
    const auto& c = rows.at(row).at(column(col));
    if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
    if (const auto* d = std::get_if<double>(&c)) return *d;
    return std::stod(std::get<std::string>(c));
}

std::string Table::text(std::size_t row, std::string_view col) const { return format_cell(rows.at(row).at(column(col))); }

std::vector<double> Table::numbers(std::string_view col) const {
    std::vector<double> v;
    v.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) v.push_back(number(i, col));
    return v;
}

std::string format_cell(const Cell& c) {
    if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
    if (const auto* d = std::get_if<double>(&c)) {
        if (std::isnan(*d)) return "nan";
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", *d);
        return buf;
    }
    return std::get<std::string>(c);
}

void write_csv(std::ostream& out, const Table& t, std::string_view manifest_hash) {
    out << "# manifest=" << manifest_hash << '\n';
    for (std::size_t j = 0; j < t.columns.size(); ++j) out << (j ? "," : "") << t.columns[j];
    out << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << format_cell(row[j]);
        out << '\n';
    }
}

void write_aligned(std::ostream& out, const Table& t, std::size_t max_rows) {
    auto shown = [](const Cell& c) {
        if (const auto* d = std::get_if<double>(&c)) {
            if (std::isnan(*d)) return std::string("nan");
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.10g", *d);
            return std::string(buf);
        }
        return format_cell(c);
    };
    std::vector<std::size_t> width(t.columns.size());
    for (std::size_t j = 0; j < t.columns.size(); ++j) width[j] = t.columns[j].size();
    const std::size_t n = std::min(max_rows, t.rows.size());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < t.rows[i].size(); ++j) width[j] = std::max(width[j], shown(t.rows[i][j]).size());
    out << "[" << t.name << "]\n";
    auto pad = [&](const std::string& s, std::size_t w) {
        out << std::string(w - s.size(), ' ') << s;
    };
    for (std::size_t j = 0; j < t.columns.size(); ++j) {
        if (j) out << "  ";
        pad(t.columns[j], width[j]);
    }
    out << '\n';
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < t.rows[i].size(); ++j) {
            if (j) out << "  ";
            pad(shown(t.rows[i][j]), width[j]);
        }
        out << '\n';
    }
    if (n < t.rows.size()) out << "... " << t.rows.size() - n << " more rows\n";
}

}  // namespace uict::cli
