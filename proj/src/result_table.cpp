#include "intrinsic/result_table.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>

#include "intrinsic/errors.hpp"

namespace intrinsic {

std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

ResultTable::ResultTable(std::string name, std::vector<std::string> columns)
    : name_(std::move(name)), columns_(std::move(columns)) {
    if (columns_.empty()) throw DomainError("result table needs at least one column");
}

void ResultTable::add_row(std::vector<Cell> row) {
    if (row.size() != columns_.size()) throw DomainError("row width does not match header in table " + name_);
    for (const auto& c : row)
        if (auto* d = std::get_if<double>(&c); d && !std::isfinite(*d))
            throw DomainError("non-finite value in table " + name_);
    rows_.push_back(std::move(row));
}

double ResultTable::number(std::size_t row, std::size_t col) const {
    const auto* d = std::get_if<double>(&rows_.at(row).at(col));
    if (!d) throw DomainError("cell is not numeric");
    return *d;
}

bool ResultTable::has_number(std::size_t row, std::size_t col) const {
    return std::holds_alternative<double>(rows_.at(row).at(col));
}

std::size_t ResultTable::column_index(const std::string& col) const {
    for (std::size_t i = 0; i < columns_.size(); ++i)
        if (columns_[i] == col) return i;
    throw DomainError("no column '" + col + "' in table " + name_);
}

void ResultTable::write_csv(std::ostream& os) const {
    for (const auto& [k, v] : provenance_) os << "# " << k << ": " << v << '\n';
    for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << columns_[i];
    os << '\n';
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            if (auto* d = std::get_if<double>(&row[i])) os << format_number(*d);
            else if (auto* s = std::get_if<std::string>(&row[i])) os << *s;
        }
        os << '\n';
    }
}

std::string ResultTable::to_csv() const {
    std::ostringstream os;
    write_csv(os);
    return os.str();
}

}  // namespace intrinsic
