#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace intrinsic {

/// Cell: empty, finite number, or label.
using Cell = std::variant<std::monostate, double, std::string>;

/// Named table with a provenance block; written as CSV with '#' comment lines.
class ResultTable {
public:
    ResultTable(std::string name, std::vector<std::string> columns);

    const std::string& name() const { return name_; }
    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<std::vector<Cell>>& rows() const { return rows_; }

    /// Appends a row; throws DomainError on width mismatch or non-finite numbers.
    void add_row(std::vector<Cell> row);
    void set_provenance(std::vector<std::pair<std::string, std::string>> prov) { provenance_ = std::move(prov); }

    /// Numeric cell accessor; throws if the cell is not a number.
    double number(std::size_t row, std::size_t col) const;
    bool has_number(std::size_t row, std::size_t col) const;
    std::size_t column_index(const std::string& col) const;

    void write_csv(std::ostream& os) const;
    std::string to_csv() const;

private:
    std::string name_;
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
    std::vector<std::pair<std::string, std::string>> provenance_;
};

/// Shortest decimal text that parses back to the same double.
std::string format_number(double v);

}  // namespace intrinsic
