#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace coopnorm {

/// One table cell: absent, numeric or text.
using Cell = std::variant<std::monostate, double, std::string>;

/**
 * Rows of named columns, the common currency of sweeps, CSV/JSON files and
 * charts. Every row has exactly one cell per column.
 */
class Table {
public:
    Table() = default;
    explicit Table(std::vector<std::string> columns);

    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<std::vector<Cell>>& rows() const { return rows_; }
    std::size_t size() const { return rows_.size(); }
    bool empty() const { return rows_.empty(); }

    /// Index of a column; throws UsageError when missing.
    std::size_t column(const std::string& name) const;
    bool has_column(const std::string& name) const;

    void add_row(std::vector<Cell> row);
    /// Appends the rows of a table with identical columns.
    void append(const Table& other);

    const Cell& at(std::size_t row, const std::string& name) const;
    /// Numeric value of a cell; empty when the cell is absent or text.
    std::optional<double> number(std::size_t row, const std::string& name) const;

    bool operator==(const Table& other) const = default;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
};

/// 12 significant digits, shortest %g form.
std::string format_number(double x);

/// The value x takes after a trip through format_number.
double round_to_serialized(double x);

std::string format_cell(const Cell& c);

void write_csv(std::ostream& out, const Table& t);
std::string to_csv(const Table& t);

/// Parses CSV produced by write_csv. Cells that parse fully as numbers become
/// numbers, empty cells become absent, anything else stays text.
Table read_csv(std::istream& in);
Table parse_csv(const std::string& text);

/// {"columns": [...], "rows": [{column: value, ...}, ...]}; numbers are rounded
/// to the CSV precision so both formats carry the same values.
nlohmann::ordered_json to_json(const Table& t);
std::string to_json_text(const Table& t);

/// Writes text to a file; throws IoError when the file cannot be written.
void write_file(const std::string& path, const std::string& text);
std::string read_file(const std::string& path);

}  // namespace coopnorm
