#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace matterwave::cli {

/// Shortest decimal text that round-trips to the same binary64 value.
/// Non-finite values print as nan, inf, -inf.
std::string format_number(double value);

/// Column-labelled table written as CSV after a block of "# key=value"
/// comment lines.
class CsvTable {
public:
    using Cell = std::variant<double, long long, std::string>;

    explicit CsvTable(std::vector<std::string> columns);

    void add_row(std::vector<Cell> row);
    void add_meta(std::string key, std::string value);
    void add_meta(std::string key, double value) { add_meta(std::move(key), format_number(value)); }
    /// Inserts comment lines before the existing ones.
    void prepend_meta(const std::vector<std::pair<std::string, std::string>>& items);
    const std::vector<std::pair<std::string, std::string>>& meta() const noexcept { return meta_; }

    const std::vector<std::string>& columns() const noexcept { return columns_; }
    std::size_t rows() const noexcept { return rows_.size(); }

    void write(std::ostream& out) const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
    std::vector<std::pair<std::string, std::string>> meta_;
};

}  // namespace matterwave::cli
