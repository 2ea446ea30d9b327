#include "format.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace matterwave::cli {

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buffer[32];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
    return std::string(buffer, ptr);
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvTable::add_row(std::vector<Cell> row) {
    if (row.size() != columns_.size()) throw std::logic_error("CSV row width does not match the header");
    rows_.push_back(std::move(row));
}

void CsvTable::add_meta(std::string key, std::string value) { meta_.emplace_back(std::move(key), std::move(value)); }

void CsvTable::prepend_meta(const std::vector<std::pair<std::string, std::string>>& items) {
    meta_.insert(meta_.begin(), items.begin(), items.end());
}

void CsvTable::write(std::ostream& out) const {
    for (const auto& [key, value] : meta_) out << "# " << key << '=' << value << '\n';
    for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i];
    out << '\n';
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            std::visit(
                [&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, double>) {
                        out << format_number(v);
                    } else {
                        out << v;
                    }
                },
                row[i]);
        }
        out << '\n';
    }
}

}  // namespace matterwave::cli
