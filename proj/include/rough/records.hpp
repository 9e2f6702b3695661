#pragma once

// Tabular experiment records. One CsvTable holds a fixed column schema and
// append-only string rows; serialization is RFC-4180 CSV (CRLF, quoting only
// where required) with an optional JSON mirror carrying the same cells.
// Doubles are printed with %.17g so values round-trip exactly and reruns of
// a deterministic experiment produce byte-identical files.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace rough {

std::string format_double(double v);
std::string format_int(long long v);

// Quotes a field if it contains a comma, quote, CR or LF.
std::string csv_escape(const std::string& field);

std::uint64_t fnv1a64(const void* data, std::size_t len);
std::uint64_t fnv1a64(const std::string& s);
std::string hex64(std::uint64_t v);  // 16 lowercase hex digits

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> columns);

    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<std::vector<std::string>>& rows() const { return rows_; }
    std::size_t row_count() const { return rows_.size(); }

    // The cell count must match the column count.
    void add_row(std::vector<std::string> cells);

    // Column lookup by name; throws ConfigError for unknown names.
    std::size_t column_index(const std::string& name) const;
    const std::string& cell(std::size_t row, const std::string& column) const;

    std::string to_csv() const;
    void write_csv(const std::string& path) const;

    // JSON mirror: an array of objects keyed by column name, values kept as
    // the exact cell strings.
    std::string to_json() const;
    void write_json(const std::string& path) const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

// Reads a CSV produced by write_csv (header + quoted fields).
CsvTable read_csv(const std::string& path);

}  // namespace rough
