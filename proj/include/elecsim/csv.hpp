#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace elecsim::csv {

/// A comma-separated table with a header row. Cells are kept as text; quoting
/// is not supported since none of the formats need it.
class Table {
public:
    static Table read(const std::filesystem::path& path);
    static Table parse(std::string_view text, std::string source = "<memory>");

    const std::vector<std::string>& header() const { return header_; }
    std::size_t rows() const { return rows_.size(); }
    const std::vector<std::string>& row(std::size_t i) const { return rows_[i]; }
    /// 1-based line number of row i in the source, for messages.
    std::size_t line(std::size_t i) const { return lines_[i]; }
    const std::string& source() const { return source_; }

    /// Index of a named column; throws InputError when absent.
    std::size_t column(std::string_view name) const;
    bool has_column(std::string_view name) const;

    const std::string& cell(std::size_t row, std::size_t col) const { return rows_[row][col]; }
    /// Parse a numeric cell; throws InputError naming source, line and column.
    double number(std::size_t row, std::size_t col) const;
    long long integer(std::size_t row, std::size_t col) const;

private:
    std::string source_;
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
    std::vector<std::size_t> lines_;
};

std::vector<std::string> split(std::string_view line, char sep = ',');
std::string_view trim(std::string_view s);

/// Shortest text that round-trips the double exactly.
std::string format_number(double v);

} // namespace elecsim::csv
