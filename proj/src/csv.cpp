#include "elecsim/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "elecsim/error.hpp"

namespace elecsim::csv {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string> split(std::string_view line, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(trim(line.substr(start)));
            break;
        }
        out.emplace_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

Table Table::read(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot open file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path.string());
}

Table Table::parse(std::string_view text, std::string source)
{
    Table t;
    t.source_ = std::move(source);
    std::size_t lineno = 0;
    std::size_t pos = 0;
    bool have_header = false;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++lineno;
        auto line = trim(raw);
        if (line.empty() || line.front() == '#')
            continue;
        auto fields = split(line);
        if (!have_header) {
            t.header_ = std::move(fields);
            have_header = true;
            continue;
        }
        if (fields.size() != t.header_.size())
            throw InputError(t.source_ + ":" + std::to_string(lineno) + ": expected " +
                             std::to_string(t.header_.size()) + " fields, found " +
                             std::to_string(fields.size()));
        t.rows_.push_back(std::move(fields));
        t.lines_.push_back(lineno);
    }
    if (!have_header)
        throw InputError(t.source_ + ": empty file, missing header row");
    return t;
}

bool Table::has_column(std::string_view name) const
{
    for (const auto& h : header_)
        if (h == name)
            return true;
    return false;
}

std::size_t Table::column(std::string_view name) const
{
    for (std::size_t i = 0; i < header_.size(); ++i)
        if (header_[i] == name)
            return i;
    throw InputError(source_ + ": missing column '" + std::string(name) + "'");
}

double Table::number(std::size_t row, std::size_t col) const
{
    const auto& s = rows_[row][col];
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw InputError(source_ + ":" + std::to_string(lines_[row]) + ": non-numeric value '" + s +
                         "' in column '" + header_[col] + "'");
    return v;
}

long long Table::integer(std::size_t row, std::size_t col) const
{
    const auto& s = rows_[row][col];
    long long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw InputError(source_ + ":" + std::to_string(lines_[row]) + ": non-integer value '" + s +
                         "' in column '" + header_[col] + "'");
    return v;
}

std::string format_number(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

} // namespace elecsim::csv
