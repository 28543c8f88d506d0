#include "elecsim/timeseries.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>

#include "elecsim/csv.hpp"
#include "elecsim/error.hpp"

namespace elecsim {

namespace {

bool in_range(const Eigen::Ref<const Eigen::RowVector4d>& row)
{
    if (!std::isfinite(row(0)) || row(0) < 0.0)
        return false;
    for (int s = 1; s < kSeriesCount; ++s)
        if (!std::isfinite(row(s)) || row(s) < 0.0 || row(s) > 1.0)
            return false;
    return true;
}

} // namespace

std::chrono::sys_seconds parse_timestamp(std::string_view text)
{
    using namespace std::chrono;
    std::string s(text);
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
    char sep = 0;
    int consumed = 0;
    int n = std::sscanf(s.c_str(), "%4d-%2d-%2d%c%2d:%2d%n", &y, &mo, &d, &sep, &h, &mi, &consumed);
    if (n != 6 || (sep != 'T' && sep != ' '))
        throw InputError("malformed timestamp '" + s + "'");
    std::string_view rest = std::string_view(s).substr(static_cast<std::size_t>(consumed));
    if (!rest.empty() && rest.front() == ':') {
        int used = 0;
        if (std::sscanf(rest.data(), ":%2d%n", &sec, &used) != 1)
            throw InputError("malformed timestamp '" + s + "'");
        rest.remove_prefix(static_cast<std::size_t>(used));
    }
    if (rest == "Z")
        rest = {};
    if (!rest.empty())
        throw InputError("malformed timestamp '" + s + "'");
    year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h < 0 || h > 23 || mi < 0 || mi > 59 || sec < 0 || sec > 59)
        throw InputError("malformed timestamp '" + s + "'");
    return sys_days{ymd} + hours{h} + minutes{mi} + seconds{sec};
}

std::string format_timestamp(std::chrono::sys_seconds t)
{
    using namespace std::chrono;
    auto day = floor<days>(t);
    year_month_day ymd{day};
    auto tod = t - day;
    auto h = duration_cast<hours>(tod).count();
    auto m = duration_cast<minutes>(tod).count() % 60;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<long long>(h), static_cast<long long>(m));
    return buf;
}

TimeSeriesSet TimeSeriesSet::from_values(std::chrono::sys_days first_day, SeriesMatrix values)
{
    if (values.rows() % 24 != 0)
        throw InputError("hourly values must cover whole days");
    for (Eigen::Index r = 0; r < values.rows(); ++r)
        if (!in_range(values.row(r)))
            throw InputError("hour " + std::to_string(r) + " is outside the valid demand/capacity-factor range");
    TimeSeriesSet ts;
    ts.values = std::move(values);
    ts.timestamps.reserve(static_cast<std::size_t>(ts.values.rows()));
    for (Eigen::Index r = 0; r < ts.values.rows(); ++r)
        ts.timestamps.push_back(std::chrono::sys_seconds{first_day} + std::chrono::hours{r});
    return ts;
}

TimeSeriesSet parse_hourly_series(std::string_view csv_text, std::string source)
{
    using namespace std::chrono;
    auto table = csv::Table::parse(csv_text, std::move(source));
    const auto ts_col = table.column("timestamp");
    std::size_t cols[kSeriesCount];
    for (int s = 0; s < kSeriesCount; ++s)
        cols[s] = table.column(kSeriesNames[static_cast<std::size_t>(s)]);

    struct Row {
        sys_seconds t;
        Eigen::RowVector4d v;
    };
    std::vector<Row> kept;
    kept.reserve(table.rows());
    std::size_t rejected = 0;
    std::optional<sys_seconds> prev;
    for (std::size_t r = 0; r < table.rows(); ++r) {
        sys_seconds t;
        try {
            t = parse_timestamp(table.cell(r, ts_col));
        } catch (const InputError& e) {
            throw InputError(table.source() + ":" + std::to_string(table.line(r)) + ": " + e.what());
        }
        if (t != floor<hours>(t))
            throw InputError(table.source() + ":" + std::to_string(table.line(r)) +
                             ": timestamp is not on the hour");
        if (prev && t <= *prev)
            throw InputError(table.source() + ":" + std::to_string(table.line(r)) +
                             ": timestamps must be strictly increasing");
        prev = t;
        Eigen::RowVector4d v;
        for (int s = 0; s < kSeriesCount; ++s)
            v(s) = table.number(r, cols[s]);
        if (!in_range(v)) {
            ++rejected;
            continue;
        }
        kept.push_back({t, v});
    }
    if (table.rows() > 0 && static_cast<double>(rejected) > 0.01 * static_cast<double>(table.rows()))
        throw InputError(table.source() + ": " + std::to_string(rejected) + " of " +
                         std::to_string(table.rows()) + " rows have out-of-range values (limit 1%)");

    // Keep runs of 24 rows that cover hours 0..23 of one date.
    std::vector<std::size_t> day_starts;
    std::size_t i = 0;
    while (i < kept.size()) {
        auto day = floor<days>(kept[i].t);
        std::size_t j = i;
        while (j < kept.size() && floor<days>(kept[j].t) == day)
            ++j;
        if (j - i == 24)
            day_starts.push_back(i);
        i = j;
    }

    TimeSeriesSet ts;
    ts.rejected_rows = rejected;
    ts.values.resize(static_cast<Eigen::Index>(day_starts.size() * 24), kSeriesCount);
    ts.timestamps.reserve(day_starts.size() * 24);
    Eigen::Index out = 0;
    for (auto start : day_starts)
        for (std::size_t h = 0; h < 24; ++h, ++out) {
            ts.values.row(out) = kept[start + h].v;
            ts.timestamps.push_back(kept[start + h].t);
        }
    ts.dropped_hours = kept.size() - day_starts.size() * 24;
    return ts;
}

TimeSeriesSet load_hourly_series(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot open hourly series: " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_hourly_series(text, path.string());
}

void write_hourly_series(const TimeSeriesSet& ts, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw RuntimeFailure("cannot write " + path.string());
    out << "timestamp,demand_mw,solar_cf,onshore_cf,offshore_cf\n";
    for (Eigen::Index r = 0; r < ts.hours(); ++r) {
        out << format_timestamp(ts.timestamps[static_cast<std::size_t>(r)]);
        for (int s = 0; s < kSeriesCount; ++s)
            out << ',' << csv::format_number(ts.values(r, s));
        out << '\n';
    }
}

} // namespace elecsim
