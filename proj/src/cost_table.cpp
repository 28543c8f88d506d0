#include "elecsim/cost_table.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "elecsim/csv.hpp"
#include "elecsim/error.hpp"

namespace elecsim {

namespace {

constexpr std::string_view kColumns[] = {"type", "capacity_mw", "year", "efficiency", "op",
                                         "pd",   "cd",          "pc",   "cc",         "ic",
                                         "fc",   "vc",          "inc",  "conc"};

PlantCosts lerp(const PlantCosts& a, const PlantCosts& b, double t)
{
    auto mix = [t](double x, double y) { return x + (y - x) * t; };
    return PlantCosts{
        mix(a.efficiency, b.efficiency),
        mix(a.operating_period, b.operating_period),
        mix(a.predev_period, b.predev_period),
        mix(a.construction_period, b.construction_period),
        mix(a.predev_cost, b.predev_cost),
        mix(a.construction_cost, b.construction_cost),
        mix(a.infrastructure_cost, b.infrastructure_cost),
        mix(a.fixed_om, b.fixed_om),
        mix(a.variable_om, b.variable_om),
        mix(a.insurance, b.insurance),
        mix(a.connection, b.connection),
    };
}

int parse_int(std::string_view s, std::string_view cell)
{
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw InputError("malformed year cell '" + std::string(cell) + "'");
    return v;
}

// Bracketing pair within a sorted list; clamped at the ends.
template <typename T>
std::pair<T, T> bracket(const std::vector<T>& sorted, T x, bool& clamped)
{
    if (x <= sorted.front()) {
        clamped = clamped || x < sorted.front();
        return {sorted.front(), sorted.front()};
    }
    if (x >= sorted.back()) {
        clamped = clamped || x > sorted.back();
        return {sorted.back(), sorted.back()};
    }
    auto hi = std::lower_bound(sorted.begin(), sorted.end(), x);
    if (*hi == x)
        return {x, x};
    return {*(hi - 1), *hi};
}

} // namespace

std::vector<int> expand_year_cell(std::string_view cell)
{
    auto parts = csv::split(cell, '/');
    if (parts.empty() || parts.front().size() != 4)
        throw InputError("malformed year cell '" + std::string(cell) + "'");
    std::vector<int> years;
    years.push_back(parse_int(parts.front(), cell));
    for (std::size_t i = 1; i < parts.size(); ++i) {
        const auto& p = parts[i];
        if (p.empty() || p.size() > 4)
            throw InputError("malformed year cell '" + std::string(cell) + "'");
        std::string full = parts.front().substr(0, 4 - p.size()) + p;
        int y = parse_int(full, cell);
        parse_int(p, cell);
        if (y <= years.back())
            throw InputError("malformed year cell '" + std::string(cell) + "' (years must increase)");
        years.push_back(y);
    }
    return years;
}

void CostTable::add(const CostRow& row)
{
    if (!(row.capacity_mw > 0.0))
        throw InputError("cost row capacity must be positive");
    try {
        validate(row.costs);
    } catch (const InputError& e) {
        throw InputError(std::string(to_string(row.type)) + " " + csv::format_number(row.capacity_mw) +
                         " MW " + std::to_string(row.year) + ": " + e.what());
    }
    for (const auto& r : rows_)
        if (r.type == row.type && r.capacity_mw == row.capacity_mw && r.year == row.year)
            throw InputError("duplicate cost row for " + std::string(to_string(row.type)) + " " +
                             csv::format_number(row.capacity_mw) + " MW " + std::to_string(row.year));
    rows_.push_back(row);
}

CostTable CostTable::parse(std::string_view csv_text, std::string source)
{
    auto t = csv::Table::parse(csv_text, std::move(source));
    std::size_t col[std::size(kColumns)];
    for (std::size_t i = 0; i < std::size(kColumns); ++i)
        col[i] = t.column(kColumns[i]);

    CostTable table;
    for (std::size_t r = 0; r < t.rows(); ++r) {
        auto where = [&] { return t.source() + ":" + std::to_string(t.line(r)) + ": "; };
        CostRow row;
        try {
            row.type = parse_plant_type(t.cell(r, col[0]));
        } catch (const InputError& e) {
            throw InputError(where() + e.what());
        }
        row.capacity_mw = t.number(r, col[1]);
        auto& c = row.costs;
        double* fields[] = {&c.efficiency,         &c.operating_period, &c.predev_period,
                            &c.construction_period, &c.predev_cost,      &c.construction_cost,
                            &c.infrastructure_cost, &c.fixed_om,         &c.variable_om,
                            &c.insurance,           &c.connection};
        for (std::size_t f = 0; f < std::size(fields); ++f)
            *fields[f] = t.number(r, col[3 + f]);
        std::vector<int> years;
        try {
            years = expand_year_cell(t.cell(r, col[2]));
            for (int y : years) {
                row.year = y;
                table.add(row);
            }
        } catch (const InputError& e) {
            throw InputError(where() + e.what());
        }
    }
    return table;
}

CostTable CostTable::load(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot open cost table: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path.string());
}

std::vector<const CostRow*> CostTable::rows_for(PlantType type) const
{
    std::vector<const CostRow*> out;
    for (const auto& r : rows_)
        if (r.type == type)
            out.push_back(&r);
    return out;
}

bool CostTable::has_type(PlantType type) const
{
    return std::any_of(rows_.begin(), rows_.end(), [type](const CostRow& r) { return r.type == type; });
}

std::string CostTable::to_csv() const
{
    std::string out;
    for (std::size_t i = 0; i < std::size(kColumns); ++i) {
        if (i)
            out += ',';
        out += kColumns[i];
    }
    out += '\n';
    for (const auto& r : rows_) {
        const auto& c = r.costs;
        out += to_string(r.type);
        for (double v : {r.capacity_mw, static_cast<double>(r.year), c.efficiency, c.operating_period,
                         c.predev_period, c.construction_period, c.predev_cost, c.construction_cost,
                         c.infrastructure_cost, c.fixed_om, c.variable_om, c.insurance, c.connection}) {
            out += ',';
            out += csv::format_number(v);
        }
        out += '\n';
    }
    return out;
}

void CostTable::save(const std::filesystem::path& path) const
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw RuntimeFailure("cannot write " + path.string());
    out << to_csv();
}

CostLookup lookup_plant_costs(const CostTable& table, PlantType type, double capacity_mw, int year)
{
    auto rows = table.rows_for(type);
    if (rows.empty())
        throw InputError("no cost data for plant type " + std::string(to_string(type)));

    for (const auto* r : rows)
        if (r->capacity_mw == capacity_mw && r->year == year)
            return {r->costs, CostResolution::Exact, "exact"};

    std::vector<int> years;
    for (const auto* r : rows)
        years.push_back(r->year);
    std::sort(years.begin(), years.end());
    years.erase(std::unique(years.begin(), years.end()), years.end());

    bool clamped = false;
    std::string trace;

    auto at_year = [&](int y) {
        std::vector<double> caps;
        for (const auto* r : rows)
            if (r->year == y)
                caps.push_back(r->capacity_mw);
        std::sort(caps.begin(), caps.end());
        auto [lo, hi] = bracket(caps, capacity_mw, clamped);
        auto find = [&](double cap) {
            for (const auto* r : rows)
                if (r->year == y && r->capacity_mw == cap)
                    return r->costs;
            return PlantCosts{};
        };
        trace += "year " + std::to_string(y) + ": capacity " + csv::format_number(lo) + ".." +
                 csv::format_number(hi) + "; ";
        if (lo == hi)
            return find(lo);
        return lerp(find(lo), find(hi), (capacity_mw - lo) / (hi - lo));
    };

    auto [y0, y1] = bracket(years, year, clamped);
    PlantCosts costs = y0 == y1 ? at_year(y0)
                                : lerp(at_year(y0), at_year(y1),
                                       static_cast<double>(year - y0) / static_cast<double>(y1 - y0));
    trace += "years " + std::to_string(y0) + ".." + std::to_string(y1);
    return {costs, clamped ? CostResolution::Extrapolated : CostResolution::Interpolated, trace};
}

} // namespace elecsim
