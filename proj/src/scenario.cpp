#include "elecsim/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

#include "elecsim/csv.hpp"
#include "elecsim/error.hpp"

namespace elecsim {

namespace {

using json = nlohmann::json;

template <typename T>
double nearest_year(const std::map<int, T>& table, int year, const char* what)
{
    if (table.empty())
        throw InputError(std::string("no ") + what + " defined");
    auto it = table.lower_bound(year);
    if (it == table.end())
        return static_cast<double>(std::prev(it)->second);
    if (it->first == year || it == table.begin())
        return static_cast<double>(it->second);
    // Inside the table but between entries: validate() rules this out for the
    // simulated span, so fall back to the preceding year.
    return static_cast<double>(std::prev(it)->second);
}

int parse_year_key(const std::string& key, std::string_view table)
{
    int y = 0;
    auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), y);
    if (key.empty() || ec != std::errc{} || ptr != key.data() + key.size())
        throw InputError("scenario: '" + std::string(table) + "' has a non-year key '" + key + "'");
    return y;
}

double as_number(const json& v, std::string_view what)
{
    if (!v.is_number())
        throw InputError("scenario: '" + std::string(what) + "' must be a number");
    double d = v.get<double>();
    if (!std::isfinite(d))
        throw InputError("scenario: '" + std::string(what) + "' must be finite");
    return d;
}

std::map<int, double> year_table(const json& v, std::string_view what)
{
    if (!v.is_object())
        throw InputError("scenario: '" + std::string(what) + "' must be an object keyed by year");
    std::map<int, double> out;
    for (const auto& [k, x] : v.items())
        out[parse_year_key(k, what)] = as_number(x, std::string(what) + "." + k);
    return out;
}

PPDC parse_ppdc(const json& v, std::string_view what)
{
    if (!v.is_object())
        throw InputError("scenario: '" + std::string(what) + "' must be an object {m, c}");
    PPDC p;
    for (const auto& [k, x] : v.items()) {
        if (k == "m")
            p.m = as_number(x, what);
        else if (k == "c")
            p.c = as_number(x, what);
        else
            throw InputError("scenario: unknown key '" + k + "' in '" + std::string(what) + "'");
    }
    return p;
}

std::filesystem::path resolve(const std::filesystem::path& base, const json& v, std::string_view what)
{
    if (!v.is_string())
        throw InputError("scenario: '" + std::string(what) + "' must be a path string");
    std::filesystem::path p = v.get<std::string>();
    return p.is_relative() && !base.empty() ? base / p : p;
}

} // namespace

double ScenarioConfig::fuel_price_at(Fuel f, int year) const
{
    auto it = fuel_price.find(f);
    if (it == fuel_price.end())
        throw InputError("missing fuel price for " + std::string(to_string(f)));
    return nearest_year(it->second, year, "fuel price");
}

double ScenarioConfig::carbon_price_at(int year) const
{
    return nearest_year(carbon_price, year, "carbon price");
}

double ScenarioConfig::demand_scale_at(int year) const
{
    auto it = demand_scale.find(year);
    return it == demand_scale.end() ? 1.0 : it->second;
}

double ScenarioConfig::emission_factor_of(Fuel f) const
{
    auto it = emission_factor.find(f);
    return it == emission_factor.end() ? 0.0 : it->second;
}

PPDC ScenarioConfig::ppdc_at(int year) const
{
    auto it = ppdc_by_year.find(year);
    return it == ppdc_by_year.end() ? ppdc : it->second;
}

void ScenarioConfig::validate() const
{
    if (end_year < start_year)
        throw InputError("scenario: end_year " + std::to_string(end_year) + " precedes start_year " +
                         std::to_string(start_year));
    for (int y = start_year; y <= end_year; ++y) {
        if (!carbon_price.contains(y))
            throw InputError("scenario: missing carbon price for year " + std::to_string(y));
        for (const auto& [fuel, table] : fuel_price)
            if (!table.contains(y))
                throw InputError("scenario: missing " + std::string(to_string(fuel)) +
                                 " fuel price for year " + std::to_string(y));
    }
    for (const auto& [y, s] : demand_scale)
        if (s < 0.0)
            throw InputError("scenario: demand_scale for " + std::to_string(y) + " is negative");
    for (const auto& [f, e] : emission_factor)
        if (e < 0.0)
            throw InputError("scenario: negative emission factor for " + std::string(to_string(f)));
    if (sigma_m < 0.0 || sigma_c < 0.0)
        throw InputError("scenario: sigma_m and sigma_c must be non-negative");
    if (discount_rate <= -1.0)
        throw InputError("scenario: discount_rate must exceed -1");
    if (availability < 0.0 || availability > 1.0)
        throw InputError("scenario: availability must lie in [0, 1]");
    for (const auto& [type, cap] : investment_menu)
        if (!(cap > 0.0))
            throw InputError("scenario: investment_menu capacity for " + std::string(to_string(type)) +
                             " must be positive");
}

ScenarioConfig parse_scenario(const json& doc, const std::filesystem::path& base_dir)
{
    if (!doc.is_object())
        throw InputError("scenario: top level must be an object");
    ScenarioConfig s;
    bool have_start = false, have_end = false;
    for (const auto& [key, v] : doc.items()) {
        if (key == "start_year") {
            s.start_year = static_cast<int>(as_number(v, key));
            have_start = true;
        } else if (key == "end_year") {
            s.end_year = static_cast<int>(as_number(v, key));
            have_end = true;
        } else if (key == "fuel_price") {
            if (!v.is_object())
                throw InputError("scenario: 'fuel_price' must be an object keyed by fuel");
            for (const auto& [fuel, table] : v.items())
                s.fuel_price[parse_fuel(fuel)] = year_table(table, "fuel_price." + fuel);
        } else if (key == "carbon_price") {
            s.carbon_price = year_table(v, key);
        } else if (key == "demand_scale") {
            s.demand_scale = year_table(v, key);
        } else if (key == "emission_factor") {
            if (!v.is_object())
                throw InputError("scenario: 'emission_factor' must be an object keyed by fuel");
            for (const auto& [fuel, x] : v.items())
                s.emission_factor[parse_fuel(fuel)] = as_number(x, "emission_factor." + fuel);
        } else if (key == "scheduled_retirements") {
            if (!v.is_array())
                throw InputError("scenario: 'scheduled_retirements' must be an array");
            for (const auto& r : v) {
                if (!r.is_object() || !r.contains("plant_id") || !r.contains("year") || r.size() != 2 ||
                    !r["plant_id"].is_string())
                    throw InputError("scenario: retirement entries need exactly {plant_id, year}");
                s.scheduled_retirements.push_back(
                    {r["plant_id"].get<std::string>(), static_cast<int>(as_number(r["year"], "year"))});
            }
        } else if (key == "discount_rate") {
            s.discount_rate = as_number(v, key);
        } else if (key == "price_cap") {
            s.price_cap = as_number(v, key);
        } else if (key == "nuclear_subsidy") {
            s.nuclear_subsidy = as_number(v, key);
        } else if (key == "sigma_m") {
            s.sigma_m = as_number(v, key);
        } else if (key == "sigma_c") {
            s.sigma_c = as_number(v, key);
        } else if (key == "rng_seed") {
            if (!v.is_number_unsigned())
                throw InputError("scenario: 'rng_seed' must be a non-negative integer");
            s.rng_seed = v.get<std::uint64_t>();
        } else if (key == "availability") {
            s.availability = as_number(v, key);
        } else if (key == "gencos") {
            if (!v.is_object())
                throw InputError("scenario: 'gencos' must be an object of id -> funds");
            for (const auto& [id, funds] : v.items())
                s.gencos[id] = as_number(funds, "gencos." + id);
        } else if (key == "ppdc") {
            s.ppdc = parse_ppdc(v, key);
        } else if (key == "ppdc_by_year") {
            if (!v.is_object())
                throw InputError("scenario: 'ppdc_by_year' must be an object keyed by year");
            for (const auto& [y, p] : v.items())
                s.ppdc_by_year[parse_year_key(y, key)] = parse_ppdc(p, "ppdc_by_year." + y);
        } else if (key == "investment_menu") {
            if (!v.is_object())
                throw InputError("scenario: 'investment_menu' must be an object of type -> capacity");
            for (const auto& [type, cap] : v.items())
                s.investment_menu[parse_plant_type(type)] = as_number(cap, "investment_menu." + type);
        } else if (key == "cost_table") {
            s.cost_table = resolve(base_dir, v, key);
        } else if (key == "registry") {
            s.registry = resolve(base_dir, v, key);
        } else if (key == "repdays") {
            s.repdays = resolve(base_dir, v, key);
        } else {
            throw InputError("scenario: unknown key '" + key + "'");
        }
    }
    if (!have_start || !have_end)
        throw InputError("scenario: start_year and end_year are required");
    s.validate();
    return s;
}

ScenarioConfig load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open scenario file: " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError("scenario " + path.string() + ": " + e.what());
    }
    try {
        return parse_scenario(doc, path.parent_path());
    } catch (const InputError& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

json to_json(const ScenarioConfig& s)
{
    auto years = [](const std::map<int, double>& t) {
        json o = json::object();
        for (const auto& [y, v] : t)
            o[std::to_string(y)] = v;
        return o;
    };
    json doc;
    doc["start_year"] = s.start_year;
    doc["end_year"] = s.end_year;
    json fuels = json::object();
    for (const auto& [f, t] : s.fuel_price)
        fuels[std::string(to_string(f))] = years(t);
    doc["fuel_price"] = fuels;
    doc["carbon_price"] = years(s.carbon_price);
    doc["demand_scale"] = years(s.demand_scale);
    json ef = json::object();
    for (const auto& [f, e] : s.emission_factor)
        ef[std::string(to_string(f))] = e;
    doc["emission_factor"] = ef;
    json ret = json::array();
    for (const auto& r : s.scheduled_retirements)
        ret.push_back({{"plant_id", r.plant_id}, {"year", r.year}});
    doc["scheduled_retirements"] = ret;
    doc["discount_rate"] = s.discount_rate;
    doc["price_cap"] = s.price_cap;
    doc["nuclear_subsidy"] = s.nuclear_subsidy;
    doc["sigma_m"] = s.sigma_m;
    doc["sigma_c"] = s.sigma_c;
    doc["rng_seed"] = s.rng_seed;
    doc["availability"] = s.availability;
    doc["gencos"] = s.gencos;
    doc["ppdc"] = {{"m", s.ppdc.m}, {"c", s.ppdc.c}};
    json by_year = json::object();
    for (const auto& [y, p] : s.ppdc_by_year)
        by_year[std::to_string(y)] = {{"m", p.m}, {"c", p.c}};
    doc["ppdc_by_year"] = by_year;
    json menu = json::object();
    for (const auto& [t, cap] : s.investment_menu)
        menu[std::string(to_string(t))] = cap;
    doc["investment_menu"] = menu;
    if (!s.cost_table.empty())
        doc["cost_table"] = s.cost_table.string();
    if (!s.registry.empty())
        doc["registry"] = s.registry.string();
    if (!s.repdays.empty())
        doc["repdays"] = s.repdays.string();
    return doc;
}

std::vector<PowerPlant> parse_plant_registry(std::string_view csv_text, const CostTable& costs,
                                             const ScenarioConfig& scenario, std::string source)
{
    auto t = csv::Table::parse(csv_text, std::move(source));
    const auto c_id = t.column("plant_id"), c_owner = t.column("owner_id"), c_type = t.column("type"),
               c_cap = t.column("capacity_mw"), c_year = t.column("construction_year");
    std::vector<PowerPlant> plants;
    std::set<std::string> ids;
    for (std::size_t r = 0; r < t.rows(); ++r) {
        auto where = t.source() + ":" + std::to_string(t.line(r)) + ": ";
        PowerPlant p;
        p.id = t.cell(r, c_id);
        p.owner = t.cell(r, c_owner);
        if (p.id.empty())
            throw InputError(where + "empty plant_id");
        if (!ids.insert(p.id).second)
            throw InputError(where + "duplicate plant_id '" + p.id + "'");
        if (!scenario.gencos.contains(p.owner))
            throw InputError(where + "plant '" + p.id + "' references unknown owner '" + p.owner + "'");
        try {
            p.type = parse_plant_type(t.cell(r, c_type));
        } catch (const InputError& e) {
            throw InputError(where + e.what());
        }
        p.capacity_mw = t.number(r, c_cap);
        if (!(p.capacity_mw > 0.0))
            throw InputError(where + "capacity must be positive");
        p.construction_year = static_cast<int>(t.integer(r, c_year));
        try {
            p.costs = lookup_plant_costs(costs, p.type, p.capacity_mw, p.construction_year).costs;
        } catch (const InputError& e) {
            throw InputError(where + e.what());
        }
        plants.push_back(std::move(p));
    }
    for (const auto& r : scenario.scheduled_retirements)
        if (!ids.contains(r.plant_id))
            throw InputError("scheduled retirement references unknown plant '" + r.plant_id + "'");
    return plants;
}

std::vector<PowerPlant> load_plant_registry(const std::filesystem::path& path, const CostTable& costs,
                                            const ScenarioConfig& scenario)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot open plant registry: " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_plant_registry(text, costs, scenario, path.string());
}

} // namespace elecsim
