#include "elecsim/market.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "elecsim/csv.hpp"
#include "elecsim/error.hpp"

namespace elecsim {

double srmc(PlantType type, const PlantCosts& costs, double fuel_price, double carbon_price,
            double emission_factor)
{
    if (!fuel_of(type))
        return costs.variable_om;
    if (!(costs.efficiency > 0.0))
        throw InputError(std::string(to_string(type)) + ": efficiency must be positive for a fuel-burning plant");
    return fuel_price / costs.efficiency + carbon_price * emission_factor / costs.efficiency + costs.variable_om;
}

ClearingResult clear_market(std::span<const Bid> bids, double demand, double price_cap)
{
    if (!(demand >= 0.0))
        throw InputError("demand must be non-negative");
    ClearingResult result;
    result.dispatch.assign(bids.size(), 0.0);
    if (demand == 0.0)
        return result;

    std::vector<std::size_t> order(bids.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& x = bids[a];
        const auto& y = bids[b];
        if (x.price != y.price)
            return x.price < y.price;
        if (x.quantity != y.quantity)
            return x.quantity > y.quantity;
        if (x.plant_id != y.plant_id)
            return x.plant_id < y.plant_id;
        return a < b;
    });

    double remaining = demand;
    for (auto i : order) {
        if (remaining <= 0.0)
            break;
        const double take = std::min(bids[i].quantity, remaining);
        if (take <= 0.0)
            continue;
        result.dispatch[i] = take;
        result.served += take;
        remaining -= take;
        result.clearing_price = bids[i].price;
    }
    if (remaining > 0.0) {
        result.unserved = remaining;
        result.clearing_price = price_cap;
    }
    return result;
}

double offered_quantity(const DispatchUnit& unit, const DayProfile& day, int hour)
{
    if (auto series = capacity_factor_series(unit.type))
        return unit.capacity_mw * day(hour, static_cast<int>(*series));
    return unit.capacity_mw * unit.availability;
}

DispatchDay dispatch_day(std::span<const DispatchUnit> units, const DayProfile& day, double day_weight,
                         double demand_scale, double price_cap, double nuclear_subsidy)
{
    const double hours_per_hour = day_weight * kDaysPerYear;
    DispatchDay out;
    out.energy_mwh.assign(units.size(), 0.0);
    out.revenue.assign(units.size(), 0.0);
    out.subsidy.assign(units.size(), 0.0);

    std::vector<Bid> bids(units.size());
    for (std::size_t u = 0; u < units.size(); ++u) {
        bids[u].plant_id = units[u].plant_id;
        bids[u].price = units[u].srmc;
    }
    for (int h = 0; h < kHoursPerDay; ++h) {
        for (std::size_t u = 0; u < units.size(); ++u)
            bids[u].quantity = offered_quantity(units[u], day, h);
        const double demand = day(h, static_cast<int>(Series::Demand)) * demand_scale;
        out.demand[static_cast<std::size_t>(h)] = demand;
        auto& cleared = out.hours[static_cast<std::size_t>(h)];
        cleared = clear_market(bids, demand, price_cap);
        for (std::size_t u = 0; u < units.size(); ++u) {
            const double mwh = cleared.dispatch[u] * hours_per_hour;
            out.energy_mwh[u] += mwh;
            out.revenue[u] += mwh * cleared.clearing_price;
            if (units[u].type == PlantType::Nuclear)
                out.subsidy[u] += mwh * nuclear_subsidy;
        }
        out.served_mwh += cleared.served * hours_per_hour;
        out.unserved_mwh += cleared.unserved * hours_per_hour;
    }
    return out;
}

void write_dispatch_log_header(std::ostream& out)
{
    out << "year,cluster,hour,weight,plant_id,price,dispatch_mw,clearing_price,unserved_mw\n";
}

void write_dispatch_log(std::ostream& out, int year, int cluster, double day_weight,
                        std::span<const DispatchUnit> units, const DispatchDay& day)
{
    using csv::format_number;
    for (int h = 0; h < kHoursPerDay; ++h) {
        const auto& hr = day.hours[static_cast<std::size_t>(h)];
        for (std::size_t u = 0; u < units.size(); ++u)
            out << year << ',' << cluster << ',' << h << ',' << format_number(day_weight) << ','
                << units[u].plant_id << ',' << format_number(units[u].srmc) << ','
                << format_number(hr.dispatch[u]) << ',' << format_number(hr.clearing_price) << ','
                << format_number(hr.unserved) << '\n';
    }
}

} // namespace elecsim
