#pragma once

#include <array>
#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "elecsim/plant.hpp"
#include "elecsim/repdays.hpp"

namespace elecsim {

struct Bid {
    std::string plant_id;
    double price = 0.0;    ///< currency/MWh
    double quantity = 0.0; ///< MW offered this hour
};

struct ClearingResult {
    double clearing_price = 0.0;
    std::vector<double> dispatch; ///< MW per bid, in the order bids were given
    double served = 0.0;
    double unserved = 0.0;
};

/// Short-run marginal cost in currency/MWh:
/// fuel/eta + carbon*emission_factor/eta + variable O&M.
/// Throws InputError when a fuel-burning plant has eta <= 0.
double srmc(PlantType type, const PlantCosts& costs, double fuel_price, double carbon_price,
            double emission_factor);

/// Uniform-price merit-order clearing.
///
/// Bids are accepted cheapest first (ties: larger quantity, then plant id)
/// until demand is met. The marginal accepted bid sets the price paid to all.
/// Zero demand clears at 0; a shortfall is left unserved and priced at `price_cap`.
ClearingResult clear_market(std::span<const Bid> bids, double demand, double price_cap);

/// A plant as seen by the day-ahead market.
struct DispatchUnit {
    std::string plant_id;
    PlantType type = PlantType::CCGT;
    double capacity_mw = 0.0;
    double srmc = 0.0;
    double availability = 1.0; ///< dispatchable plants only
};

/// Offered MW for one hour: capacity times that hour's capacity factor for
/// intermittent plants, capacity times availability otherwise.
double offered_quantity(const DispatchUnit& unit, const DayProfile& day, int hour);

struct DispatchDay {
    std::array<ClearingResult, kHoursPerDay> hours;
    std::array<double, kHoursPerDay> demand{};
    std::vector<double> energy_mwh;     ///< per unit, scaled to the day's annual duration
    std::vector<double> revenue;        ///< market payments per unit
    std::vector<double> subsidy;        ///< out-of-market nuclear payments per unit
    double unserved_mwh = 0.0;
    double served_mwh = 0.0;
};

/// Clear the 24 hours of one representative day. Each hour stands for
/// `day_weight * 365` hours of the year.
DispatchDay dispatch_day(std::span<const DispatchUnit> units, const DayProfile& day, double day_weight,
                         double demand_scale, double price_cap, double nuclear_subsidy);

/// `year,cluster,hour,weight,plant_id,price,dispatch_mw,clearing_price,unserved_mw`
void write_dispatch_log_header(std::ostream& out);
void write_dispatch_log(std::ostream& out, int year, int cluster, double day_weight,
                        std::span<const DispatchUnit> units, const DispatchDay& day);

} // namespace elecsim
