#include "elecsim/plant.hpp"

#include <cmath>

#include "elecsim/error.hpp"

namespace elecsim {

std::string_view to_string(PlantType t)
{
    switch (t) {
    case PlantType::CCGT: return "CCGT";
    case PlantType::Coal: return "Coal";
    case PlantType::Nuclear: return "Nuclear";
    case PlantType::OCGT: return "OCGT";
    case PlantType::Offshore: return "Offshore";
    case PlantType::Onshore: return "Onshore";
    case PlantType::PV: return "PV";
    case PlantType::Hydro: return "Hydro";
    case PlantType::RecipDiesel: return "RecipDiesel";
    case PlantType::RecipGas: return "RecipGas";
    }
    return "?";
}

PlantType parse_plant_type(std::string_view name)
{
    for (auto t : kAllPlantTypes)
        if (to_string(t) == name)
            return t;
    throw InputError("unknown plant type '" + std::string(name) + "'");
}

std::string_view to_string(Fuel f)
{
    switch (f) {
    case Fuel::Gas: return "gas";
    case Fuel::Coal: return "coal";
    case Fuel::Uranium: return "uranium";
    case Fuel::Diesel: return "diesel";
    }
    return "?";
}

Fuel parse_fuel(std::string_view name)
{
    for (auto f : {Fuel::Gas, Fuel::Coal, Fuel::Uranium, Fuel::Diesel})
        if (to_string(f) == name)
            return f;
    throw InputError("unknown fuel '" + std::string(name) + "'");
}

std::optional<Fuel> fuel_of(PlantType t)
{
    switch (t) {
    case PlantType::CCGT:
    case PlantType::OCGT:
    case PlantType::RecipGas: return Fuel::Gas;
    case PlantType::Coal: return Fuel::Coal;
    case PlantType::Nuclear: return Fuel::Uranium;
    case PlantType::RecipDiesel: return Fuel::Diesel;
    default: return std::nullopt;
    }
}

std::optional<Series> capacity_factor_series(PlantType t)
{
    switch (t) {
    case PlantType::PV: return Series::Solar;
    case PlantType::Onshore: return Series::Onshore;
    case PlantType::Offshore: return Series::Offshore;
    default: return std::nullopt;
    }
}

std::string_view to_string(MixCategory c)
{
    switch (c) {
    case MixCategory::Wind: return "wind";
    case MixCategory::Nuclear: return "nuclear";
    case MixCategory::Solar: return "solar";
    case MixCategory::CCGT: return "CCGT";
    case MixCategory::Coal: return "coal";
    }
    return "?";
}

std::optional<MixCategory> parse_mix_category(std::string_view name)
{
    for (auto c : kMixCategories)
        if (to_string(c) == name)
            return c;
    return std::nullopt;
}

std::optional<MixCategory> mix_category_of(PlantType t)
{
    switch (t) {
    case PlantType::Offshore:
    case PlantType::Onshore: return MixCategory::Wind;
    case PlantType::Nuclear: return MixCategory::Nuclear;
    case PlantType::PV: return MixCategory::Solar;
    case PlantType::CCGT: return MixCategory::CCGT;
    case PlantType::Coal: return MixCategory::Coal;
    default: return std::nullopt;
    }
}

void validate(const PlantCosts& c)
{
    if (!(c.efficiency >= 0.0) || c.efficiency > 1.0)
        throw InputError("efficiency must lie in [0, 1], got " + std::to_string(c.efficiency));
    for (double p : {c.operating_period, c.predev_period, c.construction_period})
        if (!(p >= 0.0))
            throw InputError("periods must be non-negative");
    for (double v : {c.predev_cost, c.construction_cost, c.infrastructure_cost, c.fixed_om,
                     c.variable_om, c.insurance})
        if (!(v >= 0.0))
            throw InputError("costs must be non-negative");
    if (!std::isfinite(c.connection))
        throw InputError("connection cost must be finite");
}

int PowerPlant::operating_years() const
{
    return static_cast<int>(std::lround(costs.operating_period));
}

} // namespace elecsim
