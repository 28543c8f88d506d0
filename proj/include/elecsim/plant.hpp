#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace elecsim {

enum class PlantType {
    CCGT,
    Coal,
    Nuclear,
    OCGT,
    Offshore,
    Onshore,
    PV,
    Hydro,
    RecipDiesel,
    RecipGas,
};

inline constexpr std::array<PlantType, 10> kAllPlantTypes{
    PlantType::CCGT,     PlantType::Coal,    PlantType::Nuclear, PlantType::OCGT,
    PlantType::Offshore, PlantType::Onshore, PlantType::PV,      PlantType::Hydro,
    PlantType::RecipDiesel, PlantType::RecipGas,
};

std::string_view to_string(PlantType t);
/// Throws InputError for an unknown name.
PlantType parse_plant_type(std::string_view name);

enum class Fuel { Gas, Coal, Uranium, Diesel };

std::string_view to_string(Fuel f);
Fuel parse_fuel(std::string_view name);

/// Fuel burned by a plant type; empty for wind, solar and hydro.
std::optional<Fuel> fuel_of(PlantType t);

/// Columns of the hourly series matrix.
enum class Series : int { Demand = 0, Solar = 1, Onshore = 2, Offshore = 3 };
inline constexpr int kSeriesCount = 4;
inline constexpr std::array<std::string_view, kSeriesCount> kSeriesNames{
    "demand_mw", "solar_cf", "onshore_cf", "offshore_cf"};

/// Capacity-factor series driving an intermittent plant type.
std::optional<Series> capacity_factor_series(PlantType t);

inline bool is_intermittent(PlantType t) { return capacity_factor_series(t).has_value(); }

/// Technology groups used when comparing mixes against targets.
/// Offshore and onshore wind share one bucket.
enum class MixCategory { Wind, Nuclear, Solar, CCGT, Coal };
inline constexpr std::array<MixCategory, 5> kMixCategories{
    MixCategory::Wind, MixCategory::Nuclear, MixCategory::Solar, MixCategory::CCGT,
    MixCategory::Coal};

std::string_view to_string(MixCategory c);
std::optional<MixCategory> parse_mix_category(std::string_view name);
std::optional<MixCategory> mix_category_of(PlantType t);

/// The per-unit cost and timing record of one plant (cost table row payload).
/// Periods are in years; costs in currency per MW except infrastructure_cost,
/// which is an absolute amount.
struct PlantCosts {
    double efficiency = 1.0;
    double operating_period = 0.0;
    double predev_period = 0.0;
    double construction_period = 0.0;
    double predev_cost = 0.0;
    double construction_cost = 0.0;
    double infrastructure_cost = 0.0;
    double fixed_om = 0.0;
    double variable_om = 0.0;
    double insurance = 0.0;
    double connection = 0.0;

    friend bool operator==(const PlantCosts&, const PlantCosts&) = default;
};

/// Throws InputError if the record breaks the cost invariants.
void validate(const PlantCosts& costs);

struct PowerPlant {
    std::string id;
    std::string owner;
    PlantType type = PlantType::CCGT;
    double capacity_mw = 0.0;
    int construction_year = 0;
    PlantCosts costs;

    bool intermittent() const { return is_intermittent(type); }
    int operating_years() const;
    int age(int year) const { return year - construction_year; }
};

} // namespace elecsim
