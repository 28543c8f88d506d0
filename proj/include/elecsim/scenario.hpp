#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "elecsim/cost_table.hpp"
#include "elecsim/plant.hpp"
#include "elecsim/ppdc.hpp"

namespace elecsim {

struct ScheduledRetirement {
    std::string plant_id;
    int year = 0;
};

/// Exogenous inputs for one simulation run.
///
/// Per-year tables are looked up with the nearest defined year when a query
/// falls outside them, so investment appraisal beyond the horizon holds the
/// last known price constant.
struct ScenarioConfig {
    int start_year = 0;
    int end_year = 0;
    std::map<Fuel, std::map<int, double>> fuel_price; ///< currency / MWh thermal
    std::map<int, double> carbon_price;                ///< currency / tCO2
    std::map<int, double> demand_scale;                ///< missing years default to 1
    std::map<Fuel, double> emission_factor;            ///< tCO2 / MWh thermal, missing = 0
    std::vector<ScheduledRetirement> scheduled_retirements;
    double discount_rate = 0.06;
    double price_cap = 300.0;
    double nuclear_subsidy = 0.0;
    double sigma_m = 0.0;
    double sigma_c = 0.0;
    std::uint64_t rng_seed = 0;
    double availability = 1.0;
    std::map<std::string, double> gencos; ///< GenCo id -> starting funds
    PPDC ppdc;                            ///< base belief used for years without an override
    std::map<int, PPDC> ppdc_by_year;
    std::map<PlantType, double> investment_menu; ///< type -> capacity; empty = derive from cost table
    std::filesystem::path cost_table;
    std::filesystem::path registry;
    std::filesystem::path repdays;

    int years() const { return end_year - start_year + 1; }
    bool has_fuel(Fuel f) const { return fuel_price.contains(f); }
    double fuel_price_at(Fuel f, int year) const;
    double carbon_price_at(int year) const;
    double demand_scale_at(int year) const;
    double emission_factor_of(Fuel f) const;
    PPDC ppdc_at(int year) const;

    /// Throws InputError naming the first broken invariant.
    void validate() const;
};

/// Parse the JSON scenario format. Relative paths resolve against `base_dir`.
/// Unknown keys are errors.
ScenarioConfig parse_scenario(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
ScenarioConfig load_scenario(const std::filesystem::path& path);
nlohmann::json to_json(const ScenarioConfig& s);

/// Registry CSV `plant_id,owner_id,type,capacity_mw,construction_year`; every
/// plant gets costs resolved at its construction year.
std::vector<PowerPlant> load_plant_registry(const std::filesystem::path& path, const CostTable& costs,
                                            const ScenarioConfig& scenario);
std::vector<PowerPlant> parse_plant_registry(std::string_view csv_text, const CostTable& costs,
                                             const ScenarioConfig& scenario,
                                             std::string source = "<memory>");

} // namespace elecsim
