#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "elecsim/agents.hpp"
#include "elecsim/cost_table.hpp"
#include "elecsim/repdays.hpp"
#include "elecsim/scenario.hpp"

namespace elecsim {

enum class PlantStatus { Operating, UnderConstruction, Retired };

struct PlantState {
    PowerPlant plant;
    PlantStatus status = PlantStatus::Operating;
    int online_year = 0;
};

struct ActiveCommitment {
    Commitment commitment;
    std::string genco;
    std::size_t plant_index = 0;
    int paid = 0;
};

/// The simulation state for one run. Movable between threads, never shared.
struct World {
    int year = 0;
    std::vector<GenCo> gencos;
    std::vector<PlantState> plants;
    ScenarioConfig scenario;
    RepresentativeYear rep_year;
    std::shared_ptr<const CostTable> costs;
    std::vector<ActiveCommitment> commitments;
    std::uint64_t seed = 0;
    std::vector<std::string> events;

    GenCo& genco(const std::string& id);
};

/// Initialise every registry plant as operating (or under construction when
/// its construction year lies ahead); plants already older than their
/// operating period are retired immediately.
World init_world(const ScenarioConfig& scenario, std::vector<PowerPlant> registry, RepresentativeYear rep_year,
                 std::shared_ptr<const CostTable> costs);

struct InvestmentLogRow {
    int year = 0;
    std::string genco;
    PlantType type = PlantType::CCGT;
    double capacity_mw = 0.0;
    double npv = 0.0;
    bool committed = false;
    int online_year = 0;
};

struct YearResult {
    int year = 0;
    std::map<PlantType, double> energy_mwh;
    std::map<PlantType, double> mix;
    double demand_mwh = 0.0;
    double served_mwh = 0.0;
    double unserved_mwh = 0.0;
    /// (clearing price, hours represented) for each cleared hour.
    std::vector<std::pair<double, double>> prices;
    std::vector<InvestmentLogRow> investments;
    std::map<std::string, double> funds;
    std::vector<std::string> retired;
    std::size_t clearings = 0;

    double market_payments = 0.0;
    double subsidies = 0.0;
    double variable_costs = 0.0;
    double fixed_costs = 0.0;
    double capital_outlays = 0.0;
    double fund_delta = 0.0;

    /// Shares over the grouped technologies; wind merges offshore and onshore.
    std::map<MixCategory, double> category_mix() const;
};

struct StepOptions {
    bool invest = true;
    std::ostream* dispatch_log = nullptr;
};

/// Advance one year: retire, dispatch, settle, invest, commission, advance.
YearResult step_year(World& world, const StepOptions& options = {});

struct SimulationResult {
    std::vector<YearResult> years;
};

/// Simulate `horizon + 1` years from the world's current year. No investment
/// is appraised in the final year since nothing could come online.
SimulationResult run(World& world, int horizon, const std::function<void(const YearResult&)>& on_year = {},
                     std::ostream* dispatch_log = nullptr);

/// Everything needed to start a run, loaded once and copied per run.
struct SimulationBundle {
    ScenarioConfig scenario;
    std::vector<PowerPlant> plants;
    RepresentativeYear rep_year;
    std::shared_ptr<const CostTable> costs;
};

/// Load scenario plus the cost table, registry and representative days it
/// names. Non-empty overrides replace the scenario's paths.
SimulationBundle load_bundle(const std::filesystem::path& scenario_path,
                             const std::filesystem::path& registry_override = {},
                             const std::filesystem::path& repdays_override = {});

/// Run a bundle from start to end year with the given scenario.
SimulationResult simulate(const SimulationBundle& bundle, const ScenarioConfig& scenario,
                          const std::function<void(const YearResult&)>& on_year = {});

void write_mix_header(std::ostream& out);
void write_mix_rows(std::ostream& out, const YearResult& r);
void write_category_mix_header(std::ostream& out);
void write_category_mix_rows(std::ostream& out, const YearResult& r);
void write_funds_header(std::ostream& out);
void write_funds_rows(std::ostream& out, const YearResult& r);
void write_investment_header(std::ostream& out);
void write_investment_rows(std::ostream& out, const YearResult& r);

} // namespace elecsim
