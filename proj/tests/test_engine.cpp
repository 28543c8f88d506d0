#include <doctest.h>

#include <numeric>

#include "elecsim/engine.hpp"
#include "elecsim/error.hpp"
#include "support.hpp"

using namespace elecsim;
using testing::plant;

namespace {

const auto kNuclear = testing::costs(1.0, 60, 5, 70000);
const auto kCoal = testing::costs(0.32, 25, 3, 40000);
const auto kGas = testing::costs(0.54, 25, 3, 12000);

double coal_energy(const YearResult& r)
{
    auto it = r.energy_mwh.find(PlantType::Coal);
    return it == r.energy_mwh.end() ? 0.0 : it->second;
}

} // namespace

TEST_CASE("empty registry leaves all demand unserved")
{
    auto s = testing::basic_scenario(2018, 2018);
    auto w = init_world(s, {}, testing::flat_year(1000, 0, 0, 0), testing::small_cost_table());
    auto r = step_year(w, {.invest = false});
    CHECK(r.served_mwh == 0);
    CHECK(r.unserved_mwh == doctest::Approx(1000.0 * 8760));
    CHECK(r.mix.empty());
    CHECK(w.year == 2019);
}

TEST_CASE("plants past their operating period retire at start")
{
    auto s = testing::basic_scenario(2018, 2018);
    std::vector<PowerPlant> reg{plant("old", "g1", PlantType::Coal, 600, 1980, kCoal),
                                plant("new", "g1", PlantType::Coal, 600, 2010, kCoal),
                                plant("future", "g1", PlantType::Coal, 600, 2020, kCoal)};
    auto w = init_world(s, reg, testing::flat_year(500, 0, 0, 0), testing::small_cost_table());
    CHECK(w.plants[0].status == PlantStatus::Retired);
    CHECK(w.plants[1].status == PlantStatus::Operating);
    CHECK(w.plants[2].status == PlantStatus::UnderConstruction);
    REQUIRE(w.events.size() == 1);
    CHECK(w.events[0].find("old") != std::string::npos);
}

TEST_CASE("one nuclear plant covering demand is the whole mix")
{
    auto s = testing::basic_scenario(2018, 2018);
    auto w = init_world(s, {plant("n", "g1", PlantType::Nuclear, 3300, 2000, kNuclear)},
                        testing::flat_year(3000, 0, 0, 0), testing::small_cost_table());
    auto r = step_year(w, {.invest = false});
    CHECK(r.mix.size() == 1);
    CHECK(r.mix.at(PlantType::Nuclear) == 1.0);
    CHECK(r.category_mix().at(MixCategory::Nuclear) == 1.0);
    CHECK(r.unserved_mwh == 0);
}

TEST_CASE("scheduled retirements cut coal output")
{
    auto s = testing::basic_scenario(2013, 2018);
    s.scheduled_retirements = {{"c1", 2016}, {"c2", 2016}, {"c3", 2016}};
    std::vector<PowerPlant> reg{plant("c1", "g1", PlantType::Coal, 500, 2000, kCoal),
                                plant("c2", "g1", PlantType::Coal, 500, 2000, kCoal),
                                plant("c3", "g1", PlantType::Coal, 500, 2000, kCoal),
                                plant("c4", "g1", PlantType::Coal, 500, 2000, kCoal),
                                plant("g", "g1", PlantType::CCGT, 2000, 2005, kGas)};
    auto w = init_world(s, reg, testing::flat_year(2500, 0, 0, 0), testing::small_cost_table());
    std::vector<YearResult> years;
    for (int y = 2013; y <= 2016; ++y)
        years.push_back(step_year(w, {.invest = false}));
    CHECK(coal_energy(years[3]) < coal_energy(years[2]));
    CHECK(years[3].retired.size() == 3);
    for (const auto& ps : w.plants)
        if (ps.status == PlantStatus::Retired)
            CHECK(ps.plant.id != "c4");
}

TEST_CASE("run length and investment years")
{
    auto s = testing::basic_scenario(2018, 2035);
    s.ppdc = {0.0, 60.0};
    auto reg = std::vector<PowerPlant>{plant("g", "g1", PlantType::CCGT, 2000, 2015, kGas)};
    auto year = testing::flat_year(1500, 0.1, 0.3, 0.4);

    auto w0 = init_world(s, reg, year, testing::small_cost_table());
    CHECK(run(w0, 0).years.size() == 1);

    auto w = init_world(s, reg, year, testing::small_cost_table());
    auto res = run(w, 17);
    REQUIRE(res.years.size() == 18);
    int appraisal_years = 0;
    for (const auto& r : res.years)
        appraisal_years += r.investments.empty() ? 0 : 1;
    CHECK(appraisal_years == 17);
    CHECK(res.years.back().investments.empty());

    auto w1 = init_world(testing::basic_scenario(2013, 2018), reg, year, testing::small_cost_table());
    CHECK(run(w1, 5).years.size() == 6);
    auto w2 = init_world(testing::basic_scenario(2013, 2018), reg, year, testing::small_cost_table());
    CHECK_THROWS_AS(run(w2, 6), InputError);
}

TEST_CASE("accounts balance and mixes sum to one")
{
    auto s = testing::basic_scenario(2018, 2025, 20, 10, 30);
    s.emission_factor = {{Fuel::Gas, 0.184}, {Fuel::Coal, 0.34}};
    s.ppdc = {0.02, 20.0};
    s.nuclear_subsidy = 10;
    s.gencos = {{"a", 5e8}, {"b", 2e9}};
    std::vector<PowerPlant> reg{plant("n", "a", PlantType::Nuclear, 800, 2000, kNuclear),
                                plant("c", "b", PlantType::Coal, 600, 2000, kCoal),
                                plant("g", "b", PlantType::CCGT, 900, 2010, kGas)};
    auto w = init_world(s, reg, testing::flat_year(2000, 0.2, 0.3, 0.4, 2), testing::small_cost_table());
    auto res = run(w, 7);
    bool invested = false;
    for (const auto& r : res.years) {
        double share = 0;
        for (const auto& [t, v] : r.mix) {
            CHECK(v >= 0);
            share += v;
        }
        if (r.served_mwh > 0)
            CHECK(share == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(r.served_mwh + r.unserved_mwh == doctest::Approx(r.demand_mwh).epsilon(1e-12));
        const double flows = r.market_payments + r.subsidies - r.variable_costs - r.fixed_costs - r.capital_outlays;
        CHECK(r.fund_delta == doctest::Approx(flows).epsilon(1e-9).scale(1e6));
        for (const auto& i : r.investments)
            invested = invested || i.committed;
    }
    CHECK(invested);
    // Every plant has exactly one status and only operating ones produced.
    for (const auto& ps : w.plants)
        CHECK((ps.status == PlantStatus::Operating || ps.status == PlantStatus::Retired ||
               ps.status == PlantStatus::UnderConstruction));
}

TEST_CASE("clearings per year follow the representative day count")
{
    auto s = testing::basic_scenario(2018, 2018);
    auto w = init_world(s, {plant("g", "g1", PlantType::CCGT, 2000, 2015, kGas)},
                        testing::flat_year(1000, 0, 0, 0, 8), testing::small_cost_table());
    CHECK(step_year(w, {.invest = false}).clearings == 192);
}

TEST_CASE("runs are reproducible from the scenario seed")
{
    auto s = testing::basic_scenario(2018, 2024);
    s.ppdc = {0.02, 20.0};
    s.sigma_c = 5.0;
    s.sigma_m = 0.001;
    s.gencos = {{"a", 1e9}, {"b", 1e9}, {"c", 1e9}};
    std::vector<PowerPlant> reg{plant("g", "a", PlantType::CCGT, 900, 2010, kGas)};
    auto year = testing::flat_year(1500, 0.2, 0.3, 0.4);

    auto once = [&](std::uint64_t seed) {
        auto sc = s;
        sc.rng_seed = seed;
        auto w = init_world(sc, reg, year, testing::small_cost_table());
        std::ostringstream out;
        for (const auto& r : run(w, 6).years)
            write_investment_rows(out, r);
        return out.str();
    };
    CHECK(once(5) == once(5));
    CHECK(once(5) != once(6));
}

TEST_CASE("demo bundle loads and simulates")
{
    auto bundle = load_bundle(testing::data_dir() / "demo" / "scenario.json");
    CHECK(bundle.plants.size() == 11);
    CHECK(bundle.rep_year.days() == 8);
    auto res = simulate(bundle, bundle.scenario);
    CHECK(res.years.size() == static_cast<std::size_t>(bundle.scenario.years()));
    CHECK_THROWS_AS(load_bundle(testing::data_dir() / "demo" / "missing.json"), InputError);
}
