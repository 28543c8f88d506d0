#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "elecsim/engine.hpp"
#include "elecsim/repdays.hpp"
#include "elecsim/scenario.hpp"
#include "elecsim/timeseries.hpp"

namespace testing {

inline std::filesystem::path data_dir()
{
    return ELECSIM_DATA_DIR;
}

inline std::string read_file(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& text)
{
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name)
{
    auto dir = std::filesystem::temp_directory_path() / ("elecsim-test-" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

/// Representative year of `days` identical days with flat series.
inline elecsim::RepresentativeYear flat_year(double demand, double solar, double onshore, double offshore, int days = 1)
{
    elecsim::DayProfile d;
    d.col(0).setConstant(demand);
    d.col(1).setConstant(solar);
    d.col(2).setConstant(onshore);
    d.col(3).setConstant(offshore);
    std::vector<elecsim::DayProfile> profiles(static_cast<std::size_t>(days), d);
    return elecsim::assemble_year(profiles, Eigen::VectorXd::Constant(days, 1.0 / days));
}

/// Costs with every timing/cost field chosen by the caller; the rest zero.
inline elecsim::PlantCosts costs(double eta, double op, double vc, double fc = 0.0, double cc = 0.0,
                                 double pd = 0.0, double cd = 0.0)
{
    elecsim::PlantCosts c;
    c.efficiency = eta;
    c.operating_period = op;
    c.variable_om = vc;
    c.fixed_om = fc;
    c.construction_cost = cc;
    c.predev_period = pd;
    c.construction_period = cd;
    return c;
}

inline elecsim::PowerPlant plant(std::string id, std::string owner, elecsim::PlantType type, double mw, int year,
                                 elecsim::PlantCosts c)
{
    elecsim::PowerPlant p;
    p.id = std::move(id);
    p.owner = std::move(owner);
    p.type = type;
    p.capacity_mw = mw;
    p.construction_year = year;
    p.costs = c;
    return p;
}

/// Scenario covering [start, end] with flat fuel/carbon prices and one GenCo.
inline elecsim::ScenarioConfig basic_scenario(int start, int end, double gas = 20.0, double coal = 10.0,
                                              double carbon = 0.0)
{
    elecsim::ScenarioConfig s;
    s.start_year = start;
    s.end_year = end;
    for (int y = start; y <= end; ++y) {
        s.fuel_price[elecsim::Fuel::Gas][y] = gas;
        s.fuel_price[elecsim::Fuel::Coal][y] = coal;
        s.fuel_price[elecsim::Fuel::Uranium][y] = 5.0;
        s.fuel_price[elecsim::Fuel::Diesel][y] = 40.0;
        s.carbon_price[y] = carbon;
    }
    s.gencos["g1"] = 1e9;
    s.ppdc = {0.0, 0.0};
    return s;
}

/// A small cost table covering the types used by engine tests.
inline std::shared_ptr<const elecsim::CostTable> small_cost_table()
{
    return std::make_shared<const elecsim::CostTable>(elecsim::CostTable::parse(
        "type,capacity_mw,year,efficiency,op,pd,cd,pc,cc,ic,fc,vc,inc,conc\n"
        "CCGT,1200,2018,0.54,25,3,3,10000,500000,15100,12200,3,2100,3300\n"
        "Coal,624,2018,0.32,25,5,5,70000,4200000,10000,79600,3,19300,3800\n"
        "Nuclear,3300,2018,1.0,60,5,8,240000,4100000,11500,72900,5,10000,500\n"
        "Onshore,20,2018,0.0,24,4,2,5000,1100000,300,24000,5,1400,3000\n"
        "Offshore,844,2018,0.0,22,5,3,5000,2000000,300,40000,3,3300,3000\n"
        "PV,16,2018,0.0,25,1,0,5000,400000,300,9000,0,2000,2000\n"));
}

} // namespace testing
