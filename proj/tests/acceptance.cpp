// Acceptance run: one PASS/FAIL line per criterion, with timings.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "elecsim/calibrate.hpp"
#include "elecsim/cost_table.hpp"
#include "elecsim/csv.hpp"
#include "elecsim/engine.hpp"
#include "elecsim/ga.hpp"
#include "elecsim/market.hpp"
#include "elecsim/metrics.hpp"
#include "elecsim/npv.hpp"
#include "elecsim/repdays.hpp"
#include "elecsim/synthetic.hpp"
#include "support.hpp"

using namespace elecsim;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... v)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, v...);
    return buf;
}

Verdict hour_count()
{
    double worst = 0.0;
    for (std::uint64_t seed : {1u, 2u}) {
        auto ts = synthetic_hourly(seed == 1 ? 100 : 365, seed);
        auto dm = build_day_matrix(ts);
        for (int k : {1, 2, 4, 8, 16})
            for (auto m : {Representative::Medoid, Representative::Centroid}) {
                auto year = build_representative_year(dm, k, m, seed);
                worst = std::max(worst, std::abs(year.total_hours() - 8760.0));
            }
    }
    return {worst <= 1e-6, fmt("max |hours - 8760| = %.3g", worst)};
}

Verdict metric_zeroes()
{
    auto ts = synthetic_hourly(60, 4);
    auto obs = observed_set(ts);
    const double r = ree_av(obs, obs), n = nrmse_av(obs, obs), c = ce_av(obs, obs);
    Eigen::VectorXd s = ts.values.col(0);
    const double p = pearson(s, s), q = pearson(s, (-s).eval());
    const bool ok = r == 0 && n == 0 && c == 0 && std::abs(p - 1) <= 1e-12 && std::abs(q + 1) <= 1e-12;
    return {ok, fmt("ree %g nrmse %g ce %g, pearson(s,s)-1 %.2g, pearson(s,-s)+1 %.2g", r, n, c, p - 1, q + 1)};
}

Verdict k_trend()
{
    auto ts = synthetic_hourly(730, 2013);
    auto rows = evaluate_k_range(ts, {1, 8}, {Representative::Medoid}, 1);
    const auto& one = rows[0];
    const auto& eight = rows[1];
    const bool ok = eight.ce_av < one.ce_av && eight.nrmse_av < one.nrmse_av && one.ree_av <= eight.ree_av;
    return {ok, fmt("medoid k=1: ce %.4f nrmse %.4f ree %.4f; k=8: ce %.4f nrmse %.4f ree %.4f", one.ce_av,
                    one.nrmse_av, one.ree_av, eight.ce_av, eight.nrmse_av, eight.ree_av)};
}

Verdict step_count()
{
    auto s = testing::basic_scenario(2018, 2018);
    auto gas = testing::plant("g", "g1", PlantType::CCGT, 2000, 2015, testing::costs(0.54, 25, 3));
    auto eight = init_world(s, {gas}, testing::flat_year(1000, 0, 0, 0, 8), testing::small_cost_table());
    auto full = init_world(s, {gas}, testing::flat_year(1000, 0, 0, 0, 365), testing::small_cost_table());
    const auto a = step_year(eight, {.invest = false}).clearings;
    const auto b = step_year(full, {.invest = false}).clearings;
    const double ratio = static_cast<double>(b) / static_cast<double>(a);
    return {a == 192 && b == 8760 && ratio >= 40, fmt("%zu vs %zu clearings, ratio %.3f", a, b, ratio)};
}

Verdict dispatch_properties()
{
    std::mt19937_64 rng(2024);
    // Quarter-MW grid keeps every sum exact in binary.
    std::uniform_int_distribution<int> q(0, 2000), d(0, 16000), n(1, 12), p(0, 40);
    int bad = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        std::vector<Bid> bids(static_cast<std::size_t>(n(rng)));
        for (std::size_t i = 0; i < bids.size(); ++i)
            bids[i] = {"p" + std::to_string(i), 2.5 * p(rng), 0.25 * q(rng)};
        const double lo = 0.25 * d(rng), hi = lo + 0.25 * d(rng);
        auto r = clear_market(bids, lo, 300);
        double total = r.unserved;
        for (std::size_t i = 0; i < bids.size(); ++i) {
            total += r.dispatch[i];
            if (r.dispatch[i] < bids[i].quantity)
                for (std::size_t j = 0; j < bids.size(); ++j)
                    if (bids[j].price > bids[i].price && r.dispatch[j] > 0)
                        ++bad;
        }
        if (total != lo)
            ++bad;
        if (clear_market(bids, hi, 300).clearing_price < r.clearing_price)
            ++bad;
    }
    return {bad == 0, fmt("10000 random stacks, %d violations", bad)};
}

Verdict npv_oracle()
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> flow(-1e8, 1e8), rate(0.0, 0.2);
    std::uniform_int_distribution<int> len(1, 60);
    double worst = 0.0;
    bool sums = true;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> f(static_cast<std::size_t>(len(rng)));
        for (auto& x : f)
            x = flow(rng);
        const double i = rate(rng);
        double brute = 0.0, scale = 0.0;
        for (std::size_t t = 0; t < f.size(); ++t) {
            brute += f[t] / std::pow(1.0 + i, static_cast<double>(t));
            scale += std::abs(f[t]);
        }
        worst = std::max(worst, std::abs(npv<double>(f, i) - brute) / scale);
        sums = sums && npv<double>(f, 0.0) == std::accumulate(f.begin(), f.end(), 0.0);
    }
    return {worst <= 1e-9 && sums, fmt("max relative error %.2g, zero-rate sums exact: %s", worst, sums ? "yes" : "no")};
}

MixShares shares(double wind, double nuclear, double solar, double ccgt, double coal)
{
    return {{MixCategory::Wind, wind},
            {MixCategory::Nuclear, nuclear},
            {MixCategory::Solar, solar},
            {MixCategory::CCGT, ccgt},
            {MixCategory::Coal, coal}};
}

Verdict objectives()
{
    auto a = shares(0.4, 0.2, 0.05, 0.3, 0.05);
    auto f = shares(0.3, 0.2, 0.05, 0.4, 0.05);
    auto off = shares(0.45, 0.25, 0.1, 0.35, 0.1);
    const double v1 = mix_error_validation(f, a);
    const double v2 = mix_error_validation(off, a);
    const double lt = mix_error_longterm({{2018, off}, {2019, off}}, {{2018, a}, {2019, a}});
    const auto len = GenomeLayout::long_term(2018).size();
    auto oracle = [](const MixShares& x, const MixShares& y) {
        double sum = 0.0;
        for (auto [cat, share] : y)
            sum += std::abs(share - x.at(cat));
        return sum / 5.0;
    };
    const bool same = v1 == oracle(f, a) && v2 == oracle(off, a) && lt == oracle(off, a) + oracle(off, a);
    const bool ok = same && std::abs(v1 - 0.04) <= 1e-15 && std::abs(v2 - 0.05) <= 1e-15 &&
                    std::abs(lt - 0.10) <= 1e-15 && len == 37;
    return {ok, fmt("validation %.17g and %.17g, long-term %.17g, genome length %zu", v1, v2, lt, len)};
}

Verdict ga_sanity()
{
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        GAConfig cfg;
        cfg.bounds = GenomeLayout::validation().bounds();
        cfg.seed = seed;
        auto res = ga_run(cfg, [](std::span<const double> g, std::uint64_t) {
            return (g[0] - 0.002) * (g[0] - 0.002) + (g[1] - 35) * (g[1] - 35);
        });
        worst = std::max({worst, std::abs(res.best.genome[0] - 0.002), std::abs(res.best.genome[1] - 35)});
    }
    return {worst <= 1e-3, fmt("5 seeds, worst gene distance from (0.002, 35) = %.3g", worst)};
}

CalibrationProblem toy_problem()
{
    CalibrationProblem p;
    auto& s = p.bundle.scenario;
    s = testing::basic_scenario(2018, 2019, 20, 10, 18);
    s.emission_factor = {{Fuel::Gas, 0.184}, {Fuel::Coal, 0.34}};
    s.gencos = {{"g1", 3e9}, {"g2", 3e9}};
    s.investment_menu = {{PlantType::CCGT, 1200}, {PlantType::Onshore, 500}};
    p.bundle.costs = std::make_shared<const CostTable>(CostTable::parse(
        "type,capacity_mw,year,efficiency,op,pd,cd,pc,cc,ic,fc,vc,inc,conc\n"
        "CCGT,1200,2018,0.54,25,0,1,10000,500000,15100,12200,3,2100,3300\n"
        "Coal,624,2018,0.32,25,0,1,70000,1400000,10000,39600,3,19300,3800\n"
        "Onshore,500,2018,0.0,24,0,1,5000,1100000,300,24000,5,1400,3000\n"));
    auto& t = *p.bundle.costs;
    auto costs = [&](PlantType type) { return t.rows_for(type).front()->costs; };
    auto& rep = p.bundle.rep_year;
    rep = testing::flat_year(0, 0, 0, 0, 2);
    for (int h = 0; h < 24; ++h) {
        rep.values(h, 0) = 22000 + 6000 * std::sin(3.14159265 * h / 24);
        rep.values(h, 2) = 0.25;
        rep.values(24 + h, 0) = 30000 + 8000 * std::sin(3.14159265 * h / 24);
        rep.values(24 + h, 2) = 0.45;
    }
    p.bundle.plants = {testing::plant("coal", "g1", PlantType::Coal, 16000, 2005, costs(PlantType::Coal)),
                       testing::plant("ccgt", "g2", PlantType::CCGT, 12000, 2008, costs(PlantType::CCGT)),
                       testing::plant("wind", "g2", PlantType::Onshore, 6000, 2012, costs(PlantType::Onshore))};
    p.target[2019] = shares(0.12, 0.0, 0.0, 0.48, 0.40);
    return p;
}

Verdict ga_vs_grid()
{
    auto p = toy_problem();
    auto bounds = GenomeLayout::validation().bounds();
    double grid_min = kWorstFitness, grid_max = 0.0;
    for (int i = 0; i < 50; ++i)
        for (int j = 0; j < 50; ++j) {
            const double m = bounds[0].lower + (bounds[0].upper - bounds[0].lower) * i / 49.0;
            const double c = bounds[1].lower + (bounds[1].upper - bounds[1].lower) * j / 49.0;
            const double f = objective_validation(std::vector<double>{m, c}, p, 0);
            grid_min = std::min(grid_min, f);
            grid_max = std::max(grid_max, f);
        }
    GAConfig cfg;
    cfg.bounds = bounds;
    cfg.seed = 1;
    auto res = ga_run(cfg, make_objective(p));
    return {res.best.fitness <= 1.05 * grid_min,
            fmt("ga best %.6g at (%.5f, %.3f), grid min %.6g (grid max %.6g)", res.best.fitness, res.best.genome[0],
                res.best.genome[1], grid_min, grid_max)};
}

Verdict transition()
{
    // Coal leads the merit order until carbon passes ~19 in the third year.
    auto s = testing::basic_scenario(2018, 2025);
    s.emission_factor = {{Fuel::Gas, 0.184}, {Fuel::Coal, 0.34}};
    for (int y = 2018; y <= 2025; ++y) {
        s.carbon_price[y] = 10.0 + 5.0 * (y - 2018);
        s.demand_scale[y] = 1.0 - 0.01 * (y - 2018);
    }
    auto coal = testing::costs(0.35, 40, 3);
    auto gas = testing::costs(0.50, 40, 3);
    const double coal_srmc_2 = srmc(PlantType::Coal, coal, 10, s.carbon_price[2019], 0.34);
    const double gas_srmc_2 = srmc(PlantType::CCGT, gas, 20, s.carbon_price[2019], 0.184);
    const double coal_srmc_3 = srmc(PlantType::Coal, coal, 10, s.carbon_price[2020], 0.34);
    const double gas_srmc_3 = srmc(PlantType::CCGT, gas, 20, s.carbon_price[2020], 0.184);
    auto rep = testing::flat_year(1200, 0, 0, 0, 2);
    rep.values.block(24, 0, 24, 1).setConstant(1400);
    auto w = init_world(s,
                        {testing::plant("coal", "g1", PlantType::Coal, 1000, 2010, coal),
                         testing::plant("gas", "g1", PlantType::CCGT, 700, 2010, gas)},
                        rep, testing::small_cost_table());
    auto res = run(w, 7);
    std::vector<double> c, g;
    for (const auto& y : res.years) {
        c.push_back(y.mix.contains(PlantType::Coal) ? y.mix.at(PlantType::Coal) : 0.0);
        g.push_back(y.mix.contains(PlantType::CCGT) ? y.mix.at(PlantType::CCGT) : 0.0);
    }
    bool ok = coal_srmc_2 < gas_srmc_2 && coal_srmc_3 > gas_srmc_3 && res.years.size() == 8;
    for (std::size_t i = 2; ok && i < c.size(); ++i)
        ok = c[i] < c[i - 1] && g[i] > g[i - 1];
    std::string trace;
    for (std::size_t i = 0; i < c.size(); ++i)
        trace += fmt("%s%.3f", i ? " " : "", c[i]);
    return {ok, "coal share by year " + trace};
}

int cli(std::vector<std::string> args)
{
    std::ostringstream out, err;
    args.insert(args.begin(), {"--log-level", "error"});
    const int code = cli::run(args, out, err);
    if (code != 0)
        std::fprintf(stderr, "%s", err.str().c_str());
    return code;
}

Verdict determinism()
{
    const auto demo = testing::data_dir() / "demo";
    const std::vector<std::string> base{"calibrate",
                                        "validation",
                                        "--scenario",
                                        (demo / "scenario.json").string(),
                                        "--target",
                                        (demo / "target_mix.csv").string(),
                                        "--pop",
                                        "40",
                                        "--gens",
                                        "15",
                                        "--seed",
                                        "5"};
    std::vector<std::filesystem::path> dirs;
    for (const char* name : {"acc-cal-a", "acc-cal-b", "acc-cal-stop"})
        dirs.push_back(testing::scratch_dir(name));
    for (int i = 0; i < 2; ++i) {
        auto args = base;
        args.insert(args.end(), {"--out", dirs[static_cast<std::size_t>(i)].string()});
        if (cli(args) != 0)
            return {false, "calibrate failed"};
    }
    const bool same = testing::read_file(dirs[0] / "generation_log.csv") ==
                      testing::read_file(dirs[1] / "generation_log.csv");
    const int g = 6;
    auto args = base;
    args.insert(args.end(), {"--stop-after", std::to_string(g), "--out", dirs[2].string()});
    if (cli(args) != 0)
        return {false, "stopped calibrate failed"};
    auto log = csv::Table::read(dirs[2] / "generation_log.csv");
    std::set<long> gens;
    for (std::size_t r = 0; r < log.rows(); ++r)
        gens.insert(log.integer(r, 0));
    const bool persisted = gens.size() == static_cast<std::size_t>(g + 1) && log.rows() == 40u * (g + 1);
    return {same && persisted,
            fmt("logs identical: %s; stop after generation %d left %zu generation records", same ? "yes" : "no", g,
                gens.size())};
}

Verdict cost_fidelity()
{
    auto table = CostTable::load(testing::data_dir() / "plant_costs.csv");
    std::size_t mismatches = 0;
    for (const auto& row : table.rows()) {
        auto hit = lookup_plant_costs(table, row.type, row.capacity_mw, row.year);
        if (hit.resolution != CostResolution::Exact || !(hit.costs == row.costs))
            ++mismatches;
    }
    auto again = CostTable::parse(table.to_csv());
    const bool round = std::equal(table.rows().begin(), table.rows().end(), again.rows().begin(), again.rows().end());
    auto mid = lookup_plant_costs(table, PlantType::CCGT, 1200, 1995).costs;
    const double err = std::max(std::abs(mid.construction_cost - (2994246.0 + 2483747.0) / 2),
                                std::abs(mid.predev_cost - (59884.0 + 49674.0) / 2));
    return {mismatches == 0 && round && err <= 1e-9,
            fmt("%zu rows, %zu lookup mismatches, csv round trip %s, midpoint error %.2g", table.rows().size(),
                mismatches, round ? "exact" : "differs", err)};
}

struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Verdict()> check;
};

} // namespace

int main(int argc, char** argv)
{
    // --allow-fail N reports criterion N as usual but keeps it out of the exit code.
    std::set<int> allowed;
    for (int i = 1; i + 1 < argc; i += 2)
        if (std::string(argv[i]) == "--allow-fail")
            allowed.insert(std::stoi(argv[i + 1]));

    const std::vector<Criterion> criteria{
        {1, "hour-count identity", 10, hour_count},
        {2, "metric zeroes and identities", 1, metric_zeroes},
        {3, "k-sweep trend", 60, k_trend},
        {4, "step-count reduction", 1, step_count},
        {5, "dispatch conservation and merit order", 30, dispatch_properties},
        {6, "NPV against brute force", 1, npv_oracle},
        {7, "calibration objectives", 1, objectives},
        {8, "GA on an analytic bowl", 30, ga_sanity},
        {9, "GA against grid search", 600, ga_vs_grid},
        {10, "coal to gas transition", 120, transition},
        {11, "calibrate determinism and persistence", 300, determinism},
        {12, "cost table fidelity", 1, cost_fidelity},
    };
    int failed = 0, known = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.check();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool ok = v.pass && s < c.limit_s;
        failed += ok ? 0 : 1;
        std::printf("%s %2d %-40s %8.3f s (limit %g s)  %s%s\n", ok ? "PASS" : "FAIL", c.id, c.name, s, c.limit_s,
                    v.detail.c_str(), !ok && allowed.contains(c.id) ? "  [known failure]" : "");
        if (!ok && allowed.contains(c.id))
            ++known;
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == known ? 0 : 1;
}
