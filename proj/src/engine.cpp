#include "elecsim/engine.hpp"

#include <algorithm>

#include "elecsim/csv.hpp"
#include "elecsim/error.hpp"
#include "elecsim/market.hpp"
#include "elecsim/rng.hpp"

namespace elecsim {

GenCo& World::genco(const std::string& id)
{
    for (auto& g : gencos)
        if (g.id == id)
            return g;
    throw InputError("unknown GenCo '" + id + "'");
}

World init_world(const ScenarioConfig& scenario, std::vector<PowerPlant> registry, RepresentativeYear rep_year,
                 std::shared_ptr<const CostTable> costs)
{
    scenario.validate();
    if (rep_year.days() == 0)
        throw InputError("representative year has no days");
    World w;
    w.year = scenario.start_year;
    w.scenario = scenario;
    w.rep_year = std::move(rep_year);
    w.costs = std::move(costs);
    w.seed = scenario.rng_seed;

    std::uint64_t index = 0;
    for (const auto& [id, funds] : scenario.gencos)
        w.gencos.push_back({id, funds, make_rng(w.seed, {0x67656e636fULL, index++})});

    for (auto& p : registry) {
        if (!scenario.gencos.contains(p.owner))
            throw InputError("plant '" + p.id + "' references unknown owner '" + p.owner + "'");
        if (auto fuel = fuel_of(p.type); fuel && !scenario.has_fuel(*fuel))
            throw InputError("scenario has no " + std::string(to_string(*fuel)) + " price for plant '" + p.id + "'");
        PlantState s{std::move(p), PlantStatus::Operating, 0};
        s.online_year = s.plant.construction_year;
        if (s.plant.construction_year > w.year) {
            s.status = PlantStatus::UnderConstruction;
        } else if (s.plant.age(w.year) > s.plant.operating_years()) {
            s.status = PlantStatus::Retired;
            w.events.push_back("retired at init: " + s.plant.id + " (age " + std::to_string(s.plant.age(w.year)) +
                               " exceeds operating period " + std::to_string(s.plant.operating_years()) + ")");
        }
        w.plants.push_back(std::move(s));
    }
    return w;
}

std::map<MixCategory, double> YearResult::category_mix() const
{
    std::map<MixCategory, double> out;
    for (auto c : kMixCategories)
        out[c] = 0.0;
    for (const auto& [type, share] : mix)
        if (auto c = mix_category_of(type))
            out[*c] += share;
    return out;
}

YearResult step_year(World& world, const StepOptions& options)
{
    const auto& sc = world.scenario;
    const int year = world.year;
    if (year < sc.start_year || year > sc.end_year)
        throw InputError("scenario does not cover year " + std::to_string(year));

    YearResult result;
    result.year = year;
    std::map<std::string, double> start_funds;
    for (const auto& g : world.gencos)
        start_funds[g.id] = g.funds;

    // 1. Retirements.
    for (auto& ps : world.plants) {
        if (ps.status != PlantStatus::Operating)
            continue;
        bool scheduled = std::any_of(sc.scheduled_retirements.begin(), sc.scheduled_retirements.end(),
                                     [&](const ScheduledRetirement& r) { return r.plant_id == ps.plant.id && r.year == year; });
        if (scheduled || ps.plant.age(year) >= ps.plant.operating_years()) {
            ps.status = PlantStatus::Retired;
            result.retired.push_back(ps.plant.id);
        }
    }

    // 2. Dispatch every representative day.
    const double carbon = sc.carbon_price_at(year);
    std::vector<std::size_t> active;
    std::vector<DispatchUnit> units;
    for (std::size_t i = 0; i < world.plants.size(); ++i) {
        const auto& ps = world.plants[i];
        if (ps.status != PlantStatus::Operating)
            continue;
        const auto fuel = fuel_of(ps.plant.type);
        const double price = fuel ? sc.fuel_price_at(*fuel, year) : 0.0;
        const double ef = fuel ? sc.emission_factor_of(*fuel) : 0.0;
        active.push_back(i);
        units.push_back({ps.plant.id, ps.plant.type, ps.plant.capacity_mw,
                         srmc(ps.plant.type, ps.plant.costs, price, carbon, ef), sc.availability});
    }

    std::vector<double> energy(units.size(), 0.0), revenue(units.size(), 0.0), subsidy(units.size(), 0.0);
    const double scale = sc.demand_scale_at(year);
    for (Eigen::Index d = 0; d < world.rep_year.days(); ++d) {
        const double weight = world.rep_year.day_weights(d);
        const auto day = dispatch_day(units, world.rep_year.day(d), weight, scale, sc.price_cap, sc.nuclear_subsidy);
        for (std::size_t u = 0; u < units.size(); ++u) {
            energy[u] += day.energy_mwh[u];
            revenue[u] += day.revenue[u];
            subsidy[u] += day.subsidy[u];
        }
        result.served_mwh += day.served_mwh;
        result.unserved_mwh += day.unserved_mwh;
        for (int h = 0; h < kHoursPerDay; ++h) {
            result.prices.emplace_back(day.hours[static_cast<std::size_t>(h)].clearing_price, weight * kDaysPerYear);
            result.demand_mwh += day.demand[static_cast<std::size_t>(h)] * weight * kDaysPerYear;
        }
        result.clearings += kHoursPerDay;
        if (options.dispatch_log)
            write_dispatch_log(*options.dispatch_log, year, static_cast<int>(d), weight, units, day);
    }

    // 3. Settle accounts.
    for (std::size_t u = 0; u < units.size(); ++u) {
        const auto& plant = world.plants[active[u]].plant;
        const double variable = energy[u] * units[u].srmc;
        const double fixed = plant.costs.fixed_om * plant.capacity_mw;
        world.genco(plant.owner).funds += revenue[u] + subsidy[u] - variable - fixed;
        result.energy_mwh[plant.type] += energy[u];
        result.market_payments += revenue[u];
        result.subsidies += subsidy[u];
        result.variable_costs += variable;
        result.fixed_costs += fixed;
    }
    for (auto& ac : world.commitments) {
        if (ac.paid >= ac.commitment.installments || ac.commitment.decision_year >= year)
            continue;
        world.genco(ac.genco).funds -= ac.commitment.installment;
        result.capital_outlays += ac.commitment.installment;
        ++ac.paid;
    }

    // 4. Investment.
    if (options.invest) {
        const auto menu = build_candidate_menu(*world.costs, sc, year);
        const AppraisalContext ctx{&world.rep_year, &sc, year};
        for (auto& g : world.gencos) {
            const PPDC belief = sample_belief(sc.ppdc_at(year), sc.sigma_m, sc.sigma_c, g.rng);
            const auto decision = invest_step(g, menu, belief, ctx);
            const PlantType chosen_type = decision.commitment ? decision.commitment->candidate.type : PlantType::CCGT;
            for (const auto& a : decision.appraisals) {
                const bool committed = decision.commitment && a.candidate.type == chosen_type;
                result.investments.push_back({year, g.id, a.candidate.type, a.candidate.capacity_mw, a.npv, committed,
                                              committed ? decision.commitment->online_year : 0});
            }
            if (decision.blocked_by_funds)
                world.events.push_back(std::to_string(year) + ": " + g.id + " could not fund its best candidate");
            if (!decision.commitment)
                continue;
            const auto& c = *decision.commitment;
            PowerPlant p;
            p.id = g.id + "-" + std::string(to_string(c.candidate.type)) + "-" + std::to_string(year);
            p.owner = g.id;
            p.type = c.candidate.type;
            p.capacity_mw = c.candidate.capacity_mw;
            p.construction_year = c.online_year;
            p.costs = c.candidate.costs;
            world.plants.push_back({std::move(p), PlantStatus::UnderConstruction, c.online_year});
            g.funds -= c.installment;
            result.capital_outlays += c.installment;
            world.commitments.push_back({c, g.id, world.plants.size() - 1, 1});
        }
    }

    // 5. Commission plants due next year.
    for (auto& ps : world.plants)
        if (ps.status == PlantStatus::UnderConstruction && ps.online_year <= year + 1)
            ps.status = PlantStatus::Operating;

    // 6. Advance.
    world.year = year + 1;
    for (auto& [type, e] : result.energy_mwh)
        result.mix[type] = result.served_mwh > 0.0 ? e / result.served_mwh : 0.0;
    for (const auto& g : world.gencos) {
        result.funds[g.id] = g.funds;
        result.fund_delta += g.funds - start_funds[g.id];
    }
    return result;
}

SimulationResult run(World& world, int horizon, const std::function<void(const YearResult&)>& on_year,
                     std::ostream* dispatch_log)
{
    if (horizon < 0)
        throw InputError("horizon must be non-negative");
    if (world.year + horizon > world.scenario.end_year)
        throw InputError("horizon runs past the scenario end year " + std::to_string(world.scenario.end_year));
    SimulationResult out;
    for (int i = 0; i <= horizon; ++i) {
        StepOptions opts;
        opts.invest = i < horizon;
        opts.dispatch_log = dispatch_log;
        out.years.push_back(step_year(world, opts));
        if (on_year)
            on_year(out.years.back());
    }
    return out;
}

SimulationBundle load_bundle(const std::filesystem::path& scenario_path, const std::filesystem::path& registry_override,
                             const std::filesystem::path& repdays_override)
{
    SimulationBundle b;
    b.scenario = load_scenario(scenario_path);
    if (b.scenario.cost_table.empty())
        throw InputError(scenario_path.string() + ": scenario must name a cost_table");
    b.costs = std::make_shared<const CostTable>(CostTable::load(b.scenario.cost_table));
    const auto registry = registry_override.empty() ? b.scenario.registry : registry_override;
    const auto repdays = repdays_override.empty() ? b.scenario.repdays : repdays_override;
    if (registry.empty())
        throw InputError("no plant registry given (flag or scenario 'registry')");
    if (repdays.empty())
        throw InputError("no representative days given (flag or scenario 'repdays')");
    b.plants = load_plant_registry(registry, *b.costs, b.scenario);
    b.rep_year = load_representative_days(repdays);
    return b;
}

SimulationResult simulate(const SimulationBundle& bundle, const ScenarioConfig& scenario,
                          const std::function<void(const YearResult&)>& on_year)
{
    auto world = init_world(scenario, bundle.plants, bundle.rep_year, bundle.costs);
    return run(world, scenario.end_year - scenario.start_year, on_year);
}

void write_mix_header(std::ostream& out) { out << "year,type,energy_mwh,share\n"; }

void write_mix_rows(std::ostream& out, const YearResult& r)
{
    for (const auto& [type, e] : r.energy_mwh)
        out << r.year << ',' << to_string(type) << ',' << csv::format_number(e) << ','
            << csv::format_number(r.mix.at(type)) << '\n';
}

void write_category_mix_header(std::ostream& out) { out << "year,type,share\n"; }

void write_category_mix_rows(std::ostream& out, const YearResult& r)
{
    for (const auto& [c, share] : r.category_mix())
        out << r.year << ',' << to_string(c) << ',' << csv::format_number(share) << '\n';
}

void write_funds_header(std::ostream& out) { out << "year,genco_id,funds\n"; }

void write_funds_rows(std::ostream& out, const YearResult& r)
{
    for (const auto& [id, f] : r.funds)
        out << r.year << ',' << id << ',' << csv::format_number(f) << '\n';
}

void write_investment_header(std::ostream& out)
{
    out << "year,genco_id,type,capacity_mw,npv,committed,online_year\n";
}

void write_investment_rows(std::ostream& out, const YearResult& r)
{
    for (const auto& i : r.investments)
        out << i.year << ',' << i.genco << ',' << to_string(i.type) << ',' << csv::format_number(i.capacity_mw) << ','
            << csv::format_number(i.npv) << ',' << (i.committed ? 1 : 0) << ',' << i.online_year << '\n';
}

} // namespace elecsim
