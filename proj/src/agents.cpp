#include "elecsim/agents.hpp"

#include <algorithm>
#include <cmath>

#include "elecsim/error.hpp"
#include "elecsim/market.hpp"
#include "elecsim/npv.hpp"

namespace elecsim {

PPDC sample_belief(const PPDC& base, double sigma_m, double sigma_c, std::mt19937_64& rng)
{
    if (sigma_m < 0.0 || sigma_c < 0.0)
        throw InputError("belief standard deviations must be non-negative");
    PPDC out = base;
    if (sigma_m > 0.0)
        out.m = std::normal_distribution<double>(base.m, sigma_m)(rng);
    if (sigma_c > 0.0)
        out.c = std::normal_distribution<double>(base.c, sigma_c)(rng);
    return out;
}

int InvestmentCandidate::lead_years() const
{
    const auto lead = std::lround(costs.predev_period + costs.construction_period);
    return static_cast<int>(std::max(1L, lead));
}

int InvestmentCandidate::operating_years() const
{
    return static_cast<int>(std::lround(costs.operating_period));
}

double InvestmentCandidate::capital_cost() const
{
    return (costs.construction_cost + costs.predev_cost) * capacity_mw + costs.infrastructure_cost;
}

std::vector<InvestmentCandidate> build_candidate_menu(const CostTable& table, const ScenarioConfig& scenario,
                                                      int year)
{
    std::vector<InvestmentCandidate> menu;
    if (!scenario.investment_menu.empty()) {
        for (const auto& [type, cap] : scenario.investment_menu)
            menu.push_back({type, cap, lookup_plant_costs(table, type, cap, year).costs});
        return menu;
    }
    for (auto type : kAllPlantTypes) {
        auto rows = table.rows_for(type);
        if (rows.empty())
            continue;
        int latest = rows.front()->year;
        for (const auto* r : rows)
            latest = std::max(latest, r->year);
        double cap = 0.0;
        for (const auto* r : rows)
            if (r->year == latest)
                cap = std::max(cap, r->capacity_mw);
        menu.push_back({type, cap, lookup_plant_costs(table, type, cap, year).costs});
    }
    return menu;
}

std::vector<double> expected_cashflow(const InvestmentCandidate& candidate, const PPDC& belief,
                                      const AppraisalContext& context)
{
    if (!context.rep_year || !context.scenario)
        throw InputError("appraisal context is incomplete");
    const auto& year = *context.rep_year;
    const auto& scenario = *context.scenario;
    if (context.decision_year < scenario.start_year || context.decision_year > scenario.end_year)
        throw InputError("decision year " + std::to_string(context.decision_year) + " lies outside the scenario");

    const int lead = candidate.lead_years();
    const int life = candidate.operating_years();
    std::vector<double> flows(static_cast<std::size_t>(lead + life), 0.0);
    const double installment = candidate.capital_cost() / lead;
    for (int t = 0; t < lead; ++t)
        flows[static_cast<std::size_t>(t)] = -installment;

    const auto fuel = fuel_of(candidate.type);
    const auto cf_series = capacity_factor_series(candidate.type);
    const double subsidy = candidate.type == PlantType::Nuclear ? scenario.nuclear_subsidy : 0.0;
    const double fixed = candidate.costs.fixed_om * candidate.capacity_mw;

    for (int t = lead; t < lead + life; ++t) {
        const int calendar = std::min(context.decision_year + t, scenario.end_year);
        const double fuel_price = fuel ? scenario.fuel_price_at(*fuel, calendar) : 0.0;
        const double ef = fuel ? scenario.emission_factor_of(*fuel) : 0.0;
        const double cost = srmc(candidate.type, candidate.costs, fuel_price, scenario.carbon_price_at(calendar), ef);
        const double scale = scenario.demand_scale_at(calendar);

        double margin = 0.0;
        for (Eigen::Index h = 0; h < year.values.rows(); ++h) {
            const double price = belief.price(year.values(h, static_cast<int>(Series::Demand)) * scale);
            double mw = 0.0;
            if (cf_series)
                mw = candidate.capacity_mw * year.values(h, static_cast<int>(*cf_series));
            else if (price >= cost)
                mw = candidate.capacity_mw * scenario.availability;
            margin += year.hour_weights(h) * mw * (price + subsidy - cost);
        }
        flows[static_cast<std::size_t>(t)] = margin - fixed;
    }
    return flows;
}

InvestmentDecision invest_step(const GenCo& genco, std::span<const InvestmentCandidate> menu, const PPDC& belief,
                               const AppraisalContext& context)
{
    InvestmentDecision decision;
    const double rate = context.scenario->discount_rate;
    for (const auto& c : menu) {
        const auto flows = expected_cashflow(c, belief, context);
        decision.appraisals.push_back({c, npv<double>(flows, rate), c.capital_cost() / c.lead_years()});
    }
    const Appraisal* best = nullptr;
    for (const auto& a : decision.appraisals)
        if (!best || a.npv > best->npv)
            best = &a;
    if (!best || !(best->npv > 0.0))
        return decision;
    if (genco.funds < best->down_payment) {
        decision.blocked_by_funds = true;
        return decision;
    }
    const int lead = best->candidate.lead_years();
    decision.commitment = Commitment{best->candidate,
                                     context.decision_year,
                                     context.decision_year + lead,
                                     best->down_payment,
                                     lead,
                                     best->npv};
    return decision;
}

} // namespace elecsim
