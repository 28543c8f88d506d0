#pragma once

#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "elecsim/cost_table.hpp"
#include "elecsim/plant.hpp"
#include "elecsim/ppdc.hpp"
#include "elecsim/repdays.hpp"
#include "elecsim/scenario.hpp"

namespace elecsim {

/// Draw a GenCo's belief: slope and intercept perturbed independently by
/// normal noise. A zero sigma leaves that parameter untouched.
PPDC sample_belief(const PPDC& base, double sigma_m, double sigma_c, std::mt19937_64& rng);

struct GenCo {
    std::string id;
    double funds = 0.0;
    std::mt19937_64 rng;
};

struct InvestmentCandidate {
    PlantType type = PlantType::CCGT;
    double capacity_mw = 0.0;
    PlantCosts costs;

    /// Years of pre-development plus construction, at least one.
    int lead_years() const;
    int operating_years() const;
    /// Pre-development, construction and infrastructure outlay.
    double capital_cost() const;
};

/// One candidate per plant type: the scenario's menu if given, otherwise the
/// largest capacity among the type's most recent cost rows. Costs resolve at `year`.
std::vector<InvestmentCandidate> build_candidate_menu(const CostTable& table, const ScenarioConfig& scenario,
                                                      int year);

/// Everything an appraisal reads besides the candidate and the belief.
struct AppraisalContext {
    const RepresentativeYear* rep_year = nullptr;
    const ScenarioConfig* scenario = nullptr;
    int decision_year = 0;
};

/// Expected net cash flow per year from the decision year to end of life.
///
/// Capital is spread evenly over the lead years. Each operating year earns,
/// per weighted representative hour, the expected MW sold times the margin of
/// the believed price (plus the nuclear subsidy) over SRMC, less fixed O&M.
/// Intermittent plants sell capacity x capacity factor; dispatchable plants
/// sell full capacity in hours where the believed price covers SRMC.
std::vector<double> expected_cashflow(const InvestmentCandidate& candidate, const PPDC& belief,
                                      const AppraisalContext& context);

struct Appraisal {
    InvestmentCandidate candidate;
    double npv = 0.0;
    double down_payment = 0.0;
};

struct Commitment {
    InvestmentCandidate candidate;
    int decision_year = 0;
    int online_year = 0;
    double installment = 0.0; ///< capital paid in each lead year
    int installments = 0;
    double npv = 0.0;
};

struct InvestmentDecision {
    std::vector<Appraisal> appraisals;
    std::optional<Commitment> commitment;
    /// Set when the best positive-NPV candidate was unaffordable.
    bool blocked_by_funds = false;
};

/// Appraise every candidate and commit to the highest-NPV one when its NPV is
/// positive and funds cover the first capital installment.
InvestmentDecision invest_step(const GenCo& genco, std::span<const InvestmentCandidate> menu, const PPDC& belief,
                               const AppraisalContext& context);

} // namespace elecsim
