#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "elecsim/engine.hpp"
#include "elecsim/ga.hpp"

namespace elecsim {

using MixShares = std::map<MixCategory, double>;
using MixTrajectory = std::map<int, MixShares>;

/// Mean absolute share error over the five grouped technologies.
double mix_error_validation(const MixShares& simulated, const MixShares& target);

/// Sum over years of the per-year mix error. Both trajectories must cover the
/// same years; `exclude_first_year` drops the earliest one.
double mix_error_longterm(const MixTrajectory& simulated, const MixTrajectory& target,
                          bool exclude_first_year = false);

/// `year,type,share` with type one of wind, nuclear, solar, CCGT, coal.
MixTrajectory load_target_mix(const std::filesystem::path& path);
MixTrajectory parse_target_mix(std::string_view csv_text, std::string source = "<memory>");

MixTrajectory category_trajectory(const SimulationResult& result);

/// How genes map onto simulation parameters.
///
/// Validation: [m, c]. Long-term: [m_y ... (years), c_y ... (years), sigma_m,
/// sigma_c, nuclear subsidy], one curve per investment year from `first_year`.
struct GenomeLayout {
    enum class Kind { Validation, LongTerm };

    Kind kind = Kind::Validation;
    int first_year = 0;
    int years = 1;

    static GenomeLayout validation();
    static GenomeLayout long_term(int first_year, int years = 17);

    std::size_t size() const;
    std::vector<GeneBounds> bounds() const;
    /// Copy of `base` with the genome's curves and parameters applied.
    ScenarioConfig apply(const ScenarioConfig& base, std::span<const double> genome) const;
};

struct CalibrationProblem {
    SimulationBundle bundle;
    MixTrajectory target;
    GenomeLayout layout;
    bool exclude_first_year = false;
};

/// Check the target covers what the layout's objective needs; throws InputError.
void validate_problem(const CalibrationProblem& problem);

/// Final-year mix error of a run with the genome applied. A failing simulation
/// scores kWorstFitness.
double objective_validation(std::span<const double> genome, const CalibrationProblem& problem,
                            std::uint64_t eval_seed);

/// Summed per-year mix error across the run.
double objective_longterm(std::span<const double> genome, const CalibrationProblem& problem,
                          std::uint64_t eval_seed);

Objective make_objective(const CalibrationProblem& problem);

struct ForecastMetrics {
    double mae = 0.0;
    double rmse = 0.0;
    double naive_mae = 0.0;
    std::optional<double> mase; ///< absent when the naive forecast is perfect
};

/// Compare a simulated trajectory with observations over the same years; the
/// naive forecast repeats `baseline` (the last value known before the forecast).
ForecastMetrics forecast_error_metrics(const std::map<int, double>& simulated,
                                       const std::map<int, double>& observed, double baseline);

/// Trajectories by type name: `year,type,share`.
using TypedTrajectory = std::map<std::string, std::map<int, double>>;
TypedTrajectory load_trajectory(const std::filesystem::path& path);
TypedTrajectory parse_trajectory(std::string_view csv_text, std::string source = "<memory>");

/// Metrics per type over the observed years after `baseline_year`.
std::map<std::string, ForecastMetrics> forecast_metrics_by_type(const TypedTrajectory& simulated,
                                                                const TypedTrajectory& observed,
                                                                int baseline_year);

} // namespace elecsim
