#include "elecsim/calibrate.hpp"

#include <cmath>
#include <fstream>

#include "elecsim/csv.hpp"
#include "elecsim/error.hpp"

namespace elecsim {

double mix_error_validation(const MixShares& simulated, const MixShares& target)
{
    double total = 0.0;
    for (auto c : kMixCategories) {
        auto f = simulated.find(c);
        auto a = target.find(c);
        if (f == simulated.end() || a == target.end())
            throw InputError("mix is missing type " + std::string(to_string(c)));
        total += std::abs(a->second - f->second);
    }
    return total / static_cast<double>(kMixCategories.size());
}

double mix_error_longterm(const MixTrajectory& simulated, const MixTrajectory& target, bool exclude_first_year)
{
    if (simulated.size() != target.size())
        throw InputError("simulated and target trajectories cover different years");
    for (auto s = simulated.begin(), t = target.begin(); s != simulated.end(); ++s, ++t)
        if (s->first != t->first)
            throw InputError("trajectory year mismatch: " + std::to_string(s->first) + " vs " +
                             std::to_string(t->first));
    double total = 0.0;
    bool first = true;
    for (const auto& [year, shares] : simulated) {
        if (first && exclude_first_year) {
            first = false;
            continue;
        }
        first = false;
        total += mix_error_validation(shares, target.at(year));
    }
    return total;
}

MixTrajectory parse_target_mix(std::string_view csv_text, std::string source)
{
    auto t = csv::Table::parse(csv_text, std::move(source));
    const auto c_year = t.column("year"), c_type = t.column("type"), c_share = t.column("share");
    MixTrajectory out;
    for (std::size_t r = 0; r < t.rows(); ++r) {
        auto cat = parse_mix_category(t.cell(r, c_type));
        if (!cat)
            throw InputError(t.source() + ":" + std::to_string(t.line(r)) + ": unknown mix type '" +
                             t.cell(r, c_type) + "' (expected wind, nuclear, solar, CCGT or coal)");
        const double share = t.number(r, c_share);
        if (share < 0.0 || share > 1.0)
            throw InputError(t.source() + ":" + std::to_string(t.line(r)) + ": share outside [0, 1]");
        out[static_cast<int>(t.integer(r, c_year))][*cat] = share;
    }
    return out;
}

MixTrajectory load_target_mix(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot open target mix: " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_target_mix(text, path.string());
}

MixTrajectory category_trajectory(const SimulationResult& result)
{
    MixTrajectory out;
    for (const auto& y : result.years)
        out[y.year] = y.category_mix();
    return out;
}

GenomeLayout GenomeLayout::validation()
{
    return {Kind::Validation, 0, 1};
}

GenomeLayout GenomeLayout::long_term(int first_year, int years)
{
    if (years < 1)
        throw InputError("long-term layout needs at least one curve");
    return {Kind::LongTerm, first_year, years};
}

std::size_t GenomeLayout::size() const
{
    return kind == Kind::Validation ? 2 : 2 * static_cast<std::size_t>(years) + 3;
}

std::vector<GeneBounds> GenomeLayout::bounds() const
{
    if (kind == Kind::Validation)
        return {{0.0, 0.004}, {-30.0, 100.0}};
    std::vector<GeneBounds> b;
    b.insert(b.end(), static_cast<std::size_t>(years), GeneBounds{0.0, 0.003});
    b.insert(b.end(), static_cast<std::size_t>(years), GeneBounds{-30.0, 50.0});
    b.push_back({0.0, 0.001}); // sigma_m
    b.push_back({0.0, 0.001}); // sigma_c
    b.push_back({0.0, 200.0}); // nuclear subsidy
    return b;
}

ScenarioConfig GenomeLayout::apply(const ScenarioConfig& base, std::span<const double> genome) const
{
    if (genome.size() != size())
        throw InputError("genome has " + std::to_string(genome.size()) + " genes, layout expects " +
                         std::to_string(size()));
    ScenarioConfig s = base;
    if (kind == Kind::Validation) {
        s.ppdc = {genome[0], genome[1]};
        s.ppdc_by_year.clear();
        return s;
    }
    const auto n = static_cast<std::size_t>(years);
    s.ppdc_by_year.clear();
    for (std::size_t i = 0; i < n; ++i)
        s.ppdc_by_year[first_year + static_cast<int>(i)] = {genome[i], genome[n + i]};
    s.ppdc = s.ppdc_by_year.rbegin()->second;
    s.sigma_m = genome[2 * n];
    s.sigma_c = genome[2 * n + 1];
    s.nuclear_subsidy = genome[2 * n + 2];
    return s;
}

void validate_problem(const CalibrationProblem& problem)
{
    const auto& sc = problem.bundle.scenario;
    if (problem.layout.kind == GenomeLayout::Kind::Validation) {
        if (!problem.target.contains(sc.end_year))
            throw InputError("target mix has no entry for the final year " + std::to_string(sc.end_year));
        mix_error_validation(problem.target.at(sc.end_year), problem.target.at(sc.end_year));
        return;
    }
    for (int y = sc.start_year; y <= sc.end_year; ++y) {
        if (!problem.target.contains(y))
            throw InputError("target mix has no entry for year " + std::to_string(y));
        mix_error_validation(problem.target.at(y), problem.target.at(y));
    }
}

namespace {

SimulationResult run_genome(std::span<const double> genome, const CalibrationProblem& problem, std::uint64_t eval_seed)
{
    auto scenario = problem.layout.apply(problem.bundle.scenario, genome);
    scenario.rng_seed = eval_seed;
    return simulate(problem.bundle, scenario);
}

} // namespace

double objective_validation(std::span<const double> genome, const CalibrationProblem& problem,
                            std::uint64_t eval_seed)
{
    const auto& sc = problem.bundle.scenario;
    const auto& target = problem.target.at(sc.end_year);
    SimulationResult result;
    try {
        result = run_genome(genome, problem, eval_seed);
    } catch (const std::exception&) {
        return kWorstFitness;
    }
    return mix_error_validation(result.years.back().category_mix(), target);
}

double objective_longterm(std::span<const double> genome, const CalibrationProblem& problem,
                          std::uint64_t eval_seed)
{
    const auto& sc = problem.bundle.scenario;
    MixTrajectory target;
    for (int y = sc.start_year; y <= sc.end_year; ++y)
        target[y] = problem.target.at(y);
    SimulationResult result;
    try {
        result = run_genome(genome, problem, eval_seed);
    } catch (const std::exception&) {
        return kWorstFitness;
    }
    return mix_error_longterm(category_trajectory(result), target, problem.exclude_first_year);
}

Objective make_objective(const CalibrationProblem& problem)
{
    validate_problem(problem);
    if (problem.layout.kind == GenomeLayout::Kind::Validation)
        return [&problem](std::span<const double> g, std::uint64_t seed) { return objective_validation(g, problem, seed); };
    return [&problem](std::span<const double> g, std::uint64_t seed) { return objective_longterm(g, problem, seed); };
}

ForecastMetrics forecast_error_metrics(const std::map<int, double>& simulated, const std::map<int, double>& observed,
                                       double baseline)
{
    if (observed.empty() || simulated.size() != observed.size())
        throw InputError("simulated and observed trajectories must cover the same years");
    ForecastMetrics m;
    double sq = 0.0;
    for (auto s = simulated.begin(), o = observed.begin(); s != simulated.end(); ++s, ++o) {
        if (s->first != o->first)
            throw InputError("trajectory year mismatch: " + std::to_string(s->first) + " vs " + std::to_string(o->first));
        const double err = s->second - o->second;
        m.mae += std::abs(err);
        sq += err * err;
        m.naive_mae += std::abs(baseline - o->second);
    }
    const auto n = static_cast<double>(observed.size());
    m.mae /= n;
    m.naive_mae /= n;
    m.rmse = std::sqrt(sq / n);
    if (m.naive_mae > 0.0)
        m.mase = m.mae / m.naive_mae;
    return m;
}

TypedTrajectory parse_trajectory(std::string_view csv_text, std::string source)
{
    auto t = csv::Table::parse(csv_text, std::move(source));
    const auto c_year = t.column("year"), c_type = t.column("type"), c_share = t.column("share");
    TypedTrajectory out;
    for (std::size_t r = 0; r < t.rows(); ++r)
        out[t.cell(r, c_type)][static_cast<int>(t.integer(r, c_year))] = t.number(r, c_share);
    return out;
}

TypedTrajectory load_trajectory(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot open trajectory: " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_trajectory(text, path.string());
}

std::map<std::string, ForecastMetrics> forecast_metrics_by_type(const TypedTrajectory& simulated,
                                                                const TypedTrajectory& observed, int baseline_year)
{
    std::map<std::string, ForecastMetrics> out;
    for (const auto& [type, obs] : observed) {
        auto base = obs.find(baseline_year);
        if (base == obs.end())
            throw InputError("observed '" + type + "' has no value for baseline year " + std::to_string(baseline_year));
        auto sim_it = simulated.find(type);
        if (sim_it == simulated.end())
            throw InputError("simulated trajectory has no type '" + type + "'");
        std::map<int, double> o, s;
        for (const auto& [year, v] : obs) {
            if (year <= baseline_year)
                continue;
            auto sv = sim_it->second.find(year);
            if (sv == sim_it->second.end())
                throw InputError("simulated '" + type + "' has no value for " + std::to_string(year));
            o[year] = v;
            s[year] = sv->second;
        }
        if (o.empty())
            throw InputError("observed '" + type + "' has no years after the baseline");
        out[type] = forecast_error_metrics(s, o, base->second);
    }
    return out;
}

} // namespace elecsim
