#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace elecsim {

/// Fitness assigned to individuals whose evaluation failed.
inline constexpr double kWorstFitness = std::numeric_limits<double>::max();

struct GeneBounds {
    double lower = 0.0;
    double upper = 1.0;
};

enum class SurvivorStrategy {
    MuPlusLambda,       ///< best mu of parents and offspring together
    GenerationalElitist ///< offspring replace parents except the `elitism` best parents
};

struct GAConfig {
    int population_size = 120;
    double crossover_prob = 0.5;
    double mutation_prob = 0.2; ///< per gene
    int max_generations = 50;
    std::vector<GeneBounds> bounds;
    std::uint64_t seed = 1;
    unsigned parallel_workers = 1;

    int tournament_size = 3;
    double blend_alpha = 0.5;
    double mutation_sigma_fraction = 0.1; ///< of each gene's bound width
    SurvivorStrategy survivors = SurvivorStrategy::MuPlusLambda;
    int elitism = 1;
    /// Stop when the best fitness improves by less than `stall_tolerance`
    /// over this many generations; 0 disables the check.
    int stall_generations = 20;
    double stall_tolerance = 1e-6;

    void validate() const;
};

struct Individual {
    std::vector<double> genome;
    double fitness = kWorstFitness;
    std::uint64_t eval_seed = 0;
    bool failed = false;
};

/// Fitness to minimise. Must be a pure function of (genome, eval_seed) and
/// safe to call concurrently.
using Objective = std::function<double(std::span<const double> genome, std::uint64_t eval_seed)>;

struct GenerationRecord {
    int generation = 0;
    const std::vector<Individual>* population = nullptr;
    double best_fitness = kWorstFitness;
};

struct GACallbacks {
    /// Called once per generation (0 = initial population) after evaluation
    /// and survivor selection.
    std::function<void(const GenerationRecord&)> on_generation;
    /// Polled after each generation is reported; true ends the run.
    std::function<bool(int generation)> should_stop;
};

struct GAResult {
    Individual best;
    std::vector<Individual> population;
    int generations = 0; ///< index of the last completed generation
    std::vector<double> best_history;
    bool stalled = false;
    bool stopped = false;
    std::size_t failures = 0;
    std::vector<std::string> failure_messages;
};

/// Evolve a bounded real-valued population: tournament selection, blend
/// crossover, per-gene Gaussian mutation, clamping to bounds, and survivor
/// selection from parents and offspring. Offspring left unchanged by the
/// operators keep their parent's fitness. Evaluations run on
/// `parallel_workers` threads with seeds derived from (seed, generation, index).
GAResult ga_run(const GAConfig& config, const Objective& objective, const GACallbacks& callbacks = {});

/// Writes `generation,individual,fitness,gene_0..gene_k`, flushing after
/// every generation so the file always holds only complete generations.
class GenerationLogWriter {
public:
    GenerationLogWriter(const std::filesystem::path& path, std::size_t genes);
    void write(const GenerationRecord& record);

private:
    std::ofstream out_;
    std::filesystem::path path_;
};

} // namespace elecsim
