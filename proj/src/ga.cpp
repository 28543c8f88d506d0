#include "elecsim/ga.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "elecsim/csv.hpp"
#include "elecsim/error.hpp"
#include "elecsim/rng.hpp"

namespace elecsim {

void GAConfig::validate() const
{
    if (population_size < 2)
        throw InputError("population size must be at least 2");
    if (crossover_prob < 0.0 || crossover_prob > 1.0 || mutation_prob < 0.0 || mutation_prob > 1.0)
        throw InputError("crossover and mutation probabilities must lie in [0, 1]");
    if (max_generations < 0)
        throw InputError("max_generations must be non-negative");
    if (bounds.empty())
        throw InputError("genome needs at least one gene");
    for (const auto& b : bounds)
        if (!(b.lower < b.upper))
            throw InputError("each gene needs lower < upper");
    if (tournament_size < 1)
        throw InputError("tournament size must be at least 1");
    if (elitism < 0 || elitism > population_size)
        throw InputError("elitism must lie in [0, population size]");
    if (stall_generations < 0)
        throw InputError("stall_generations must be non-negative");
}

namespace {

struct Evaluation {
    std::size_t failures = 0;
    std::vector<std::string> messages;
};

void evaluate(std::vector<Individual>& pop, const std::vector<bool>& pending, const Objective& objective,
              unsigned workers, Evaluation& stats)
{
    std::atomic<std::size_t> next{0};
    std::mutex mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < pop.size(); i = next++) {
            if (!pending[i])
                continue;
            auto& ind = pop[i];
            try {
                const double f = objective(ind.genome, ind.eval_seed);
                if (!std::isfinite(f))
                    throw RuntimeFailure("objective returned a non-finite value");
                ind.fitness = f;
                ind.failed = false;
            } catch (const std::exception& e) {
                ind.fitness = kWorstFitness;
                ind.failed = true;
                std::lock_guard lock(mutex);
                ++stats.failures;
                stats.messages.push_back(e.what());
            }
        }
    };
    const auto n = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(pop.size())));
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < n; ++w)
        pool.emplace_back(work);
    work();
}

std::size_t best_index(const std::vector<Individual>& pop)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < pop.size(); ++i)
        if (pop[i].fitness < pop[best].fitness)
            best = i;
    return best;
}

std::vector<Individual> sorted_by_fitness(std::vector<Individual> pop)
{
    std::stable_sort(pop.begin(), pop.end(),
                     [](const Individual& a, const Individual& b) { return a.fitness < b.fitness; });
    return pop;
}

} // namespace

GAResult ga_run(const GAConfig& config, const Objective& objective, const GACallbacks& callbacks)
{
    config.validate();
    const auto genes = config.bounds.size();
    const auto mu = static_cast<std::size_t>(config.population_size);
    auto rng = make_rng(config.seed, {0});
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    auto clamp = [&](std::vector<double>& g) {
        for (std::size_t j = 0; j < genes; ++j)
            g[j] = std::clamp(g[j], config.bounds[j].lower, config.bounds[j].upper);
    };

    GAResult result;
    Evaluation stats;

    std::vector<Individual> population(mu);
    for (std::size_t i = 0; i < mu; ++i) {
        auto& ind = population[i];
        ind.genome.resize(genes);
        for (std::size_t j = 0; j < genes; ++j)
            ind.genome[j] = std::uniform_real_distribution<double>(config.bounds[j].lower, config.bounds[j].upper)(rng);
        ind.eval_seed = derive_seed(config.seed, {1, 0, i});
    }
    evaluate(population, std::vector<bool>(mu, true), objective, config.parallel_workers, stats);

    auto report = [&](int generation) {
        const double best = population[best_index(population)].fitness;
        result.best_history.push_back(best);
        result.generations = generation;
        if (callbacks.on_generation)
            callbacks.on_generation({generation, &population, best});
        return callbacks.should_stop && callbacks.should_stop(generation);
    };

    bool stop = report(0);
    result.stopped = stop;

    for (int gen = 1; !stop && gen <= config.max_generations; ++gen) {
        // Tournament selection.
        std::uniform_int_distribution<std::size_t> pick(0, mu - 1);
        std::vector<Individual> offspring;
        offspring.reserve(mu);
        for (std::size_t i = 0; i < mu; ++i) {
            std::size_t winner = pick(rng);
            for (int t = 1; t < config.tournament_size; ++t) {
                const auto challenger = pick(rng);
                if (population[challenger].fitness < population[winner].fitness)
                    winner = challenger;
            }
            offspring.push_back(population[winner]);
        }

        // Variation.
        std::vector<bool> changed(mu, false);
        for (std::size_t i = 0; i + 1 < mu; i += 2) {
            if (unit(rng) >= config.crossover_prob)
                continue;
            auto& a = offspring[i].genome;
            auto& b = offspring[i + 1].genome;
            for (std::size_t j = 0; j < genes; ++j) {
                const double gamma = (1.0 + 2.0 * config.blend_alpha) * unit(rng) - config.blend_alpha;
                const double x = a[j], y = b[j];
                a[j] = (1.0 - gamma) * x + gamma * y;
                b[j] = gamma * x + (1.0 - gamma) * y;
            }
            changed[i] = changed[i + 1] = true;
        }
        for (std::size_t i = 0; i < mu; ++i) {
            auto& g = offspring[i].genome;
            for (std::size_t j = 0; j < genes; ++j) {
                if (unit(rng) >= config.mutation_prob)
                    continue;
                const double width = config.bounds[j].upper - config.bounds[j].lower;
                g[j] += std::normal_distribution<double>(0.0, config.mutation_sigma_fraction * width)(rng);
                changed[i] = true;
            }
            clamp(g);
            if (changed[i])
                offspring[i].eval_seed = derive_seed(config.seed, {1, static_cast<std::uint64_t>(gen), i});
        }
        evaluate(offspring, changed, objective, config.parallel_workers, stats);

        // Survivors.
        std::vector<Individual> next;
        if (config.survivors == SurvivorStrategy::MuPlusLambda) {
            std::vector<Individual> pool = population;
            pool.insert(pool.end(), offspring.begin(), offspring.end());
            next = sorted_by_fitness(std::move(pool));
            next.resize(mu);
        } else {
            auto parents = sorted_by_fitness(population);
            auto children = sorted_by_fitness(std::move(offspring));
            const auto elite = static_cast<std::size_t>(config.elitism);
            next.assign(parents.begin(), parents.begin() + static_cast<std::ptrdiff_t>(elite));
            next.insert(next.end(), children.begin(), children.begin() + static_cast<std::ptrdiff_t>(mu - elite));
            next = sorted_by_fitness(std::move(next));
        }
        population = std::move(next);

        stop = report(gen);
        result.stopped = stop;
        const auto n = result.best_history.size();
        const auto window = static_cast<std::size_t>(config.stall_generations);
        if (!stop && window > 0 && n > window &&
            result.best_history[n - 1 - window] - result.best_history[n - 1] < config.stall_tolerance) {
            result.stalled = true;
            break;
        }
    }

    result.best = population[best_index(population)];
    result.population = std::move(population);
    result.failures = stats.failures;
    result.failure_messages = std::move(stats.messages);
    return result;
}

GenerationLogWriter::GenerationLogWriter(const std::filesystem::path& path, std::size_t genes)
    : out_(path, std::ios::binary | std::ios::trunc), path_(path)
{
    if (!out_)
        throw RuntimeFailure("cannot write generation log " + path.string());
    out_ << "generation,individual,fitness";
    for (std::size_t j = 0; j < genes; ++j)
        out_ << ",gene_" << j;
    out_ << '\n';
    out_.flush();
}

void GenerationLogWriter::write(const GenerationRecord& record)
{
    std::ostringstream block;
    const auto& pop = *record.population;
    for (std::size_t i = 0; i < pop.size(); ++i) {
        block << record.generation << ',' << i << ',' << csv::format_number(pop[i].fitness);
        for (double g : pop[i].genome)
            block << ',' << csv::format_number(g);
        block << '\n';
    }
    out_ << block.str();
    out_.flush();
    if (!out_)
        throw RuntimeFailure("failed writing generation log " + path_.string());
}

} // namespace elecsim
