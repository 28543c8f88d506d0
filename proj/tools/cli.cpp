#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "elecsim/calibrate.hpp"
#include "elecsim/csv.hpp"
#include "elecsim/engine.hpp"
#include "elecsim/error.hpp"
#include "elecsim/market.hpp"
#include "elecsim/metrics.hpp"
#include "elecsim/repdays.hpp"
#include "elecsim/timeseries.hpp"

#ifndef ELECSIM_VERSION
#define ELECSIM_VERSION "dev"
#endif

namespace elecsim::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string file_digest(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot open input: " + path);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 14];
    while (in) {
        in.read(buf, sizeof buf);
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
    }
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
    return hex;
}

namespace {

std::string utc_now()
{
    auto t = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
    auto day = std::chrono::floor<std::chrono::days>(t);
    std::chrono::hh_mm_ss tod{t - day};
    return format_timestamp(std::chrono::sys_seconds{day} + tod.hours() + tod.minutes()) + ":" +
           (tod.seconds().count() < 10 ? "0" : "") + std::to_string(tod.seconds().count()) + "Z";
}

class Manifest {
public:
    Manifest(const fs::path& out_dir, std::string subcommand, json config, std::uint64_t seed)
        : path_(out_dir / "manifest.json")
    {
        doc_["subcommand"] = std::move(subcommand);
        doc_["config"] = std::move(config);
        doc_["inputs"] = json::object();
        doc_["seed"] = seed;
        doc_["version"] = ELECSIM_VERSION;
    }

    void input(const std::string& role, const fs::path& p)
    {
        doc_["inputs"][role] = {{"path", p.string()}, {"fnv1a64", file_digest(p.string())}};
    }

    void begin()
    {
        doc_["started_at"] = utc_now();
        doc_["finished_at"] = nullptr;
        doc_["status"] = "running";
        flush();
    }

    void finish(const std::string& status)
    {
        doc_["finished_at"] = utc_now();
        doc_["status"] = status;
        flush();
    }

private:
    void flush()
    {
        std::ofstream out(path_, std::ios::binary | std::ios::trunc);
        if (!out)
            throw RuntimeFailure("cannot write " + path_.string());
        out << doc_.dump(2) << '\n';
    }

    fs::path path_;
    json doc_;
};

std::ofstream open_output(const fs::path& p)
{
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out)
        throw RuntimeFailure("cannot write " + p.string());
    return out;
}

void ensure_dir(const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw RuntimeFailure("cannot create output directory " + dir.string());
}

unsigned default_workers()
{
    return std::max(1u, std::thread::hardware_concurrency());
}

struct RepdaysArgs {
    std::string input, out, method = "medoid", normalization = "zscore", init = "kmeans++";
    int k = 8;
    std::vector<int> k_list{1, 2, 4, 8, 16};
    std::uint64_t seed = 1;
    int max_iter = 300;
};

struct SimulateArgs {
    std::string scenario, registry, repdays, out;
    std::optional<std::uint64_t> seed;
    bool dispatch_log = false;
};

struct CalibrateArgs {
    std::string mode, scenario, target, registry, repdays, out;
    int pop = 120, gens = 50, curves = 17, stall = 20, stop_after = -1;
    std::optional<int> first_year;
    double cxpb = 0.5, mutpb = 0.2;
    std::uint64_t seed = 1;
    bool exclude_first_year = false;
};

struct MetricsArgs {
    std::string simulated, observed, out;
    int baseline_year = 0;
};

int cmd_repdays(const RepdaysArgs& a, unsigned workers, spdlog::logger& log)
{
    const auto method = parse_representative(a.method);
    KSweepOptions opts;
    opts.normalization = parse_normalization(a.normalization);
    opts.init = a.init == "forgy" ? KMeansInit::Forgy : KMeansInit::PlusPlus;
    opts.max_iter = a.max_iter;
    opts.workers = workers;
    if (a.k < 1)
        throw InputError("--k must be positive");

    auto ts = load_hourly_series(a.input);
    log.info("loaded {} days from {} ({} rows rejected, {} hours dropped)", ts.days(), a.input, ts.rejected_rows,
             ts.dropped_hours);
    if (ts.days() < a.k)
        throw InputError("--k " + std::to_string(a.k) + " exceeds the " + std::to_string(ts.days()) +
                         " complete days in " + a.input);

    std::vector<int> ks;
    for (int k : a.k_list)
        if (k >= 1 && k <= ts.days())
            ks.push_back(k);
    ks.push_back(a.k);
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

    ensure_dir(a.out);
    json config = {{"input", a.input}, {"k", a.k}, {"method", a.method}, {"normalization", a.normalization},
                   {"init", a.init}, {"k_list", ks}, {"max_iter", a.max_iter}, {"workers", workers}};
    Manifest manifest(a.out, "repdays", config, a.seed);
    manifest.input("input", a.input);
    manifest.begin();

    auto dm = build_day_matrix(ts, opts.normalization);
    auto year = build_representative_year(dm, a.k, method, a.seed, opts);
    write_representative_days(year, fs::path(a.out) / "representative_days.csv");
    log.info("wrote {} representative days, {} weighted hours", year.days(), year.total_hours());

    auto rows = evaluate_k_range(ts, ks, {Representative::Medoid, Representative::Centroid}, a.seed, opts);
    auto out = open_output(fs::path(a.out) / "metrics.csv");
    out << "k,method,ce_av,nrmse_av,ree_av\n";
    for (const auto& r : rows)
        out << r.k << ',' << to_string(r.method) << ',' << csv::format_number(r.ce_av) << ','
            << csv::format_number(r.nrmse_av) << ',' << csv::format_number(r.ree_av) << '\n';
    manifest.finish("ok");
    return 0;
}

int cmd_simulate(const SimulateArgs& a, spdlog::logger& log)
{
    auto bundle = load_bundle(a.scenario, a.registry, a.repdays);
    if (a.seed)
        bundle.scenario.rng_seed = *a.seed;
    const auto registry = a.registry.empty() ? bundle.scenario.registry : fs::path(a.registry);
    const auto repdays = a.repdays.empty() ? bundle.scenario.repdays : fs::path(a.repdays);

    ensure_dir(a.out);
    json config = {{"scenario", to_json(bundle.scenario)}, {"dispatch_log", a.dispatch_log}};
    Manifest manifest(a.out, "simulate", config, bundle.scenario.rng_seed);
    manifest.input("scenario", a.scenario);
    manifest.input("cost_table", bundle.scenario.cost_table);
    manifest.input("registry", registry);
    manifest.input("repdays", repdays);
    manifest.begin();

    const fs::path dir = a.out;
    auto mix = open_output(dir / "mix_by_year.csv");
    auto category = open_output(dir / "category_mix_by_year.csv");
    auto funds = open_output(dir / "funds_by_year.csv");
    auto invest = open_output(dir / "investments.csv");
    write_mix_header(mix);
    write_category_mix_header(category);
    write_funds_header(funds);
    write_investment_header(invest);
    std::optional<std::ofstream> dispatch;
    if (a.dispatch_log) {
        dispatch = open_output(dir / "dispatch_log.csv");
        write_dispatch_log_header(*dispatch);
    }

    auto world = init_world(bundle.scenario, bundle.plants, bundle.rep_year, bundle.costs);
    run(
        world, bundle.scenario.end_year - bundle.scenario.start_year,
        [&](const YearResult& r) {
            write_mix_rows(mix, r);
            write_category_mix_rows(category, r);
            write_funds_rows(funds, r);
            write_investment_rows(invest, r);
            mix.flush();
            const auto committed = std::count_if(r.investments.begin(), r.investments.end(),
                                                 [](const InvestmentLogRow& row) { return row.committed; });
            log.info("year {}: served {:.0f} MWh, unserved {:.0f} MWh, {} commitments", r.year, r.served_mwh,
                     r.unserved_mwh, committed);
        },
        dispatch ? &*dispatch : nullptr);
    manifest.finish("ok");
    return 0;
}

std::vector<std::string> gene_names(const GenomeLayout& layout)
{
    if (layout.kind == GenomeLayout::Kind::Validation)
        return {"m", "c"};
    std::vector<std::string> names;
    for (int i = 0; i < layout.years; ++i)
        names.push_back("m_" + std::to_string(layout.first_year + i));
    for (int i = 0; i < layout.years; ++i)
        names.push_back("c_" + std::to_string(layout.first_year + i));
    names.insert(names.end(), {"sigma_m", "sigma_c", "nuclear_subsidy"});
    return names;
}

int cmd_calibrate(const CalibrateArgs& a, unsigned workers, spdlog::logger& log)
{
    CalibrationProblem problem;
    problem.bundle = load_bundle(a.scenario, a.registry, a.repdays);
    problem.target = load_target_mix(a.target);
    problem.exclude_first_year = a.exclude_first_year;
    problem.layout = a.mode == "validation"
                         ? GenomeLayout::validation()
                         : GenomeLayout::long_term(a.first_year.value_or(problem.bundle.scenario.start_year), a.curves);
    auto objective = make_objective(problem);

    GAConfig cfg;
    cfg.population_size = a.pop;
    cfg.crossover_prob = a.cxpb;
    cfg.mutation_prob = a.mutpb;
    cfg.max_generations = a.gens;
    cfg.bounds = problem.layout.bounds();
    cfg.seed = a.seed;
    cfg.parallel_workers = workers;
    cfg.stall_generations = a.stall;
    cfg.validate();

    const auto& sc = problem.bundle.scenario;
    ensure_dir(a.out);
    json config = {{"mode", a.mode},
                   {"scenario", to_json(sc)},
                   {"population", a.pop},
                   {"crossover_prob", a.cxpb},
                   {"mutation_prob", a.mutpb},
                   {"max_generations", a.gens},
                   {"stall_generations", a.stall},
                   {"stop_after", a.stop_after},
                   {"genes", gene_names(problem.layout)},
                   {"exclude_first_year", a.exclude_first_year},
                   {"workers", workers}};
    Manifest manifest(a.out, "calibrate", config, a.seed);
    manifest.input("scenario", a.scenario);
    manifest.input("target", a.target);
    manifest.input("cost_table", sc.cost_table);
    manifest.input("registry", a.registry.empty() ? sc.registry : fs::path(a.registry));
    manifest.input("repdays", a.repdays.empty() ? sc.repdays : fs::path(a.repdays));
    manifest.begin();

    GenerationLogWriter writer(fs::path(a.out) / "generation_log.csv", problem.layout.size());
    GACallbacks callbacks;
    callbacks.on_generation = [&](const GenerationRecord& rec) {
        writer.write(rec);
        log.info("generation {}: best fitness {:.6g}", rec.generation, rec.best_fitness);
    };
    if (a.stop_after >= 0)
        callbacks.should_stop = [&](int generation) { return generation >= a.stop_after; };

    auto result = ga_run(cfg, objective, callbacks);
    for (const auto& msg : result.failure_messages)
        log.warn("evaluation failed: {}", msg);

    auto out = open_output(fs::path(a.out) / "best_genome.csv");
    out << "gene,name,value\n";
    const auto names = gene_names(problem.layout);
    for (std::size_t i = 0; i < result.best.genome.size(); ++i)
        out << i << ',' << names[i] << ',' << csv::format_number(result.best.genome[i]) << '\n';
    out << "fitness,," << csv::format_number(result.best.fitness) << '\n';

    // Paths are resolved against the scenario file, which now lives in --out.
    auto fitted = problem.layout.apply(sc, result.best.genome);
    fitted.cost_table = fs::absolute(sc.cost_table);
    fitted.registry = fs::absolute(a.registry.empty() ? sc.registry : fs::path(a.registry));
    fitted.repdays = fs::absolute(a.repdays.empty() ? sc.repdays : fs::path(a.repdays));
    auto best_scenario = open_output(fs::path(a.out) / "best_scenario.json");
    best_scenario << to_json(fitted).dump(2) << '\n';

    manifest.finish(result.stopped ? "stopped" : result.stalled ? "stalled" : "ok");
    return 0;
}

int cmd_metrics(const MetricsArgs& a)
{
    auto sim = load_trajectory(a.simulated);
    auto obs = load_trajectory(a.observed);
    auto metrics = forecast_metrics_by_type(sim, obs, a.baseline_year);

    ensure_dir(a.out);
    json config = {{"baseline_year", a.baseline_year}};
    Manifest manifest(a.out, "metrics", config, 0);
    manifest.input("simulated", a.simulated);
    manifest.input("observed", a.observed);
    manifest.begin();
    auto out = open_output(fs::path(a.out) / "forecast_metrics.csv");
    out << "type,mae,rmse,naive_mae,mase\n";
    for (const auto& [type, m] : metrics)
        out << type << ',' << csv::format_number(m.mae) << ',' << csv::format_number(m.rmse) << ','
            << csv::format_number(m.naive_mae) << ',' << (m.mase ? csv::format_number(*m.mase) : "") << '\n';
    manifest.finish("ok");
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Agent-based electricity market simulator", "elecsim"};
    app.require_subcommand(1);
    std::string log_level = "info";
    unsigned workers = default_workers();
    app.add_option("--log-level", log_level, "error, warn, info or debug")
        ->check(CLI::IsMember({"error", "warn", "info", "debug"}));
    app.add_option("--workers", workers, "parallel evaluation threads")->check(CLI::PositiveNumber);

    RepdaysArgs ra;
    auto* rep = app.add_subcommand("repdays", "cluster days into representative days and score k");
    rep->add_option("--input", ra.input, "hourly CSV")->required();
    rep->add_option("--k", ra.k, "number of representative days");
    rep->add_option("--method", ra.method)->check(CLI::IsMember({"medoid", "centroid"}));
    rep->add_option("--seed", ra.seed);
    rep->add_option("--out", ra.out)->required();
    rep->add_option("--normalization", ra.normalization)->check(CLI::IsMember({"zscore", "minmax", "none"}));
    rep->add_option("--init", ra.init)->check(CLI::IsMember({"kmeans++", "forgy"}));
    rep->add_option("--k-list", ra.k_list, "k values scored in metrics.csv")->delimiter(',');
    rep->add_option("--max-iter", ra.max_iter)->check(CLI::PositiveNumber);

    SimulateArgs sa;
    std::uint64_t sim_seed = 0;
    auto* sim = app.add_subcommand("simulate", "run the market from start to end year");
    sim->add_option("--scenario", sa.scenario)->required();
    sim->add_option("--registry", sa.registry, "overrides the scenario registry");
    sim->add_option("--repdays", sa.repdays, "overrides the scenario representative days");
    auto* sim_seed_opt = sim->add_option("--seed", sim_seed, "overrides the scenario rng_seed");
    sim->add_option("--out", sa.out)->required();
    sim->add_flag("--dispatch-log", sa.dispatch_log, "write per-hour dispatch");

    CalibrateArgs ca;
    int first_year = 0;
    auto* cal = app.add_subcommand("calibrate", "fit PPDC parameters with the genetic algorithm");
    cal->add_option("mode", ca.mode)->required()->check(CLI::IsMember({"validation", "longterm"}));
    cal->add_option("--scenario", ca.scenario)->required();
    cal->add_option("--target", ca.target, "year,type,share CSV")->required();
    cal->add_option("--registry", ca.registry);
    cal->add_option("--repdays", ca.repdays);
    cal->add_option("--pop", ca.pop)->check(CLI::PositiveNumber);
    cal->add_option("--cxpb", ca.cxpb)->check(CLI::Range(0.0, 1.0));
    cal->add_option("--mutpb", ca.mutpb)->check(CLI::Range(0.0, 1.0));
    cal->add_option("--gens", ca.gens)->check(CLI::NonNegativeNumber);
    cal->add_option("--seed", ca.seed);
    cal->add_option("--out", ca.out)->required();
    cal->add_option("--stall", ca.stall, "generations without improvement before stopping; 0 disables")
        ->check(CLI::NonNegativeNumber);
    cal->add_option("--stop-after", ca.stop_after, "end after this generation");
    auto* first_year_opt = cal->add_option("--first-year", first_year, "first long-term curve year");
    cal->add_option("--curves", ca.curves, "long-term curve count")->check(CLI::PositiveNumber);
    cal->add_flag("--exclude-first-year", ca.exclude_first_year);

    MetricsArgs ma;
    auto* met = app.add_subcommand("metrics", "forecast error of a simulated mix trajectory");
    met->add_option("--simulated", ma.simulated)->required();
    met->add_option("--observed", ma.observed)->required();
    met->add_option("--baseline-year", ma.baseline_year, "last observed year before the forecast")->required();
    met->add_option("--out", ma.out)->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e, out, err);
        err << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    }

    auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
    spdlog::logger log("elecsim", sink);
    log.set_pattern("[%l] %v");
    log.set_level(spdlog::level::from_str(log_level));

    try {
        if (*rep)
            return cmd_repdays(ra, workers, log);
        if (*sim) {
            if (*sim_seed_opt)
                sa.seed = sim_seed;
            return cmd_simulate(sa, log);
        }
        if (*cal) {
            if (*first_year_opt)
                ca.first_year = first_year;
            return cmd_calibrate(ca, workers, log);
        }
        if (*met)
            return cmd_metrics(ma);
    } catch (const InputError& e) {
        log.error("{}", e.what());
        return 1;
    } catch (const std::exception& e) {
        log.error("{}", e.what());
        return 2;
    }
    return 1;
}

} // namespace elecsim::cli
