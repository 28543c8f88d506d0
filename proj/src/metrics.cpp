#include "elecsim/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

#include "elecsim/rng.hpp"

namespace elecsim {

namespace {

void check_pair(const WeightedSeriesSet& observed, const WeightedSeriesSet& approx)
{
    if (observed.values.cols() != approx.values.cols() || observed.values.cols() == 0)
        throw InputError("observed and approximated sets must cover the same series");
    if (observed.values.rows() != observed.weights.size() || approx.values.rows() != approx.weights.size())
        throw InputError("each value row needs a weight");
    if (observed.values.rows() == 0 || approx.values.rows() == 0)
        throw InputError("empty series set");
}

} // namespace

WeightedSeriesSet observed_set(const TimeSeriesSet& ts)
{
    return {ts.values, Eigen::VectorXd::Ones(ts.hours())};
}

WeightedSeriesSet approximated_set(const RepresentativeYear& year)
{
    return {year.values, year.hour_weights};
}

double ree_av(const WeightedSeriesSet& observed, const WeightedSeriesSet& approx)
{
    check_pair(observed, approx);
    const auto series = observed.values.cols();
    double total = 0.0;
    for (Eigen::Index s = 0; s < series; ++s) {
        const double obs_sum = observed.values.col(s).dot(observed.weights);
        if (obs_sum == 0.0)
            throw InputError("relative energy error undefined: observed series " + std::to_string(s) + " sums to 0");
        const double obs_mean = obs_sum / observed.weights.sum();
        const double apx_mean = approx.values.col(s).dot(approx.weights) / approx.weights.sum();
        total += std::abs((obs_mean - apx_mean) / obs_mean);
    }
    return total / static_cast<double>(series);
}

double nrmse_av(const WeightedSeriesSet& observed, const WeightedSeriesSet& approx, Eigen::Index grid_points)
{
    check_pair(observed, approx);
    if (grid_points < 1)
        throw InputError("duration grid needs at least one point");
    const auto series = observed.values.cols();
    double total = 0.0;
    for (Eigen::Index s = 0; s < series; ++s) {
        const auto obs = duration_curve(observed.values.col(s), observed.weights);
        const double range = obs.values.maxCoeff() - obs.values.minCoeff();
        if (!(range > 0.0))
            throw InputError("normalised RMSE undefined: observed series " + std::to_string(s) + " is constant");
        const auto apx = duration_curve(approx.values.col(s), approx.weights);
        const Eigen::VectorXd diff = obs.resample(grid_points) - apx.resample(grid_points);
        total += std::sqrt(diff.squaredNorm() / static_cast<double>(grid_points)) / range;
    }
    return total / static_cast<double>(series);
}

double ce_av(const WeightedSeriesSet& observed, const WeightedSeriesSet& approx)
{
    check_pair(observed, approx);
    const auto series = observed.values.cols();
    if (series < 2)
        throw InputError("correlation error needs at least two series");
    double total = 0.0;
    for (Eigen::Index i = 0; i < series; ++i)
        for (Eigen::Index j = i + 1; j < series; ++j) {
            const double obs = weighted_pearson(observed.values.col(i), observed.values.col(j), observed.weights);
            const double apx = weighted_pearson(approx.values.col(i), approx.values.col(j), approx.weights);
            total += std::abs(obs - apx);
        }
    return 2.0 * total / static_cast<double>(series * (series - 1));
}

RepresentativeYear build_representative_year(const DayMatrix& dm, int k, Representative method,
                                             std::uint64_t seed, const KSweepOptions& options)
{
    KMeansOptions km;
    km.k = k;
    km.seed = derive_seed(seed, {static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(method)});
    km.max_iter = options.max_iter;
    km.init = options.init;
    const auto clustering = kmeans(dm, km);
    const auto reps = select_representative(clustering, dm, method);
    return assemble_year(reps.profiles, reps.weights);
}

std::vector<KSweepRow> evaluate_k_range(const TimeSeriesSet& ts, const std::vector<int>& k_list,
                                        const std::vector<Representative>& methods, std::uint64_t seed,
                                        const KSweepOptions& options)
{
    const auto dm = build_day_matrix(ts, options.normalization);
    for (int k : k_list)
        if (k < 1 || k > dm.days())
            throw InputError("k = " + std::to_string(k) + " outside 1.." + std::to_string(dm.days()));
    const auto observed = observed_set(ts);

    std::vector<KSweepRow> rows;
    for (int k : k_list)
        for (auto m : methods)
            rows.push_back({k, m, 0.0, 0.0, 0.0});

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < rows.size(); i = next++) {
            try {
                auto& row = rows[i];
                const auto year = build_representative_year(dm, row.k, row.method, seed, options);
                const auto approx = approximated_set(year);
                row.ce_av = ce_av(observed, approx);
                row.nrmse_av = nrmse_av(observed, approx, options.grid_points);
                row.ree_av = ree_av(observed, approx);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
            }
        }
    };
    const unsigned n_workers = std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(rows.size())));
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 1; w < n_workers; ++w)
            pool.emplace_back(worker);
        worker();
    }
    if (failure)
        std::rethrow_exception(failure);
    return rows;
}

} // namespace elecsim
