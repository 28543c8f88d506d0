#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "elecsim/error.hpp"
#include "elecsim/repdays.hpp"

namespace elecsim {

/// Weighted Pearson correlation. Throws InputError on a zero-variance input.
template <typename DerivedA, typename DerivedB, typename DerivedW>
typename DerivedA::Scalar weighted_pearson(const Eigen::MatrixBase<DerivedA>& a,
                                           const Eigen::MatrixBase<DerivedB>& b,
                                           const Eigen::MatrixBase<DerivedW>& w)
{
    using Scalar = typename DerivedA::Scalar;
    if (a.size() != b.size() || a.size() != w.size() || a.size() < 2)
        throw InputError("correlation needs two equally sized series of at least two points");
    const Scalar wsum = w.sum();
    const Scalar ma = a.cwiseProduct(w).sum() / wsum;
    const Scalar mb = b.cwiseProduct(w).sum() / wsum;
    const auto da = (a.array() - ma).eval();
    const auto db = (b.array() - mb).eval();
    const Scalar saa = (w.array() * da * da).sum();
    const Scalar sbb = (w.array() * db * db).sum();
    if (!(saa > Scalar(0)) || !(sbb > Scalar(0)))
        throw InputError("correlation undefined for a zero-variance series");
    const Scalar sab = (w.array() * da * db).sum();
    const Scalar r = sab / std::sqrt(saa * sbb);
    return std::clamp(r, Scalar(-1), Scalar(1));
}

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar pearson(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b)
{
    using Scalar = typename DerivedA::Scalar;
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    return weighted_pearson(a, b, Vec::Ones(a.size()));
}

/// Series as columns, each row lasting `weights(row)` hours.
struct WeightedSeriesSet {
    Eigen::MatrixXd values;
    Eigen::VectorXd weights;
};

WeightedSeriesSet observed_set(const TimeSeriesSet& ts);
WeightedSeriesSet approximated_set(const RepresentativeYear& year);

/// Mean relative error of the per-hour average of each series.
double ree_av(const WeightedSeriesSet& observed, const WeightedSeriesSet& approx);

/// Mean over series of the RMSE between duration curves resampled on
/// `grid_points` durations, normalised by the observed curve's range.
double nrmse_av(const WeightedSeriesSet& observed, const WeightedSeriesSet& approx,
                Eigen::Index grid_points = 8760);

/// Mean absolute difference of pairwise correlations. Observed correlations
/// use the chronological hours; approximated ones weight each representative hour.
double ce_av(const WeightedSeriesSet& observed, const WeightedSeriesSet& approx);

struct KSweepRow {
    int k = 0;
    Representative method = Representative::Medoid;
    double ce_av = 0.0;
    double nrmse_av = 0.0;
    double ree_av = 0.0;
};

struct KSweepOptions {
    Normalization normalization = Normalization::ZScore;
    KMeansInit init = KMeansInit::PlusPlus;
    int max_iter = 300;
    Eigen::Index grid_points = 8760;
    unsigned workers = 1;
};

/// Cluster, assemble and score the approximation for each (k, method). Each
/// evaluation draws its own stream from (seed, k, method).
std::vector<KSweepRow> evaluate_k_range(const TimeSeriesSet& ts, const std::vector<int>& k_list,
                                        const std::vector<Representative>& methods, std::uint64_t seed,
                                        const KSweepOptions& options = {});

/// Representative year for a single (k, method) with the same seed stream as
/// evaluate_k_range.
RepresentativeYear build_representative_year(const DayMatrix& dm, int k, Representative method,
                                             std::uint64_t seed, const KSweepOptions& options = {});

} // namespace elecsim
