#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "elecsim/timeseries.hpp"

namespace elecsim {

inline constexpr int kHoursPerDay = 24;
inline constexpr int kDayFeatures = kHoursPerDay * kSeriesCount;
inline constexpr double kDaysPerYear = 365.0;

/// One day of all four series: rows are hours, columns follow Series.
using DayProfile = Eigen::Matrix<double, kHoursPerDay, kSeriesCount>;

enum class Normalization { ZScore, MinMax, None };
enum class KMeansInit { PlusPlus, Forgy };
enum class Representative { Medoid, Centroid };

std::string_view to_string(Normalization n);
std::string_view to_string(Representative r);
Normalization parse_normalization(std::string_view s);
Representative parse_representative(std::string_view s);

/// Days as feature rows. Column `s*24 + h` holds series s at hour h. Each column
/// is normalised across days as `(x - offset) / scale`; a zero scale maps the
/// column to 0.
struct DayMatrix {
    Eigen::MatrixXd features;
    Eigen::MatrixXd raw;
    Eigen::RowVectorXd offset;
    Eigen::RowVectorXd scale;
    Normalization normalization = Normalization::ZScore;
    std::vector<std::chrono::sys_days> day_index;

    Eigen::Index days() const { return features.rows(); }
    DayProfile raw_day(Eigen::Index d) const;
    /// Map a normalised feature row back to original units.
    Eigen::RowVectorXd denormalize(const Eigen::Ref<const Eigen::RowVectorXd>& row) const;
};

DayMatrix build_day_matrix(const TimeSeriesSet& ts, Normalization normalization = Normalization::ZScore);

/// Pack / unpack a 24x4 day and its 96-wide feature row.
Eigen::RowVectorXd to_feature_row(const DayProfile& day);
DayProfile from_feature_row(const Eigen::Ref<const Eigen::RowVectorXd>& row);

struct KMeansOptions {
    int k = 8;
    std::uint64_t seed = 1;
    int max_iter = 300;
    double tol = 1e-9;
    KMeansInit init = KMeansInit::PlusPlus;
};

struct Clustering {
    int k = 0;
    std::vector<int> assignment;        ///< day row -> cluster
    Eigen::MatrixXd centroids;          ///< k x 96, normalised space
    Eigen::VectorXd weights;            ///< share of days per cluster
    std::vector<Eigen::Index> medoid_day; ///< day row nearest each centroid
    int iterations = 0;
    bool converged = false;
    /// Within-cluster sum of squares after each Lloyd update.
    std::vector<double> objective_history;

    std::vector<Eigen::Index> members(int cluster) const;
};

/// Lloyd's k-means on the normalised day features. Empty clusters are
/// re-seeded with the point farthest from its centroid. Deterministic per seed.
Clustering kmeans(const DayMatrix& dm, const KMeansOptions& options);

/// Representative days, one per cluster, in original units.
struct RepresentativeDays {
    std::vector<DayProfile> profiles;
    std::vector<Eigen::Index> source_day; ///< medoid row, or -1 for centroids
    Eigen::VectorXd weights;
};

RepresentativeDays select_representative(const Clustering& clustering, const DayMatrix& dm,
                                         Representative method);

/// k weighted days laid end to end. Row `i*24 + h` is hour h of day i and
/// lasts `weight_i * 365` hours; durations are kept fractional.
struct RepresentativeYear {
    SeriesMatrix values;
    Eigen::VectorXd hour_weights;
    Eigen::VectorXd day_weights;

    Eigen::Index days() const { return day_weights.size(); }
    double total_hours() const { return hour_weights.sum(); }
    DayProfile day(Eigen::Index i) const { return values.middleRows(i * kHoursPerDay, kHoursPerDay); }
};

/// Throws InputError when the weights do not sum to 1 (within 1e-9), are
/// negative, or do not match the profile count.
RepresentativeYear assemble_year(const std::vector<DayProfile>& profiles, const Eigen::VectorXd& weights);

/// `cluster,weight,hour,demand_mw,solar_cf,onshore_cf,offshore_cf`
void write_representative_days(const RepresentativeYear& year, const std::filesystem::path& path);
RepresentativeYear load_representative_days(const std::filesystem::path& path);
RepresentativeYear parse_representative_days(std::string_view csv_text, std::string source = "<memory>");

/// Values sorted high to low with each point's duration.
struct DurationCurve {
    Eigen::VectorXd values;
    Eigen::VectorXd durations;
    Eigen::VectorXd cumulative; ///< duration elapsed at the end of each point

    double total_duration() const { return cumulative.size() ? cumulative(cumulative.size() - 1) : 0.0; }
    /// Step value at a fraction q in (0, 1] of the total duration.
    double at_fraction(double q) const;
    /// Values on a grid of T evenly spaced duration midpoints.
    Eigen::VectorXd resample(Eigen::Index points) const;
};

DurationCurve duration_curve(const Eigen::Ref<const Eigen::VectorXd>& values,
                             const Eigen::Ref<const Eigen::VectorXd>& weights);
DurationCurve duration_curve(const Eigen::Ref<const Eigen::VectorXd>& values);

} // namespace elecsim
