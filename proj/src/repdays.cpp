#include "elecsim/repdays.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>

#include "elecsim/csv.hpp"
#include "elecsim/error.hpp"

namespace elecsim {

std::string_view to_string(Normalization n)
{
    switch (n) {
    case Normalization::ZScore: return "zscore";
    case Normalization::MinMax: return "minmax";
    case Normalization::None: return "none";
    }
    return "?";
}

std::string_view to_string(Representative r)
{
    return r == Representative::Medoid ? "medoid" : "centroid";
}

Normalization parse_normalization(std::string_view s)
{
    for (auto n : {Normalization::ZScore, Normalization::MinMax, Normalization::None})
        if (to_string(n) == s)
            return n;
    throw InputError("unknown normalization '" + std::string(s) + "'");
}

Representative parse_representative(std::string_view s)
{
    if (s == "medoid")
        return Representative::Medoid;
    if (s == "centroid")
        return Representative::Centroid;
    throw InputError("unknown representative method '" + std::string(s) + "'");
}

Eigen::RowVectorXd to_feature_row(const DayProfile& day)
{
    Eigen::RowVectorXd row(kDayFeatures);
    for (int s = 0; s < kSeriesCount; ++s)
        row.segment(s * kHoursPerDay, kHoursPerDay) = day.col(s).transpose();
    return row;
}

DayProfile from_feature_row(const Eigen::Ref<const Eigen::RowVectorXd>& row)
{
    DayProfile day;
    for (int s = 0; s < kSeriesCount; ++s)
        day.col(s) = row.segment(s * kHoursPerDay, kHoursPerDay).transpose();
    return day;
}

DayProfile DayMatrix::raw_day(Eigen::Index d) const
{
    return from_feature_row(raw.row(d));
}

Eigen::RowVectorXd DayMatrix::denormalize(const Eigen::Ref<const Eigen::RowVectorXd>& row) const
{
    return (row.array() * scale.array() + offset.array()).matrix();
}

DayMatrix build_day_matrix(const TimeSeriesSet& ts, Normalization normalization)
{
    if (ts.days() == 0)
        throw InputError("time series contains no complete days");
    const Eigen::Index n = ts.days();
    DayMatrix dm;
    dm.normalization = normalization;
    dm.raw.resize(n, kDayFeatures);
    dm.day_index.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index d = 0; d < n; ++d) {
        dm.raw.row(d) = to_feature_row(ts.values.middleRows(d * kHoursPerDay, kHoursPerDay));
        if (!ts.timestamps.empty())
            dm.day_index.push_back(
                std::chrono::floor<std::chrono::days>(ts.timestamps[static_cast<std::size_t>(d * kHoursPerDay)]));
    }

    switch (normalization) {
    case Normalization::ZScore: {
        dm.offset = dm.raw.colwise().mean();
        dm.scale = ((dm.raw.rowwise() - dm.offset).array().square().colwise().sum() / static_cast<double>(n))
                       .sqrt()
                       .matrix();
        break;
    }
    case Normalization::MinMax:
        dm.offset = dm.raw.colwise().minCoeff();
        dm.scale = dm.raw.colwise().maxCoeff() - dm.offset;
        break;
    case Normalization::None:
        dm.offset = Eigen::RowVectorXd::Zero(kDayFeatures);
        dm.scale = Eigen::RowVectorXd::Ones(kDayFeatures);
        break;
    }

    dm.features.resize(n, kDayFeatures);
    for (Eigen::Index j = 0; j < kDayFeatures; ++j) {
        if (dm.scale(j) > 0.0)
            dm.features.col(j) = (dm.raw.col(j).array() - dm.offset(j)) / dm.scale(j);
        else
            dm.features.col(j).setZero();
    }
    return dm;
}

std::vector<Eigen::Index> Clustering::members(int cluster) const
{
    std::vector<Eigen::Index> out;
    for (std::size_t i = 0; i < assignment.size(); ++i)
        if (assignment[i] == cluster)
            out.push_back(static_cast<Eigen::Index>(i));
    return out;
}

namespace {

Eigen::MatrixXd initial_centroids(const Eigen::MatrixXd& x, int k, KMeansInit init, std::mt19937_64& rng)
{
    const Eigen::Index n = x.rows();
    Eigen::MatrixXd c(k, x.cols());
    if (init == KMeansInit::Forgy) {
        std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
        std::iota(idx.begin(), idx.end(), 0);
        for (int i = 0; i < k; ++i) {
            std::uniform_int_distribution<Eigen::Index> pick(i, n - 1);
            std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(pick(rng))]);
            c.row(i) = x.row(idx[static_cast<std::size_t>(i)]);
        }
        return c;
    }

    std::vector<bool> chosen(static_cast<std::size_t>(n), false);
    std::uniform_int_distribution<Eigen::Index> first(0, n - 1);
    Eigen::Index pick = first(rng);
    chosen[static_cast<std::size_t>(pick)] = true;
    c.row(0) = x.row(pick);
    Eigen::VectorXd d2 = (x.rowwise() - c.row(0)).rowwise().squaredNorm();
    for (int i = 1; i < k; ++i) {
        const double total = d2.sum();
        if (total > 0.0) {
            std::uniform_real_distribution<double> u(0.0, total);
            const double target = u(rng);
            double acc = 0.0;
            pick = -1;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (d2(j) <= 0.0)
                    continue;
                acc += d2(j);
                pick = j;
                if (acc >= target)
                    break;
            }
        } else {
            // All remaining points coincide with a chosen centre.
            pick = 0;
            while (chosen[static_cast<std::size_t>(pick)])
                ++pick;
        }
        chosen[static_cast<std::size_t>(pick)] = true;
        c.row(i) = x.row(pick);
        d2 = d2.cwiseMin((x.rowwise() - c.row(i)).rowwise().squaredNorm());
    }
    return c;
}

int nearest(const Eigen::MatrixXd& centroids, const Eigen::Ref<const Eigen::RowVectorXd>& point, double& best)
{
    int arg = 0;
    best = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < centroids.rows(); ++j) {
        const double d = (centroids.row(j) - point).squaredNorm();
        if (d < best) {
            best = d;
            arg = static_cast<int>(j);
        }
    }
    return arg;
}

} // namespace

Clustering kmeans(const DayMatrix& dm, const KMeansOptions& options)
{
    const auto& x = dm.features;
    const Eigen::Index n = x.rows();
    const int k = options.k;
    if (k < 1)
        throw InputError("k must be at least 1");
    if (k > n)
        throw InputError("k = " + std::to_string(k) + " exceeds the number of days (" + std::to_string(n) + ")");

    auto rng = std::mt19937_64(options.seed);
    Clustering cl;
    cl.k = k;
    cl.centroids = initial_centroids(x, k, options.init, rng);
    cl.assignment.assign(static_cast<std::size_t>(n), 0);
    Eigen::VectorXd dist(n);

    for (int iter = 0; iter < std::max(1, options.max_iter); ++iter) {
        std::vector<Eigen::Index> sizes(static_cast<std::size_t>(k), 0);
        for (Eigen::Index i = 0; i < n; ++i) {
            double d = 0.0;
            const int a = nearest(cl.centroids, x.row(i), d);
            cl.assignment[static_cast<std::size_t>(i)] = a;
            dist(i) = d;
            ++sizes[static_cast<std::size_t>(a)];
        }
        for (int j = 0; j < k; ++j) {
            if (sizes[static_cast<std::size_t>(j)] > 0)
                continue;
            Eigen::Index far = -1;
            for (Eigen::Index i = 0; i < n; ++i) {
                if (sizes[static_cast<std::size_t>(cl.assignment[static_cast<std::size_t>(i)])] < 2)
                    continue;
                if (far < 0 || dist(i) > dist(far))
                    far = i;
            }
            --sizes[static_cast<std::size_t>(cl.assignment[static_cast<std::size_t>(far)])];
            cl.assignment[static_cast<std::size_t>(far)] = j;
            sizes[static_cast<std::size_t>(j)] = 1;
            dist(far) = 0.0;
            cl.centroids.row(j) = x.row(far);
        }

        Eigen::MatrixXd updated = Eigen::MatrixXd::Zero(k, x.cols());
        for (Eigen::Index i = 0; i < n; ++i)
            updated.row(cl.assignment[static_cast<std::size_t>(i)]) += x.row(i);
        for (int j = 0; j < k; ++j)
            updated.row(j) /= static_cast<double>(sizes[static_cast<std::size_t>(j)]);

        const double shift = (updated - cl.centroids).rowwise().norm().maxCoeff();
        cl.centroids = std::move(updated);
        double objective = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            objective += (x.row(i) - cl.centroids.row(cl.assignment[static_cast<std::size_t>(i)])).squaredNorm();
        cl.objective_history.push_back(objective);
        cl.iterations = iter + 1;
        if (shift < options.tol) {
            cl.converged = true;
            break;
        }
    }

    cl.weights = Eigen::VectorXd::Zero(k);
    for (int a : cl.assignment)
        cl.weights(a) += 1.0;
    cl.weights /= static_cast<double>(n);

    cl.medoid_day.assign(static_cast<std::size_t>(k), -1);
    std::vector<double> best(static_cast<std::size_t>(k), std::numeric_limits<double>::infinity());
    for (Eigen::Index i = 0; i < n; ++i) {
        const int a = cl.assignment[static_cast<std::size_t>(i)];
        const double d = (x.row(i) - cl.centroids.row(a)).squaredNorm();
        if (d < best[static_cast<std::size_t>(a)]) {
            best[static_cast<std::size_t>(a)] = d;
            cl.medoid_day[static_cast<std::size_t>(a)] = i;
        }
    }
    return cl;
}

RepresentativeDays select_representative(const Clustering& clustering, const DayMatrix& dm,
                                         Representative method)
{
    if (clustering.assignment.size() != static_cast<std::size_t>(dm.days()))
        throw InputError("clustering does not match the day matrix");
    RepresentativeDays out;
    out.weights = clustering.weights;
    for (int j = 0; j < clustering.k; ++j) {
        if (method == Representative::Medoid) {
            const auto d = clustering.medoid_day[static_cast<std::size_t>(j)];
            if (d < 0)
                throw InputError("cluster " + std::to_string(j) + " is empty");
            out.profiles.push_back(dm.raw_day(d));
            out.source_day.push_back(d);
        } else {
            auto members = clustering.members(j);
            if (members.empty())
                throw InputError("cluster " + std::to_string(j) + " is empty");
            Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(kDayFeatures);
            for (auto m : members)
                mean += dm.raw.row(m);
            mean /= static_cast<double>(members.size());
            out.profiles.push_back(from_feature_row(mean));
            out.source_day.push_back(-1);
        }
    }
    return out;
}

RepresentativeYear assemble_year(const std::vector<DayProfile>& profiles, const Eigen::VectorXd& weights)
{
    if (profiles.empty() || static_cast<Eigen::Index>(profiles.size()) != weights.size())
        throw InputError("need one weight per representative day");
    if ((weights.array() < 0.0).any())
        throw InputError("representative day weights must be non-negative");
    if (std::abs(weights.sum() - 1.0) > 1e-9)
        throw InputError("representative day weights sum to " + csv::format_number(weights.sum()) + ", not 1");

    const auto k = weights.size();
    RepresentativeYear year;
    year.day_weights = weights;
    year.values.resize(k * kHoursPerDay, kSeriesCount);
    year.hour_weights.resize(k * kHoursPerDay);
    for (Eigen::Index i = 0; i < k; ++i) {
        year.values.middleRows(i * kHoursPerDay, kHoursPerDay) = profiles[static_cast<std::size_t>(i)];
        year.hour_weights.segment(i * kHoursPerDay, kHoursPerDay).setConstant(weights(i) * kDaysPerYear);
    }
    return year;
}

void write_representative_days(const RepresentativeYear& year, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw RuntimeFailure("cannot write " + path.string());
    out << "cluster,weight,hour";
    for (auto name : kSeriesNames)
        out << ',' << name;
    out << '\n';
    for (Eigen::Index i = 0; i < year.days(); ++i)
        for (int h = 0; h < kHoursPerDay; ++h) {
            out << i << ',' << csv::format_number(year.day_weights(i)) << ',' << h;
            for (int s = 0; s < kSeriesCount; ++s)
                out << ',' << csv::format_number(year.values(i * kHoursPerDay + h, s));
            out << '\n';
        }
}

RepresentativeYear parse_representative_days(std::string_view csv_text, std::string source)
{
    auto t = csv::Table::parse(csv_text, std::move(source));
    const auto c_cluster = t.column("cluster"), c_weight = t.column("weight"), c_hour = t.column("hour");
    std::size_t cols[kSeriesCount];
    for (int s = 0; s < kSeriesCount; ++s)
        cols[s] = t.column(kSeriesNames[static_cast<std::size_t>(s)]);
    if (t.rows() == 0 || t.rows() % kHoursPerDay != 0)
        throw InputError(t.source() + ": representative days must have 24 rows per cluster");

    const auto k = static_cast<Eigen::Index>(t.rows() / kHoursPerDay);
    std::vector<DayProfile> profiles(static_cast<std::size_t>(k));
    Eigen::VectorXd weights(k);
    for (std::size_t r = 0; r < t.rows(); ++r) {
        const auto day = static_cast<Eigen::Index>(r / kHoursPerDay);
        const auto hour = static_cast<int>(r % kHoursPerDay);
        if (t.integer(r, c_cluster) != day || t.integer(r, c_hour) != hour)
            throw InputError(t.source() + ":" + std::to_string(t.line(r)) +
                             ": expected cluster " + std::to_string(day) + " hour " + std::to_string(hour));
        const double w = t.number(r, c_weight);
        if (hour == 0)
            weights(day) = w;
        else if (w != weights(day))
            throw InputError(t.source() + ":" + std::to_string(t.line(r)) + ": weight changes within a cluster");
        for (int s = 0; s < kSeriesCount; ++s)
            profiles[static_cast<std::size_t>(day)](hour, s) = t.number(r, cols[s]);
    }
    return assemble_year(profiles, weights);
}

RepresentativeYear load_representative_days(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot open representative days: " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_representative_days(text, path.string());
}

double DurationCurve::at_fraction(double q) const
{
    const double total = total_duration();
    const double target = q * total;
    // Tolerance keeps curves with proportional durations stepping together.
    const double eps = 1e-12 * total;
    auto it = std::lower_bound(cumulative.data(), cumulative.data() + cumulative.size(), target - eps);
    auto idx = static_cast<Eigen::Index>(it - cumulative.data());
    return values(std::min(idx, values.size() - 1));
}

Eigen::VectorXd DurationCurve::resample(Eigen::Index points) const
{
    Eigen::VectorXd out(points);
    for (Eigen::Index t = 0; t < points; ++t)
        out(t) = at_fraction((static_cast<double>(t) + 0.5) / static_cast<double>(points));
    return out;
}

DurationCurve duration_curve(const Eigen::Ref<const Eigen::VectorXd>& values,
                             const Eigen::Ref<const Eigen::VectorXd>& weights)
{
    if (values.size() == 0 || values.size() != weights.size())
        throw InputError("duration curve needs non-empty values with matching weights");
    std::vector<Eigen::Index> order(static_cast<std::size_t>(values.size()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values(a) > values(b); });
    DurationCurve dc;
    dc.values.resize(values.size());
    dc.durations.resize(values.size());
    dc.cumulative.resize(values.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto j = static_cast<Eigen::Index>(i);
        dc.values(j) = values(order[i]);
        dc.durations(j) = weights(order[i]);
        acc += dc.durations(j);
        dc.cumulative(j) = acc;
    }
    return dc;
}

DurationCurve duration_curve(const Eigen::Ref<const Eigen::VectorXd>& values)
{
    return duration_curve(values, Eigen::VectorXd::Ones(values.size()));
}

} // namespace elecsim
