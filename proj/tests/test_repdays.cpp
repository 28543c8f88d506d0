#include <doctest.h>

#include <random>
#include <set>

#include "elecsim/error.hpp"
#include "elecsim/repdays.hpp"
#include "elecsim/synthetic.hpp"
#include "support.hpp"

using namespace elecsim;

namespace {

const auto kDay0 = std::chrono::sys_days{std::chrono::year{2018} / 1 / 1};

/// Days drawn from two well separated blobs; `truth[d]` is the blob of day d.
TimeSeriesSet two_blobs(int a, int b, std::uint64_t seed, std::vector<int>& truth)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    truth.assign(static_cast<std::size_t>(a), 0);
    truth.insert(truth.end(), static_cast<std::size_t>(b), 1);
    std::shuffle(truth.begin(), truth.end(), rng);
    SeriesMatrix v(static_cast<Eigen::Index>(a + b) * 24, 4);
    for (std::size_t d = 0; d < truth.size(); ++d) {
        const bool hi = truth[d] == 1;
        for (int h = 0; h < 24; ++h) {
            const auto r = static_cast<Eigen::Index>(d) * 24 + h;
            v(r, 0) = (hi ? 45000.0 : 20000.0) + 200.0 * noise(rng);
            v(r, 1) = (hi ? 0.6 : 0.1) + 0.01 * noise(rng);
            v(r, 2) = (hi ? 0.7 : 0.2) + 0.01 * noise(rng);
            v(r, 3) = (hi ? 0.8 : 0.3) + 0.01 * noise(rng);
        }
    }
    return TimeSeriesSet::from_values(kDay0, v);
}

} // namespace

TEST_CASE("day matrix layout and normalisation")
{
    auto ts = synthetic_hourly(30, 4);
    auto dm = build_day_matrix(ts, Normalization::None);
    CHECK(dm.features.rows() == 30);
    CHECK(dm.features.cols() == kDayFeatures);
    CHECK(dm.features(3, 1 * 24 + 12) == ts.values(3 * 24 + 12, 1));
    CHECK(from_feature_row(to_feature_row(dm.raw_day(5))) == dm.raw_day(5));

    auto z = build_day_matrix(ts, Normalization::ZScore);
    CHECK(z.features.colwise().mean().cwiseAbs().maxCoeff() < 1e-9);
    for (Eigen::Index d = 0; d < z.days(); ++d)
        CHECK((z.denormalize(z.features.row(d)) - z.raw.row(d)).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("constant series under zscore map to zero")
{
    SeriesMatrix v(72, 4);
    v.col(0).setConstant(30000);
    v.col(1).setConstant(0.5);
    v.col(2).setLinSpaced(0.0, 1.0);
    v.col(3).setConstant(0.0);
    auto dm = build_day_matrix(TimeSeriesSet::from_values(kDay0, v), Normalization::ZScore);
    CHECK(dm.features.leftCols(48).isZero(0));
    CHECK(dm.features.rightCols(24).isZero(0));
    CHECK_FALSE(dm.features.middleCols(48, 24).isZero(0));
}

TEST_CASE("two days under minmax hit 0 and 1 in every column")
{
    SeriesMatrix v(48, 4);
    for (int r = 0; r < 48; ++r)
        for (int s = 0; s < 4; ++s)
            v(r, s) = r < 24 ? 0.1 * s + 0.01 * r : 0.2 + 0.1 * s + 0.001 * r;
    auto dm = build_day_matrix(TimeSeriesSet::from_values(kDay0, v), Normalization::MinMax);
    for (Eigen::Index c = 0; c < dm.features.cols(); ++c) {
        CHECK(dm.features.col(c).minCoeff() == 0.0);
        CHECK(dm.features.col(c).maxCoeff() == 1.0);
    }
}

TEST_CASE("k-means with one cluster is the column mean")
{
    auto ts = synthetic_hourly(40, 2);
    auto dm = build_day_matrix(ts);
    auto c = kmeans(dm, {.k = 1, .seed = 3});
    CHECK(c.weights(0) == 1.0);
    CHECK((c.centroids.row(0) - dm.features.colwise().mean()).cwiseAbs().maxCoeff() < 1e-12);
    auto rep = select_representative(c, dm, Representative::Centroid);
    CHECK((to_feature_row(rep.profiles[0]) - dm.raw.colwise().mean()).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("k equal to the day count gives singleton clusters")
{
    auto ts = synthetic_hourly(12, 5);
    auto dm = build_day_matrix(ts);
    auto c = kmeans(dm, {.k = 12, .seed = 9});
    CHECK(c.objective_history.back() < 1e-18);
    std::set<int> used(c.assignment.begin(), c.assignment.end());
    CHECK(used.size() == 12);
    for (int i = 0; i < 12; ++i)
        CHECK(c.weights(i) == doctest::Approx(1.0 / 12));

    auto med = select_representative(c, dm, Representative::Medoid);
    auto cen = select_representative(c, dm, Representative::Centroid);
    for (int i = 0; i < 12; ++i)
        CHECK((med.profiles[i] - cen.profiles[i]).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("k-means recovers two separated blobs")
{
    std::vector<int> truth;
    auto ts = two_blobs(100, 300, 17, truth);
    auto dm = build_day_matrix(ts);
    auto c = kmeans(dm, {.k = 2, .seed = 1});

    // Oracle: nearest of the two true blob centres, computed from the labels.
    Eigen::RowVectorXd centre[2] = {Eigen::RowVectorXd::Zero(kDayFeatures), Eigen::RowVectorXd::Zero(kDayFeatures)};
    int count[2] = {0, 0};
    for (std::size_t d = 0; d < truth.size(); ++d) {
        centre[truth[d]] += dm.features.row(static_cast<Eigen::Index>(d));
        ++count[truth[d]];
    }
    centre[0] /= count[0];
    centre[1] /= count[1];
    const int lo_cluster = c.assignment[std::find(truth.begin(), truth.end(), 0) - truth.begin()];
    for (std::size_t d = 0; d < truth.size(); ++d) {
        const auto row = dm.features.row(static_cast<Eigen::Index>(d));
        const int nearest = (row - centre[0]).squaredNorm() <= (row - centre[1]).squaredNorm() ? 0 : 1;
        CHECK(nearest == truth[d]);
        CHECK((c.assignment[d] == lo_cluster) == (truth[d] == 0));
    }
    CHECK(c.weights(lo_cluster) == 0.25);
    CHECK(c.weights(1 - lo_cluster) == 0.75);

    auto rep = select_representative(c, dm, Representative::Medoid);
    CHECK(truth[static_cast<std::size_t>(rep.source_day[lo_cluster])] == 0);
    CHECK(truth[static_cast<std::size_t>(rep.source_day[1 - lo_cluster])] == 1);
}

TEST_CASE("k-means invariants and determinism")
{
    auto ts = synthetic_hourly(200, 8);
    auto dm = build_day_matrix(ts);
    for (auto init : {KMeansInit::PlusPlus, KMeansInit::Forgy}) {
        auto a = kmeans(dm, {.k = 8, .seed = 21, .init = init});
        auto b = kmeans(dm, {.k = 8, .seed = 21, .init = init});
        CHECK(a.assignment == b.assignment);
        CHECK(a.centroids == b.centroids);
        CHECK(std::abs(a.weights.sum() - 1.0) < 1e-12);
        for (int i = 0; i < 8; ++i) {
            auto m = a.members(i);
            CHECK_FALSE(m.empty());
            CHECK(std::find(m.begin(), m.end(), a.medoid_day[static_cast<std::size_t>(i)]) != m.end());
        }
        for (std::size_t j = 1; j < a.objective_history.size(); ++j)
            CHECK(a.objective_history[j] <= a.objective_history[j - 1] * (1 + 1e-12));
    }
    CHECK_THROWS_AS(kmeans(dm, {.k = 201}), InputError);
    CHECK_THROWS_AS(kmeans(dm, {.k = 0}), InputError);
}

TEST_CASE("medoid tie goes to the lower day index")
{
    // Two days symmetric about their mean: both are equally near the centroid.
    SeriesMatrix v(48, 4);
    v.topRows(24).setConstant(0.25);
    v.bottomRows(24).setConstant(0.75);
    auto dm = build_day_matrix(TimeSeriesSet::from_values(kDay0, v), Normalization::None);
    auto c = kmeans(dm, {.k = 1});
    auto rep = select_representative(c, dm, Representative::Medoid);
    CHECK(rep.source_day[0] == 0);
    CHECK(rep.profiles[0].isConstant(0.25));
}

TEST_CASE("assembled year hour counts")
{
    DayProfile d = DayProfile::Constant(0.5);
    auto one = assemble_year({d}, Eigen::VectorXd::Ones(1));
    CHECK(one.hour_weights.isConstant(365.0));
    CHECK(one.total_hours() == 8760.0);

    auto two = assemble_year({d, d}, Eigen::VectorXd::Constant(2, 0.5));
    CHECK(two.hour_weights.isConstant(182.5));

    auto ts = synthetic_hourly(400, 3);
    auto dm = build_day_matrix(ts);
    auto c = kmeans(dm, {.k = 8, .seed = 5});
    auto rep = select_representative(c, dm, Representative::Medoid);
    auto year = assemble_year(rep.profiles, rep.weights);
    CHECK(std::abs(year.total_hours() - 8760.0) < 1e-6);

    CHECK_THROWS_AS(assemble_year({d, d}, Eigen::Vector2d(0.5, 0.6)), InputError);
    CHECK_THROWS_AS(assemble_year({d}, Eigen::Vector2d(0.5, 0.5)), InputError);
}

TEST_CASE("representative days file round trip")
{
    auto ts = synthetic_hourly(60, 3);
    auto dm = build_day_matrix(ts);
    auto c = kmeans(dm, {.k = 4, .seed = 5});
    auto rep = select_representative(c, dm, Representative::Centroid);
    auto year = assemble_year(rep.profiles, rep.weights);
    auto dir = testing::scratch_dir("repdays");
    write_representative_days(year, dir / "r.csv");
    auto back = load_representative_days(dir / "r.csv");
    CHECK(back.values == year.values);
    CHECK(back.day_weights == year.day_weights);
    CHECK(back.hour_weights == year.hour_weights);
}

TEST_CASE("duration curves")
{
    auto dc = duration_curve(Eigen::Vector3d(3, 1, 2));
    CHECK(dc.values == Eigen::Vector3d(3, 2, 1));
    CHECK(dc.cumulative == Eigen::Vector3d(1, 2, 3));

    auto flat = duration_curve(Eigen::VectorXd::Constant(5, 7.0));
    CHECK(flat.resample(50).isConstant(7.0));

    auto w = duration_curve(Eigen::Vector2d(2.0, 5.0), Eigen::Vector2d(200.0, 100.0));
    CHECK(w.values == Eigen::Vector2d(5.0, 2.0));
    CHECK(w.total_duration() == 300.0);
    auto grid = w.resample(300);
    CHECK(grid.head(100).isConstant(5.0));
    CHECK(grid.tail(200).isConstant(2.0));
    CHECK(w.at_fraction(1.0 / 3.0) == 5.0);
    CHECK(w.at_fraction(0.34) == 2.0);
}
