#include "elecsim/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "elecsim/error.hpp"
#include "elecsim/rng.hpp"

namespace elecsim {

TimeSeriesSet synthetic_hourly(int days, std::uint64_t seed, std::chrono::sys_days first_day)
{
    if (days < 1)
        throw InputError("synthetic_hourly: need at least one day");
    constexpr double pi = std::numbers::pi;
    auto rng = make_rng(seed, {0x73796e});
    std::normal_distribution<double> n01(0.0, 1.0);

    SeriesMatrix v(static_cast<Eigen::Index>(days) * 24, kSeriesCount);
    double weather = 0.0; // AR(1) daily wind anomaly
    for (int d = 0; d < days; ++d) {
        const double winter = std::cos(2.0 * pi * d / 365.0); // +1 in January
        weather = 0.7 * weather + 0.3 * n01(rng);
        const double cloud = std::clamp(0.75 + 0.2 * n01(rng), 0.2, 1.0);
        const bool weekend = (d % 7) >= 5;
        for (int h = 0; h < 24; ++h) {
            const auto r = static_cast<Eigen::Index>(d) * 24 + h;
            const double daily = 0.5 * (1.0 - std::cos(2.0 * pi * (h - 4) / 24.0));
            const double evening = std::exp(-0.5 * std::pow((h - 18) / 1.5, 2.0));

            const double wind = std::clamp(0.33 + 0.12 * winter + 0.25 * weather + 0.03 * n01(rng), 0.0, 1.0);
            const double offshore = std::clamp(0.08 + 1.05 * wind + 0.02 * n01(rng), 0.0, 1.0);
            const double sun = std::max(0.0, std::sin(pi * (h - 6 + 2.0 * winter) / (12.0 - 4.0 * winter)));
            const double solar = std::clamp(sun * (0.55 - 0.2 * winter) * cloud, 0.0, 1.0);

            double demand = 31000.0 + 6000.0 * winter + 9000.0 * daily + 4000.0 * evening * (1.0 + 0.5 * winter) -
                            (weekend ? 3500.0 : 0.0) + 1500.0 * weather + 600.0 * n01(rng);
            v(r, static_cast<int>(Series::Demand)) = std::max(0.0, demand);
            v(r, static_cast<int>(Series::Solar)) = solar;
            v(r, static_cast<int>(Series::Onshore)) = wind;
            v(r, static_cast<int>(Series::Offshore)) = offshore;
        }
    }
    return TimeSeriesSet::from_values(first_day, std::move(v));
}

} // namespace elecsim
