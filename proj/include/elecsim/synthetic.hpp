#pragma once

#include <chrono>
#include <cstdint>

#include "elecsim/timeseries.hpp"

namespace elecsim {

/// Desk-scale stand-in for the national demand and capacity-factor data.
///
/// Demand peaks in winter evenings, solar follows the sun with a seasonal
/// envelope, onshore and offshore wind share a daily weather state that also
/// nudges demand. Days start at `first_day` and are deterministic in `seed`.
TimeSeriesSet synthetic_hourly(int days, std::uint64_t seed,
                               std::chrono::sys_days first_day = std::chrono::sys_days{std::chrono::year{2013} / 1 / 1});

} // namespace elecsim
