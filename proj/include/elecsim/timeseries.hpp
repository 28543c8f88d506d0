#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "elecsim/plant.hpp"

namespace elecsim {

/// Hours x series matrix; columns follow the Series enumeration.
using SeriesMatrix = Eigen::Matrix<double, Eigen::Dynamic, kSeriesCount>;

/// Aligned hourly demand and capacity-factor series made only of complete days.
///
/// Timestamps are naive local hours (no timezone or DST handling). Row `d*24+h`
/// is hour h of day d.
struct TimeSeriesSet {
    std::vector<std::chrono::sys_seconds> timestamps;
    SeriesMatrix values;
    /// Valid hours discarded because their day was incomplete.
    std::size_t dropped_hours = 0;
    /// Rows rejected for out-of-range values.
    std::size_t rejected_rows = 0;

    Eigen::Index hours() const { return values.rows(); }
    Eigen::Index days() const { return values.rows() / 24; }
    auto series(Series s) const { return values.col(static_cast<int>(s)); }

    /// Build a set of consecutive whole days starting at `first_day` 00:00.
    /// Throws InputError if the row count is not a multiple of 24 or values
    /// break the demand/capacity-factor ranges.
    static TimeSeriesSet from_values(std::chrono::sys_days first_day, SeriesMatrix values);
};

/// Parse `timestamp,demand_mw,solar_cf,onshore_cf,offshore_cf` CSV text.
/// Rows with a capacity factor outside [0,1] or negative demand are rejected;
/// more than 1% rejected is an error. Partial days are dropped.
TimeSeriesSet parse_hourly_series(std::string_view csv_text, std::string source = "<memory>");
TimeSeriesSet load_hourly_series(const std::filesystem::path& path);

void write_hourly_series(const TimeSeriesSet& ts, const std::filesystem::path& path);

/// Parse an ISO-8601 local timestamp ("2018-01-01T13:00", optional seconds,
/// space separator accepted). Throws InputError when malformed.
std::chrono::sys_seconds parse_timestamp(std::string_view text);
std::string format_timestamp(std::chrono::sys_seconds t);

} // namespace elecsim
