#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "elecsim/plant.hpp"

namespace elecsim {

struct CostRow {
    PlantType type = PlantType::CCGT;
    double capacity_mw = 0.0;
    int year = 0;
    PlantCosts costs;

    friend bool operator==(const CostRow&, const CostRow&) = default;
};

/// Plant cost records keyed by (type, capacity, year). Keys are unique.
class CostTable {
public:
    static CostTable load(const std::filesystem::path& path);
    static CostTable parse(std::string_view csv_text, std::string source = "<memory>");

    /// Throws InputError on a duplicate key or an invalid record.
    void add(const CostRow& row);

    std::span<const CostRow> rows() const { return rows_; }
    std::vector<const CostRow*> rows_for(PlantType type) const;
    bool has_type(PlantType type) const;

    /// Serialise with one row per year (composite year cells are not re-formed).
    std::string to_csv() const;
    void save(const std::filesystem::path& path) const;

private:
    std::vector<CostRow> rows_;
};

/// Expand a year cell such as "2018/20/25" into {2018, 2020, 2025}.
std::vector<int> expand_year_cell(std::string_view cell);

enum class CostResolution { Exact, Interpolated, Extrapolated };

struct CostLookup {
    PlantCosts costs;
    CostResolution resolution = CostResolution::Exact;
    /// Human-readable account of which rows were blended and how.
    std::string trace;
};

/// Resolve costs for a plant of the given type, capacity and vintage.
///
/// An exact key returns the stored row. Otherwise each field is interpolated
/// linearly across capacity at the two bracketing years, and the two results
/// are then interpolated across year. Targets outside the available
/// capacities or years are clamped to the nearest edge.
CostLookup lookup_plant_costs(const CostTable& table, PlantType type, double capacity_mw, int year);

} // namespace elecsim
