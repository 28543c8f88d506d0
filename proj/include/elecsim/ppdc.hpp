#pragma once

namespace elecsim {

/// Linear predicted price duration curve: expected price = slope * demand + intercept.
struct PPDC {
    double m = 0.0; ///< currency/MWh per MW of demand
    double c = 0.0; ///< currency/MWh

    double price(double demand_mw) const { return m * demand_mw + c; }

    friend bool operator==(const PPDC&, const PPDC&) = default;
};

} // namespace elecsim
