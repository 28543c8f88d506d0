#pragma once

#include <cstddef>
#include <span>

#include "elecsim/error.hpp"

namespace elecsim {

/// Net present value of yearly net cash flows, the first undiscounted:
/// sum over t of flows[t] / (1 + rate)^t.
template <typename Scalar>
Scalar npv(std::span<const Scalar> flows, Scalar rate)
{
    if (!(rate > Scalar(-1)))
        throw InputError("discount rate must exceed -1");
    Scalar total(0);
    Scalar factor(1);
    const Scalar step = Scalar(1) / (Scalar(1) + rate);
    for (std::size_t t = 0; t < flows.size(); ++t) {
        total += flows[t] * factor;
        factor *= step;
    }
    return total;
}

} // namespace elecsim
