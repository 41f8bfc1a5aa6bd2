#pragma once

#include <stdexcept>

namespace lureid {

/// Global bounds on the difference quotients of a static map.
struct SectorBounds {
    double rho1 = 0.0;
    double rho2 = 0.0;

    SectorBounds() = default;
    SectorBounds(double lo, double hi) : rho1(lo), rho2(hi) {
        if (!(rho1 <= rho2))
            throw std::invalid_argument("SectorBounds: rho1 must not exceed rho2");
    }

    SectorBounds shifted(double k) const { return {rho1 + k, rho2 + k}; }

    friend bool operator==(const SectorBounds&, const SectorBounds&) = default;
};

}  // namespace lureid
