#pragma once

#include <vector>

#include "moch/grid.hpp"

namespace moch {

struct Atom {
    double location = 0.0;
    double mass = 0.0;
};

/// Energy measure mu_t = density dx + sum of atoms. The density is m_x^2 on
/// a grid (trapezoid quadrature); atoms sit where energy has concentrated at
/// a breaking point.
struct EnergyMeasure {
    UniformGrid grid;
    std::vector<double> density;
    std::vector<Atom> atoms;

    [[nodiscard]] double absolutely_continuous_mass() const;
    [[nodiscard]] double total_mass() const;

    /// Throws InvalidInput on negative density, non-positive atom mass,
    /// duplicated atom locations or a size mismatch.
    void validate() const;
};

}  // namespace moch
