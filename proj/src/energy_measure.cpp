#include "moch/energy_measure.hpp"

#include <algorithm>
#include <cmath>

#include "moch/errors.hpp"
#include "moch/numerics.hpp"

namespace moch {

double EnergyMeasure::absolutely_continuous_mass() const { return numerics::trapezoid(density, grid.spacing); }

double EnergyMeasure::total_mass() const {
    double mass = absolutely_continuous_mass();
    for (const auto& a : atoms) mass += a.mass;
    return mass;
}

void EnergyMeasure::validate() const {
    grid.validate();
    if (density.size() != grid.count) throw InvalidInput("measure density does not match its grid");
    if (std::any_of(density.begin(), density.end(), [](double d) { return !(d >= 0.0) || !std::isfinite(d); })) {
        throw InvalidInput("measure density must be finite and nonnegative");
    }
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (!(atoms[i].mass > 0.0) || !std::isfinite(atoms[i].location)) {
            throw InvalidInput("atoms need positive mass and a finite location");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (atoms[j].location == atoms[i].location) throw InvalidInput("two atoms share a location");
        }
    }
}

}  // namespace moch
