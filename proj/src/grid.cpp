#include "moch/grid.hpp"

#include <cmath>
#include <string>

#include "moch/errors.hpp"

namespace moch {

std::vector<double> UniformGrid::abscissae() const {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = x(i);
    return out;
}

UniformGrid UniformGrid::symmetric(double half_width, std::size_t count) {
    if (!(half_width > 0.0) || count < 3) {
        throw InvalidInput("symmetric grid needs half_width > 0 and at least 3 nodes");
    }
    return UniformGrid{-half_width, 2.0 * half_width / static_cast<double>(count - 1), count};
}

void UniformGrid::validate() const {
    if (!(spacing > 0.0) || !std::isfinite(spacing) || !std::isfinite(origin)) {
        throw InvalidInput("grid spacing must be positive and finite, got " + std::to_string(spacing));
    }
    if (count < 3) throw InvalidInput("grid needs at least 3 nodes");
}

}  // namespace moch
