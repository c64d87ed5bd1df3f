#pragma once

#include <cstddef>
#include <vector>

namespace moch {

/// Uniform spatial grid x_i = origin + i * spacing, i = 0 .. count-1.
struct UniformGrid {
    double origin = 0.0;
    double spacing = 1.0;
    std::size_t count = 0;

    [[nodiscard]] double x(std::size_t i) const { return origin + static_cast<double>(i) * spacing; }
    [[nodiscard]] double front() const { return origin; }
    [[nodiscard]] double back() const { return x(count - 1); }
    [[nodiscard]] std::vector<double> abscissae() const;

    /// Symmetric grid on [-half_width, half_width] with `count` nodes.
    static UniformGrid symmetric(double half_width, std::size_t count);

    /// Throws InvalidInput unless spacing > 0 and count >= 3.
    void validate() const;
};

}  // namespace moch
