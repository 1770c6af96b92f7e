#include "qrm/phantoms.hpp"

#include <cmath>
#include <numbers>

namespace qrm {

namespace {

constexpr double kInsideTol = 1e-12;

bool inside_unit_square(double x1, double x2) {
    return x1 >= -kInsideTol && x1 <= 1.0 + kInsideTol &&
           x2 >= -kInsideTol && x2 <= 1.0 + kInsideTol;
}

void require_covers_unit_square(const SpaceTimeGrid& g) {
    if (g.x1_min > kInsideTol || g.x1_max < 1.0 - kInsideTol ||
        g.x2_min > kInsideTol || g.x2_max < 1.0 - kInsideTol) {
        throw GridMismatchError("grid does not cover the support square SQ(1)");
    }
}

int node_at(double coord, double lo, double h, const char* what) {
    double ratio = (coord - lo) / h;
    double rounded = std::nearbyint(ratio);
    if (std::abs(ratio - rounded) > 1e-9) {
        throw NodeMisalignedError(std::string(what) + " is not a grid node");
    }
    return static_cast<int>(rounded);
}

} // namespace

std::string phantom_name(Phantom p) {
    switch (p) {
        case Phantom::Zero: return "zero";
        case Phantom::SineFull: return "sine-full";
        case Phantom::SineShifted: return "sine-shifted";
        case Phantom::DeltaPair: return "delta-pair";
    }
    std::abort();
}

Phantom phantom_from_name(const std::string& name) {
    if (name == "zero") return Phantom::Zero;
    if (name == "sine-full") return Phantom::SineFull;
    if (name == "sine-shifted") return Phantom::SineShifted;
    if (name == "delta-pair") return Phantom::DeltaPair;
    throw ConfigError("unknown phantom: " + name +
                      " (valid: zero, sine-full, sine-shifted, delta-pair)");
}

SpatialField sine_full(const SpaceTimeGrid& grid) {
    require_covers_unit_square(grid);
    constexpr double two_pi = 2.0 * std::numbers::pi;
    SpatialField v(grid);
    for (int m = 0; m <= grid.n_y; ++m) {
        for (int n = 0; n <= grid.n_x; ++n) {
            double x1 = grid.x1(n), x2 = grid.x2(m);
            if (inside_unit_square(x1, x2)) {
                v(m, n) = std::sin(two_pi * x1) * std::sin(two_pi * x2);
            }
        }
    }
    return v;
}

SpatialField sine_shifted(const SpaceTimeGrid& grid) {
    require_covers_unit_square(grid);
    constexpr double half_pi = 0.5 * std::numbers::pi;
    SpatialField v(grid);
    for (int m = 0; m <= grid.n_y; ++m) {
        for (int n = 0; n <= grid.n_x; ++n) {
            double x1 = grid.x1(n), x2 = grid.x2(m);
            if (inside_unit_square(x1, x2)) {
                v(m, n) = std::sin(half_pi * (x1 - 0.5)) * std::sin(half_pi * (x2 - 0.5));
            }
        }
    }
    return v;
}

SpatialField delta_pair(const SpaceTimeGrid& grid) {
    require_covers_unit_square(grid);
    SpatialField v(grid);
    const double height = 3.0 / (4.0 * grid.h_x1 * grid.h_x2);
    for (double c : {0.4, 0.7}) {
        int n = node_at(c, grid.x1_min, grid.h_x1, "spike center x1");
        int m = node_at(c, grid.x2_min, grid.h_x2, "spike center x2");
        if (n <= 0 || n >= grid.n_x || m <= 0 || m >= grid.n_y) {
            throw NodeMisalignedError("spike center lies on or outside the grid boundary");
        }
        v(m, n) = height;
    }
    return v;
}

SpatialField make_phantom(Phantom p, const SpaceTimeGrid& grid) {
    switch (p) {
        case Phantom::Zero: return SpatialField(grid);
        case Phantom::SineFull: return sine_full(grid);
        case Phantom::SineShifted: return sine_shifted(grid);
        case Phantom::DeltaPair: return delta_pair(grid);
    }
    std::abort();
}

} // namespace qrm
