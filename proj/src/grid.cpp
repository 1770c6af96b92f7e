#include "qrm/grid.hpp"

#include <cmath>
#include <cstdlib>

namespace qrm {

namespace {

int interval_count(double length, double step, const char* axis) {
    double ratio = length / step;
    double rounded = std::nearbyint(ratio);
    if (rounded < 0.5 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, std::abs(ratio))) {
        throw NonCommensurateError(std::string("extent along ") + axis +
                                   " is not an integer multiple of the step");
    }
    return static_cast<int>(rounded);
}

} // namespace

SpaceTimeGrid make_grid(const Extent& extent, const Steps& steps, double support_a) {
    if (steps.h_x1 <= 0.0 || steps.h_x2 <= 0.0 || steps.h_t <= 0.0) {
        throw NonCommensurateError("steps must be strictly positive");
    }
    if (extent.x1_max <= extent.x1_min || extent.x2_max <= extent.x2_min || extent.t_max <= 0.0) {
        throw NonCommensurateError("extent must be nonempty");
    }

    SpaceTimeGrid g;
    g.a = support_a;
    g.x1_min = extent.x1_min;
    g.x1_max = extent.x1_max;
    g.x2_min = extent.x2_min;
    g.x2_max = extent.x2_max;
    g.T = extent.t_max;
    g.h_x1 = steps.h_x1;
    g.h_x2 = steps.h_x2;
    g.h_t = steps.h_t;
    g.n_x = interval_count(extent.x1_max - extent.x1_min, steps.h_x1, "x1");
    g.n_y = interval_count(extent.x2_max - extent.x2_min, steps.h_x2, "x2");
    g.n_t = interval_count(extent.t_max, steps.h_t, "t");
    g.lambda_x = (steps.h_t * steps.h_t) / (steps.h_x1 * steps.h_x1);
    g.lambda_y = (steps.h_t * steps.h_t) / (steps.h_x2 * steps.h_x2);
    g.lambda_t = 2.0 * (1.0 - g.lambda_x - g.lambda_y);
    return g;
}

bool Field::all_finite() const {
    for (double v : values_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

bool SpatialField::all_finite() const {
    for (double v : values_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

SpatialField time_slice(const Field& u, int k) {
    const SpaceTimeGrid& g = u.grid();
    if (k < 0 || k > g.n_t) throw IndexOutOfInteriorError("time level out of range");
    SpatialField s(g);
    for (int m = 0; m <= g.n_y; ++m) {
        for (int n = 0; n <= g.n_x; ++n) {
            s(m, n) = u(k, m, n);
        }
    }
    return s;
}

std::string segment_name(Segment s) {
    switch (s) {
        case Segment::Gamma1: return "gamma1";
        case Segment::Gamma2: return "gamma2";
        case Segment::Gamma3: return "gamma3";
        case Segment::Gamma4: return "gamma4";
    }
    std::abort();
}

int owned_node_count(const SpaceTimeGrid& grid, Segment s) {
    switch (s) {
        case Segment::Gamma1: return grid.n_x + 1; // both bottom corners
        case Segment::Gamma2: return grid.n_y;     // left edge minus bottom corner
        case Segment::Gamma3: return grid.n_y;     // right edge minus bottom corner
        case Segment::Gamma4: return grid.n_x - 1; // top edge minus both corners
    }
    std::abort();
}

NodeIndex segment_node(const SpaceTimeGrid& grid, Segment s, int j) {
    if (j < 0 || j >= owned_node_count(grid, s)) {
        throw IndexOutOfInteriorError("segment node index out of range");
    }
    switch (s) {
        case Segment::Gamma1: return {0, j};
        case Segment::Gamma2: return {j + 1, 0};
        case Segment::Gamma3: return {j + 1, grid.n_x};
        case Segment::Gamma4: return {grid.n_y, j + 1};
    }
    std::abort();
}

double edge_step(const SpaceTimeGrid& grid, Segment s) {
    return (s == Segment::Gamma1 || s == Segment::Gamma4) ? grid.h_x1 : grid.h_x2;
}

CauchyData::CauchyData(const SpaceTimeGrid& grid) : grid_(grid) {
    for (Segment s : kSegments) {
        std::size_t sz = static_cast<std::size_t>(grid.levels()) * owned_node_count(grid, s);
        seg(s).f.assign(sz, 0.0);
        seg(s).g.assign(sz, 0.0);
    }
}

double CauchyData::energy() const {
    double acc = 0.0;
    for (Segment s : kSegments) {
        for (double v : seg(s).f) acc += v * v;
        for (double v : seg(s).g) acc += v * v;
    }
    return acc;
}

double discrete_l2_sq(const SpatialField& v, const SpaceTimeGrid& grid) {
    if (!v.matches(grid)) throw GridMismatchError("spatial field shape does not match grid");
    double acc = 0.0;
    for (double x : v.values()) acc += x * x;
    return grid.h_x1 * grid.h_x2 * acc;
}

double discrete_h1_sq(const SpatialField& v, const SpaceTimeGrid& grid) {
    if (!v.matches(grid)) throw GridMismatchError("spatial field shape does not match grid");
    double acc = 0.0;
    for (double x : v.values()) acc += x * x;
    for (int m = 0; m <= grid.n_y; ++m) {
        for (int n = 0; n < grid.n_x; ++n) {
            double d = (v(m, n + 1) - v(m, n)) / grid.h_x1;
            acc += d * d;
        }
    }
    for (int m = 0; m < grid.n_y; ++m) {
        for (int n = 0; n <= grid.n_x; ++n) {
            double d = (v(m + 1, n) - v(m, n)) / grid.h_x2;
            acc += d * d;
        }
    }
    return grid.h_x1 * grid.h_x2 * acc;
}

double discrete_h2_sq(const Field& u) {
    const SpaceTimeGrid& g = u.grid();
    const double ht = g.h_t, hx = g.h_x1, hy = g.h_x2;
    double acc = 0.0;

    for (double x : u.values()) acc += x * x;

    // forward first differences
    for (int k = 0; k < g.n_t; ++k)
        for (int m = 0; m <= g.n_y; ++m)
            for (int n = 0; n <= g.n_x; ++n) {
                double d = (u(k + 1, m, n) - u(k, m, n)) / ht;
                acc += d * d;
            }
    for (int k = 0; k <= g.n_t; ++k)
        for (int m = 0; m <= g.n_y; ++m)
            for (int n = 0; n < g.n_x; ++n) {
                double d = (u(k, m, n + 1) - u(k, m, n)) / hx;
                acc += d * d;
            }
    for (int k = 0; k <= g.n_t; ++k)
        for (int m = 0; m < g.n_y; ++m)
            for (int n = 0; n <= g.n_x; ++n) {
                double d = (u(k, m + 1, n) - u(k, m, n)) / hy;
                acc += d * d;
            }

    // pure second differences
    const double ht2 = ht * ht, hx2 = hx * hx, hy2 = hy * hy;
    for (int k = 1; k < g.n_t; ++k)
        for (int m = 0; m <= g.n_y; ++m)
            for (int n = 0; n <= g.n_x; ++n) {
                double d = (u(k + 1, m, n) - 2.0 * u(k, m, n) + u(k - 1, m, n)) / ht2;
                acc += d * d;
            }
    for (int k = 0; k <= g.n_t; ++k)
        for (int m = 0; m <= g.n_y; ++m)
            for (int n = 1; n < g.n_x; ++n) {
                double d = (u(k, m, n + 1) - 2.0 * u(k, m, n) + u(k, m, n - 1)) / hx2;
                acc += d * d;
            }
    for (int k = 0; k <= g.n_t; ++k)
        for (int m = 1; m < g.n_y; ++m)
            for (int n = 0; n <= g.n_x; ++n) {
                double d = (u(k, m + 1, n) - 2.0 * u(k, m, n) + u(k, m - 1, n)) / hy2;
                acc += d * d;
            }

    return ht * hx * hy * acc;
}

} // namespace qrm
