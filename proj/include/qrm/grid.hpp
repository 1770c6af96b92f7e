#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "qrm/errors.hpp"

namespace qrm {

struct Extent {
    double x1_min = 0.0;
    double x1_max = 1.0;
    double x2_min = 0.0;
    double x2_max = 1.0;
    double t_max  = 1.0;
};

struct Steps {
    double h_x1 = 0.1;
    double h_x2 = 0.1;
    double h_t  = 0.1;
};

/// Uniform space-time grid over a rectangle times (0, T).
///
/// Node (k, m, n) sits at (t_k, x2_m, x1_n) with t_k = k*h_t,
/// x1_n = x1_min + n*h_x1, x2_m = x2_min + m*h_x2. Interval counts are
/// n_x, n_y, n_t; node counts are one larger.
struct SpaceTimeGrid {
    double a = 1.0; // side of the support square SQ(a)
    double T = 0.0;
    double x1_min = 0.0, x1_max = 0.0;
    double x2_min = 0.0, x2_max = 0.0;
    double h_x1 = 0.0, h_x2 = 0.0, h_t = 0.0;
    int n_x = 0, n_y = 0, n_t = 0;
    double lambda_x = 0.0, lambda_y = 0.0, lambda_t = 0.0;

    int nodes_x() const { return n_x + 1; }
    int nodes_y() const { return n_y + 1; }
    int levels() const { return n_t + 1; }
    std::size_t node_count() const {
        return static_cast<std::size_t>(levels()) * nodes_y() * nodes_x();
    }
    std::size_t spatial_node_count() const {
        return static_cast<std::size_t>(nodes_y()) * nodes_x();
    }

    double x1(int n) const { return x1_min + n * h_x1; }
    double x2(int m) const { return x2_min + m * h_x2; }
    double t(int k) const { return k * h_t; }

    bool cfl_ok() const { return lambda_x + lambda_y <= 1.0 + 1e-12; }

    bool same_layout(const SpaceTimeGrid& o) const {
        return n_x == o.n_x && n_y == o.n_y && n_t == o.n_t &&
               x1_min == o.x1_min && x2_min == o.x2_min &&
               h_x1 == o.h_x1 && h_x2 == o.h_x2 && h_t == o.h_t;
    }
};

/// Build a grid from extents and steps. Extents must be integer multiples
/// of the steps to 1e-9 relative tolerance, otherwise NonCommensurateError.
/// A CFL violation is not an error here; the forward solver rejects it.
SpaceTimeGrid make_grid(const Extent& extent, const Steps& steps, double support_a = 1.0);

/// Nodal values over the full space-time grid, (n_t+1) x (n_y+1) x (n_x+1).
class Field {
public:
    Field() = default;
    explicit Field(const SpaceTimeGrid& grid)
        : grid_(grid), values_(grid.node_count(), 0.0) {}

    const SpaceTimeGrid& grid() const { return grid_; }

    double& operator()(int k, int m, int n) { return values_[index(k, m, n)]; }
    double operator()(int k, int m, int n) const { return values_[index(k, m, n)]; }

    std::size_t index(int k, int m, int n) const {
        return (static_cast<std::size_t>(k) * (grid_.n_y + 1) + m) * (grid_.n_x + 1) + n;
    }

    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }

    bool all_finite() const;

private:
    SpaceTimeGrid grid_;
    std::vector<double> values_;
};

/// Nodal values over one time level, (n_y+1) x (n_x+1).
class SpatialField {
public:
    SpatialField() = default;
    SpatialField(int rows, int cols)
        : rows_(rows), cols_(cols),
          values_(static_cast<std::size_t>(rows) * cols, 0.0) {}
    explicit SpatialField(const SpaceTimeGrid& grid)
        : SpatialField(grid.nodes_y(), grid.nodes_x()) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int m, int n) { return values_[static_cast<std::size_t>(m) * cols_ + n]; }
    double operator()(int m, int n) const { return values_[static_cast<std::size_t>(m) * cols_ + n]; }

    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    bool matches(const SpaceTimeGrid& grid) const {
        return rows_ == grid.nodes_y() && cols_ == grid.nodes_x();
    }
    bool all_finite() const;

private:
    int rows_ = 0, cols_ = 0;
    std::vector<double> values_;
};

SpatialField time_slice(const Field& u, int k);

// Lateral boundary segments of the rectangle. Gamma1 is the bottom edge
// (x2 = x2_min), Gamma2 the left (x1 = x1_min), Gamma3 the right
// (x1 = x1_max), Gamma4 the top (x2 = x2_max). Each corner node belongs to
// the lower-indexed segment touching it, so the four segments partition
// the boundary nodes.
enum class Segment : int { Gamma1 = 0, Gamma2 = 1, Gamma3 = 2, Gamma4 = 3 };

constexpr std::array<Segment, 4> kSegments = {Segment::Gamma1, Segment::Gamma2,
                                              Segment::Gamma3, Segment::Gamma4};

std::string segment_name(Segment s);

struct NodeIndex {
    int m = 0;
    int n = 0;
    bool operator==(const NodeIndex&) const = default;
};

/// Number of boundary nodes owned by a segment under the corner convention.
int owned_node_count(const SpaceTimeGrid& grid, Segment s);

/// (m, n) of the j-th owned node of a segment, j in [0, owned_node_count).
NodeIndex segment_node(const SpaceTimeGrid& grid, Segment s, int j);

/// Spatial step along the segment (h_x1 for bottom/top, h_x2 for left/right).
double edge_step(const SpaceTimeGrid& grid, Segment s);

/// Trace f and outward normal derivative g on one segment,
/// stored row-major by time level: value(k, j) = data[k*nodes + j].
struct SegmentTrace {
    std::vector<double> f;
    std::vector<double> g;
};

/// Lateral Cauchy data on the four segments over all time levels.
class CauchyData {
public:
    CauchyData() = default;
    explicit CauchyData(const SpaceTimeGrid& grid);

    const SpaceTimeGrid& grid() const { return grid_; }

    double& f(Segment s, int k, int j) { return seg(s).f[flat(s, k, j)]; }
    double f(Segment s, int k, int j) const { return seg(s).f[flat(s, k, j)]; }
    double& g(Segment s, int k, int j) { return seg(s).g[flat(s, k, j)]; }
    double g(Segment s, int k, int j) const { return seg(s).g[flat(s, k, j)]; }

    SegmentTrace& seg(Segment s) { return segments_[static_cast<int>(s)]; }
    const SegmentTrace& seg(Segment s) const { return segments_[static_cast<int>(s)]; }

    int nodes(Segment s) const { return owned_node_count(grid_, s); }

    /// Sum of squares of every stored sample (both f and g, all segments).
    double energy() const;

private:
    std::size_t flat(Segment s, int k, int j) const {
        return static_cast<std::size_t>(k) * owned_node_count(grid_, s) + j;
    }
    SpaceTimeGrid grid_;
    std::array<SegmentTrace, 4> segments_;
};

// Discrete norms. Every integral uses the full cell weight at every node
// (plain sums, no trapezoid half-weights at edges).

/// h_x1*h_x2 * sum of squared nodal values.
double discrete_l2_sq(const SpatialField& v, const SpaceTimeGrid& grid);

/// L2 plus forward-difference first derivatives in x1 and x2.
double discrete_h1_sq(const SpatialField& v, const SpaceTimeGrid& grid);

/// Cell-weighted sum over the space-time grid of u^2, the three forward
/// first differences squared, and the three pure second differences squared.
double discrete_h2_sq(const Field& u);

} // namespace qrm
