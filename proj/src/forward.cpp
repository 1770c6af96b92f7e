#include "qrm/forward.hpp"

#include <cmath>

namespace qrm {

namespace {

void check_support(const SpatialField& v, const SpaceTimeGrid& g, double lo, double hi,
                   const char* name) {
    constexpr double tol = 1e-12;
    for (int m = 0; m <= g.n_y; ++m) {
        for (int n = 0; n <= g.n_x; ++n) {
            if (v(m, n) == 0.0) continue;
            double x1 = g.x1(n), x2 = g.x2(m);
            bool inside = x1 >= lo - tol && x1 <= hi + tol && x2 >= lo - tol && x2 <= hi + tol;
            if (!inside) {
                throw SupportViolationError(std::string(name) +
                                            " is nonzero outside the support square");
            }
        }
    }
}

void check_wall_zero(const SpatialField& v, const SpaceTimeGrid& g) {
    for (int n = 0; n <= g.n_x; ++n) {
        if (v(0, n) != 0.0 || v(g.n_y, n) != 0.0) {
            throw SupportViolationError("phi must vanish on the Dirichlet wall");
        }
    }
    for (int m = 0; m <= g.n_y; ++m) {
        if (v(m, 0) != 0.0 || v(m, g.n_x) != 0.0) {
            throw SupportViolationError("phi must vanish on the Dirichlet wall");
        }
    }
}

/// Offset of the inverse grid's origin node inside the forward grid.
struct NodeOffset {
    int m = 0;
    int n = 0;
};

NodeOffset locate_subgrid(const SpaceTimeGrid& fwd, const SpaceTimeGrid& inv) {
    auto aligned = [](double delta, double h, double& ratio) {
        ratio = delta / h;
        return std::abs(ratio - std::nearbyint(ratio)) <= 1e-9 * std::max(1.0, std::abs(ratio));
    };
    if (std::abs(fwd.h_x1 - inv.h_x1) > 1e-12 || std::abs(fwd.h_x2 - inv.h_x2) > 1e-12 ||
        std::abs(fwd.h_t - inv.h_t) > 1e-12) {
        throw GridMismatchError("forward and inverse grids must share step sizes");
    }
    if (inv.n_t > fwd.n_t) {
        throw GridMismatchError("inverse grid has more time levels than the forward grid");
    }
    double r_n = 0.0, r_m = 0.0;
    if (!aligned(inv.x1_min - fwd.x1_min, fwd.h_x1, r_n) ||
        !aligned(inv.x2_min - fwd.x2_min, fwd.h_x2, r_m)) {
        throw GridMismatchError("inverse grid nodes do not coincide with forward grid nodes");
    }
    NodeOffset off{static_cast<int>(std::nearbyint(r_m)), static_cast<int>(std::nearbyint(r_n))};
    if (off.m < 0 || off.n < 0 || off.n + inv.n_x > fwd.n_x || off.m + inv.n_y > fwd.n_y) {
        throw GridMismatchError("inverse grid is not contained in the forward grid");
    }
    return off;
}

} // namespace

ForwardProblem make_forward_problem(const SpaceTimeGrid& grid, SpatialField phi,
                                    SpatialField psi, double support_lo,
                                    double support_hi) {
    if (!phi.matches(grid) || !psi.matches(grid)) {
        throw GridMismatchError("initial data shape does not match the forward grid");
    }
    check_support(phi, grid, support_lo, support_hi, "phi");
    check_support(psi, grid, support_lo, support_hi, "psi");
    return ForwardProblem{grid, std::move(phi), std::move(psi), support_lo, support_hi};
}

Field solve_forward(const ForwardProblem& problem) {
    const SpaceTimeGrid& g = problem.grid;
    if (!g.cfl_ok()) {
        throw CflViolationError("lambda_x + lambda_y exceeds 1; explicit scheme unstable");
    }
    if (!problem.phi.matches(g) || !problem.psi.matches(g)) {
        throw GridMismatchError("initial data shape does not match the forward grid");
    }
    check_support(problem.phi, g, problem.support_lo, problem.support_hi, "phi");
    check_support(problem.psi, g, problem.support_lo, problem.support_hi, "psi");
    check_wall_zero(problem.phi, g);

    const double lx = g.lambda_x, ly = g.lambda_y;
    Field u(g);

    for (int m = 0; m <= g.n_y; ++m)
        for (int n = 0; n <= g.n_x; ++n) u(0, m, n) = problem.phi(m, n);

    // Taylor start, second order: u^1 = phi + h_t psi + h_t^2/2 Lap_h(phi).
    if (g.n_t >= 1) {
        for (int m = 1; m < g.n_y; ++m) {
            for (int n = 1; n < g.n_x; ++n) {
                double dxx = problem.phi(m, n + 1) - 2.0 * problem.phi(m, n) + problem.phi(m, n - 1);
                double dyy = problem.phi(m + 1, n) - 2.0 * problem.phi(m, n) + problem.phi(m - 1, n);
                u(1, m, n) = problem.phi(m, n) + g.h_t * problem.psi(m, n) +
                             0.5 * (lx * dxx + ly * dyy);
            }
        }
    }

    for (int k = 1; k < g.n_t; ++k) {
        for (int m = 1; m < g.n_y; ++m) {
            for (int n = 1; n < g.n_x; ++n) {
                double c = u(k, m, n);
                double dxx = u(k, m, n + 1) - 2.0 * c + u(k, m, n - 1);
                double dyy = u(k, m + 1, n) - 2.0 * c + u(k, m - 1, n);
                u(k + 1, m, n) = 2.0 * c - u(k - 1, m, n) + lx * dxx + ly * dyy;
            }
        }
    }

    if (!u.all_finite()) throw NonFiniteError("forward solve produced non-finite values");
    return u;
}

CauchyData extract_cauchy(const Field& field, const SpaceTimeGrid& inverse_grid,
                          bool zero_far_edges) {
    const SpaceTimeGrid& fwd = field.grid();
    NodeOffset off = locate_subgrid(fwd, inverse_grid);

    CauchyData data(inverse_grid);
    for (Segment s : kSegments) {
        bool far_edge = (s == Segment::Gamma3 || s == Segment::Gamma4);
        if (far_edge && zero_far_edges) continue; // stays exactly zero

        // Outward steps (dm, dn) of one grid cell along the normal.
        int dm = 0, dn = 0;
        double h_normal = 0.0;
        switch (s) {
            case Segment::Gamma1: dm = -1; h_normal = fwd.h_x2; break;
            case Segment::Gamma2: dn = -1; h_normal = fwd.h_x1; break;
            case Segment::Gamma3: dn = +1; h_normal = fwd.h_x1; break;
            case Segment::Gamma4: dm = +1; h_normal = fwd.h_x2; break;
        }

        const int count = owned_node_count(inverse_grid, s);
        for (int j = 0; j < count; ++j) {
            NodeIndex node = segment_node(inverse_grid, s, j);
            int m0 = off.m + node.m, n0 = off.n + node.n;
            int m2 = m0 + 2 * dm, n2 = n0 + 2 * dn;
            if (m2 < 0 || m2 > fwd.n_y || n2 < 0 || n2 > fwd.n_x) {
                throw GridMismatchError(
                    "forward domain margin too small for the normal-derivative stencil on " +
                    segment_name(s));
            }
            for (int k = 0; k <= inverse_grid.n_t; ++k) {
                double u0 = field(k, m0, n0);
                double u1 = field(k, m0 + dm, n0 + dn);
                double u2 = field(k, m2, n2);
                data.f(s, k, j) = u0;
                data.g(s, k, j) = (-3.0 * u0 + 4.0 * u1 - u2) / (2.0 * h_normal);
            }
        }
    }
    return data;
}

} // namespace qrm
