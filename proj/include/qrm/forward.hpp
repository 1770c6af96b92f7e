#pragma once

#include "qrm/grid.hpp"

namespace qrm {

/// Cauchy problem u_tt = Laplacian(u), u(x,0) = phi, u_t(x,0) = psi on a
/// rectangle with zero Dirichlet walls. The rectangle is large enough
/// (typically (-T, a+T)^2) that the wall never influences the region of
/// interest within time T. phi and psi must vanish outside the support
/// square [support_lo, support_hi]^2 and phi must be zero on the wall.
struct ForwardProblem {
    SpaceTimeGrid grid;
    SpatialField phi;
    SpatialField psi;
    double support_lo = 0.0;
    double support_hi = 1.0;
};

/// Build the problem over the enlarged rectangle (-T, a+T)^2 for the
/// given steps, evaluating nothing; support square defaults to (0, a).
ForwardProblem make_forward_problem(const SpaceTimeGrid& grid, SpatialField phi,
                                    SpatialField psi, double support_lo,
                                    double support_hi);

/// Explicit leapfrog solve. u^0 = phi, u^1 = phi + h_t psi + h_t^2/2 *
/// Laplacian_h(phi), then u^{k+1} = 2u^k - u^{k-1} + h_t^2 Laplacian_h(u^k)
/// at interior nodes and 0 on the wall. Requires lambda_x + lambda_y <= 1.
Field solve_forward(const ForwardProblem& problem);

/// Pull the lateral Cauchy data of the inverse domain out of a forward
/// field. The inverse grid must share steps with the forward grid and its
/// nodes must coincide with forward nodes. The trace f is read off
/// directly; the normal derivative g uses a second-order one-sided 3-point
/// stencil through exterior nodes of the forward domain (exact for linear
/// fields). When zero_far_edges is set, f and g on Gamma3 and Gamma4 are
/// written as exact zeros instead, the far-field convention of the
/// quadrant problem.
CauchyData extract_cauchy(const Field& field, const SpaceTimeGrid& inverse_grid,
                          bool zero_far_edges);

} // namespace qrm
