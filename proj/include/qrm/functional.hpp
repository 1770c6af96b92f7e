#pragma once

#include <utility>

#include "qrm/grid.hpp"

namespace qrm {

/// Which initial condition is unknown. Phi: recover u(x,0) with u_t(x,0)
/// known; Psi: recover u_t(x,0) with u(x,0) known.
enum class ProblemKind { Phi, Psi };

std::string kind_name(ProblemKind k);
ProblemKind kind_from_name(const std::string& name);

struct Weights {
    double epsilon = 1e-6; // regularization parameter, > 0
    double w_trace = 1.0;  // balance on the boundary trace misfit
    double w_flux = 1.0;   // balance on the normal-derivative misfit
    double w_init = 1.0;   // balance on the known-initial-condition penalty
};

/// Everything needed to evaluate the regularized least-squares functional:
/// the grid over Omega x (0,T), the problem kind, the weights, the measured
/// Cauchy data, and the known initial condition (psi for the Phi problem,
/// phi for the Psi problem).
struct FunctionalSpec {
    SpaceTimeGrid grid;
    ProblemKind kind = ProblemKind::Phi;
    Weights weights;
    CauchyData data;
    SpatialField known_init;
};

/// Unweighted values of the five terms plus the weighted total:
/// total = residual + w_trace*trace + w_flux*flux + w_init*init
///       + epsilon*regularization.
struct FunctionalBreakdown {
    double residual = 0.0;
    double trace_misfit = 0.0;
    double flux_misfit = 0.0;
    double init_penalty = 0.0;
    double regularization = 0.0;
    double total = 0.0;
};

/// Wave-operator stencil at an interior node, in units of h_t^2:
/// second time difference minus lambda-weighted spatial second differences.
/// Exactly zero on constant fields and fields linear in one coordinate.
double residual_stencil(const Field& u, int k, int m, int n);

/// (h_t h_x2 h_x1 / h_t^4) * sum of the squared stencil over interior nodes.
double residual_term(const Field& u);

/// Boundary quadratures h_t * h_edge * sum over segments, time levels and
/// owned nodes of (u - f)^2 and (u_nu - g)^2. The normal derivative here is
/// the first-order interior two-point difference, deliberately different
/// from the stencil used to generate the data.
std::pair<double, double> boundary_misfit(const Field& u, const CauchyData& data);

/// Phi problem: ||(u^1 - u^0)/h_t - psi_known||_L2^2.
/// Psi problem: ||u^0 - phi_known||_H1^2.
double init_penalty(const Field& u, const FunctionalSpec& spec);

FunctionalBreakdown evaluate(const Field& u, const FunctionalSpec& spec);

/// Exact gradient of evaluate(.).total with respect to every nodal value.
Field gradient(const Field& u, const FunctionalSpec& spec);

/// Single fused pass computing the breakdown and, if grad is non-null,
/// accumulating the exact gradient into it (grad is overwritten).
FunctionalBreakdown evaluate_with_gradient(const Field& u, const FunctionalSpec& spec,
                                           Field* grad);

} // namespace qrm
