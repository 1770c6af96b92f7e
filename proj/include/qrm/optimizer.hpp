#pragma once

#include <optional>
#include <vector>

#include "qrm/functional.hpp"

namespace qrm {

struct CgConfig {
    int max_iters = 300;            // iteration count doubles as regularizer
    std::optional<double> grad_tol; // early stop on squared gradient norm; off by default
    int restart_period = 50;        // steepest-descent restart cadence
};

/// One row per iterate: j_value and grad_norm_sq at the iterate, alpha the
/// step that produced it (0 for the start point).
struct IterationRecord {
    int iter = 0;
    double j_value = 0.0;
    double grad_norm_sq = 0.0;
    double alpha = 0.0;
};

struct ConvergenceHistory {
    std::vector<IterationRecord> entries;
};

struct MinimizeResult {
    Field field;
    ConvergenceHistory history;
    FunctionalBreakdown final_breakdown;
};

/// Exact step along d from u for the quadratic functional:
/// alpha = -(g . d) / (d . H d), with the curvature obtained from one extra
/// gradient evaluation at u + d. g must be the gradient at u.
double exact_step(const Field& g, const Field& d, const FunctionalSpec& spec, const Field& u);

/// Polak-Ribiere+ conjugate gradient from the zero field with exact line
/// search. Monotone in J by construction; if roundoff ever stops progress
/// the run terminates early rather than letting J creep upward.
MinimizeResult minimize(const FunctionalSpec& spec, const CgConfig& config);

} // namespace qrm
