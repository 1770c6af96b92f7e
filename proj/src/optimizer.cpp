#include "qrm/optimizer.hpp"

#include <cmath>

namespace qrm {

namespace {

double dot(const Field& a, const Field& b) {
    const std::vector<double>& x = a.values();
    const std::vector<double>& y = b.values();
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
    return acc;
}

// Curvature d.Hd of the quadratic form, via gradient(u + d) - gradient(u).
double curvature(const Field& grad_u, const Field& d, const FunctionalSpec& spec,
                 const Field& u, Field& scratch_point, Field& scratch_grad) {
    const std::vector<double>& uv = u.values();
    const std::vector<double>& dv = d.values();
    std::vector<double>& pv = scratch_point.values();
    for (std::size_t i = 0; i < uv.size(); ++i) pv[i] = uv[i] + dv[i];
    evaluate_with_gradient(scratch_point, spec, &scratch_grad);

    const std::vector<double>& gv = grad_u.values();
    const std::vector<double>& hv = scratch_grad.values();
    double acc = 0.0;
    for (std::size_t i = 0; i < dv.size(); ++i) acc += dv[i] * (hv[i] - gv[i]);
    return acc;
}

} // namespace

double exact_step(const Field& g, const Field& d, const FunctionalSpec& spec, const Field& u) {
    Field point(spec.grid), hgrad(spec.grid);
    double d_hd = curvature(g, d, spec, u, point, hgrad);
    if (!(d_hd > 0.0)) {
        throw DegenerateCurvatureError("direction has non-positive curvature");
    }
    return -dot(g, d) / d_hd;
}

MinimizeResult minimize(const FunctionalSpec& spec, const CgConfig& config) {
    if (config.max_iters < 1) throw ConfigError("max_iters must be at least 1");

    Field u(spec.grid);
    Field grad(spec.grid), grad_prev(spec.grid), dir(spec.grid);
    Field point(spec.grid), hgrad(spec.grid);

    FunctionalBreakdown bd = evaluate_with_gradient(u, spec, &grad);
    double gnsq = dot(grad, grad);

    ConvergenceHistory history;
    history.entries.push_back({0, bd.total, gnsq, 0.0});

    int since_restart = 0;
    for (int it = 1; it <= config.max_iters; ++it) {
        if (gnsq == 0.0) break;
        if (config.grad_tol && gnsq <= *config.grad_tol) break;

        // Direction: steepest descent at the start, after each restart
        // window, and whenever PR+ would lose descent.
        bool restart = (it == 1) || (since_restart >= config.restart_period);
        if (!restart) {
            double gnsq_prev = dot(grad_prev, grad_prev);
            double beta = (gnsq - dot(grad, grad_prev)) / gnsq_prev;
            if (beta < 0.0) beta = 0.0;
            std::vector<double>& dv = dir.values();
            const std::vector<double>& gv = grad.values();
            for (std::size_t i = 0; i < dv.size(); ++i) dv[i] = -gv[i] + beta * dv[i];
        }
        double gd;
        if (restart) {
            std::vector<double>& dv = dir.values();
            const std::vector<double>& gv = grad.values();
            for (std::size_t i = 0; i < dv.size(); ++i) dv[i] = -gv[i];
            since_restart = 0;
            gd = -gnsq;
        } else {
            gd = dot(grad, dir);
            if (gd >= 0.0) {
                // Roundoff produced an ascent direction; fall back.
                std::vector<double>& dv = dir.values();
                const std::vector<double>& gv = grad.values();
                for (std::size_t i = 0; i < dv.size(); ++i) dv[i] = -gv[i];
                since_restart = 0;
                gd = -gnsq;
            }
        }
        if (gd >= 0.0) {
            throw NonDescentDirectionError("steepest descent is not a descent direction");
        }

        double d_hd = curvature(grad, dir, spec, u, point, hgrad);
        if (!(d_hd > 0.0)) {
            throw DegenerateCurvatureError("direction has non-positive curvature");
        }
        double alpha = -gd / d_hd;
        if (!std::isfinite(alpha)) throw NonFiniteError("step size is not finite");

        // point is free after curvature(); keep the pre-step iterate there
        // so a rejected step can be restored bit-exactly.
        std::vector<double>& uv = u.values();
        const std::vector<double>& dv = dir.values();
        point.values() = uv;
        for (std::size_t i = 0; i < uv.size(); ++i) uv[i] += alpha * dv[i];

        std::swap(grad, grad_prev);
        FunctionalBreakdown bd_new = evaluate_with_gradient(u, spec, &grad);
        if (!std::isfinite(bd_new.total)) throw NonFiniteError("functional value is not finite");

        if (bd_new.total > bd.total) {
            // Progress below roundoff; undo the step and stop.
            uv = point.values();
            std::swap(grad, grad_prev);
            break;
        }

        bd = bd_new;
        gnsq = dot(grad, grad);
        history.entries.push_back({it, bd.total, gnsq, alpha});
        ++since_restart;
    }

    return MinimizeResult{std::move(u), std::move(history), bd};
}

} // namespace qrm
