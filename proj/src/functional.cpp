#include "qrm/functional.hpp"

#include <cmath>
#include <cstdlib>

namespace qrm {

std::string kind_name(ProblemKind k) {
    return k == ProblemKind::Phi ? "phi" : "psi";
}

ProblemKind kind_from_name(const std::string& name) {
    if (name == "phi") return ProblemKind::Phi;
    if (name == "psi") return ProblemKind::Psi;
    throw ConfigError("unknown problem kind: " + name + " (valid: phi, psi)");
}

namespace {

void validate(const Field& u, const FunctionalSpec& spec) {
    if (!u.grid().same_layout(spec.grid)) {
        throw GridMismatchError("field grid does not match the functional grid");
    }
    if (!spec.data.grid().same_layout(spec.grid)) {
        throw GridMismatchError("Cauchy data grid does not match the functional grid");
    }
    if (!spec.known_init.matches(spec.grid)) {
        throw GridMismatchError("known initial condition shape does not match the grid");
    }
    if (spec.weights.epsilon <= 0.0 || spec.weights.w_trace < 0.0 ||
        spec.weights.w_flux < 0.0 || spec.weights.w_init < 0.0) {
        throw ConfigError("weights must be nonnegative and epsilon positive");
    }
}

// Interior neighbor used by the one-sided boundary normal derivative.
NodeIndex inner_neighbor(Segment s, NodeIndex node) {
    switch (s) {
        case Segment::Gamma1: return {node.m + 1, node.n};
        case Segment::Gamma2: return {node.m, node.n + 1};
        case Segment::Gamma3: return {node.m, node.n - 1};
        case Segment::Gamma4: return {node.m - 1, node.n};
    }
    std::abort();
}

double normal_step(const SpaceTimeGrid& g, Segment s) {
    return (s == Segment::Gamma1 || s == Segment::Gamma4) ? g.h_x2 : g.h_x1;
}

} // namespace

double residual_stencil(const Field& u, int k, int m, int n) {
    const SpaceTimeGrid& g = u.grid();
    if (k < 1 || k > g.n_t - 1 || m < 1 || m > g.n_y - 1 || n < 1 || n > g.n_x - 1) {
        throw IndexOutOfInteriorError("residual stencil requires an interior node");
    }
    double dtt = u(k + 1, m, n) - 2.0 * u(k, m, n) + u(k - 1, m, n);
    double dyy = u(k, m + 1, n) - 2.0 * u(k, m, n) + u(k, m - 1, n);
    double dxx = u(k, m, n + 1) - 2.0 * u(k, m, n) + u(k, m, n - 1);
    return dtt - g.lambda_y * dyy - g.lambda_x * dxx;
}

double residual_term(const Field& u) {
    FunctionalSpec spec;
    spec.grid = u.grid();
    spec.data = CauchyData(spec.grid);
    spec.known_init = SpatialField(spec.grid);
    return evaluate_with_gradient(u, spec, nullptr).residual;
}

std::pair<double, double> boundary_misfit(const Field& u, const CauchyData& data) {
    FunctionalSpec spec;
    spec.grid = u.grid();
    spec.data = data;
    spec.known_init = SpatialField(spec.grid);
    FunctionalBreakdown b = evaluate_with_gradient(u, spec, nullptr);
    return {b.trace_misfit, b.flux_misfit};
}

double init_penalty(const Field& u, const FunctionalSpec& spec) {
    return evaluate_with_gradient(u, spec, nullptr).init_penalty;
}

FunctionalBreakdown evaluate(const Field& u, const FunctionalSpec& spec) {
    return evaluate_with_gradient(u, spec, nullptr);
}

Field gradient(const Field& u, const FunctionalSpec& spec) {
    Field grad(u.grid());
    evaluate_with_gradient(u, spec, &grad);
    return grad;
}

FunctionalBreakdown evaluate_with_gradient(const Field& u, const FunctionalSpec& spec,
                                           Field* grad) {
    validate(u, spec);
    const SpaceTimeGrid& g = spec.grid;
    const Weights& w = spec.weights;
    if (grad) {
        if (!grad->grid().same_layout(g)) *grad = Field(g);
        std::fill(grad->values().begin(), grad->values().end(), 0.0);
    }

    FunctionalBreakdown out;

    // PDE residual over interior nodes.
    {
        const double scale = g.h_x1 * g.h_x2 / (g.h_t * g.h_t * g.h_t);
        const double lx = g.lambda_x, ly = g.lambda_y;
        const double center_coeff = -2.0 + 2.0 * ly + 2.0 * lx;
        double acc = 0.0;
        for (int k = 1; k < g.n_t; ++k) {
            for (int m = 1; m < g.n_y; ++m) {
                for (int n = 1; n < g.n_x; ++n) {
                    double c = u(k, m, n);
                    double dtt = u(k + 1, m, n) - 2.0 * c + u(k - 1, m, n);
                    double dyy = u(k, m + 1, n) - 2.0 * c + u(k, m - 1, n);
                    double dxx = u(k, m, n + 1) - 2.0 * c + u(k, m, n - 1);
                    double r = dtt - ly * dyy - lx * dxx;
                    acc += r * r;
                    if (grad) {
                        double cc = 2.0 * scale * r;
                        (*grad)(k + 1, m, n) += cc;
                        (*grad)(k - 1, m, n) += cc;
                        (*grad)(k, m, n) += center_coeff * cc;
                        (*grad)(k, m + 1, n) -= ly * cc;
                        (*grad)(k, m - 1, n) -= ly * cc;
                        (*grad)(k, m, n + 1) -= lx * cc;
                        (*grad)(k, m, n - 1) -= lx * cc;
                    }
                }
            }
        }
        out.residual = scale * acc;
    }

    // Boundary trace and flux misfits over all time levels and owned nodes.
    {
        double trace_acc = 0.0, flux_acc = 0.0;
        for (Segment s : kSegments) {
            const double wq = g.h_t * edge_step(g, s);
            const double hn = normal_step(g, s);
            const int count = owned_node_count(g, s);
            for (int k = 0; k <= g.n_t; ++k) {
                for (int j = 0; j < count; ++j) {
                    NodeIndex b = segment_node(g, s, j);
                    NodeIndex in = inner_neighbor(s, b);

                    double dt = u(k, b.m, b.n) - spec.data.f(s, k, j);
                    trace_acc += wq * dt * dt;

                    double u_nu = (u(k, b.m, b.n) - u(k, in.m, in.n)) / hn;
                    double df = u_nu - spec.data.g(s, k, j);
                    flux_acc += wq * df * df;

                    if (grad) {
                        (*grad)(k, b.m, b.n) += 2.0 * w.w_trace * wq * dt;
                        double cf = 2.0 * w.w_flux * wq * df / hn;
                        (*grad)(k, b.m, b.n) += cf;
                        (*grad)(k, in.m, in.n) -= cf;
                    }
                }
            }
        }
        out.trace_misfit = trace_acc;
        out.flux_misfit = flux_acc;
    }

    // Known-initial-condition penalty.
    {
        const double wq = g.h_x1 * g.h_x2;
        double acc = 0.0;
        if (spec.kind == ProblemKind::Phi) {
            for (int m = 0; m <= g.n_y; ++m) {
                for (int n = 0; n <= g.n_x; ++n) {
                    double d = (u(1, m, n) - u(0, m, n)) / g.h_t - spec.known_init(m, n);
                    acc += d * d;
                    if (grad) {
                        double c = 2.0 * w.w_init * wq * d / g.h_t;
                        (*grad)(1, m, n) += c;
                        (*grad)(0, m, n) -= c;
                    }
                }
            }
        } else {
            for (int m = 0; m <= g.n_y; ++m) {
                for (int n = 0; n <= g.n_x; ++n) {
                    double v = u(0, m, n) - spec.known_init(m, n);
                    acc += v * v;
                    if (grad) (*grad)(0, m, n) += 2.0 * w.w_init * wq * v;
                }
            }
            for (int m = 0; m <= g.n_y; ++m) {
                for (int n = 0; n < g.n_x; ++n) {
                    double d = ((u(0, m, n + 1) - spec.known_init(m, n + 1)) -
                                (u(0, m, n) - spec.known_init(m, n))) / g.h_x1;
                    acc += d * d;
                    if (grad) {
                        double c = 2.0 * w.w_init * wq * d / g.h_x1;
                        (*grad)(0, m, n + 1) += c;
                        (*grad)(0, m, n) -= c;
                    }
                }
            }
            for (int m = 0; m < g.n_y; ++m) {
                for (int n = 0; n <= g.n_x; ++n) {
                    double d = ((u(0, m + 1, n) - spec.known_init(m + 1, n)) -
                                (u(0, m, n) - spec.known_init(m, n))) / g.h_x2;
                    acc += d * d;
                    if (grad) {
                        double c = 2.0 * w.w_init * wq * d / g.h_x2;
                        (*grad)(0, m + 1, n) += c;
                        (*grad)(0, m, n) -= c;
                    }
                }
            }
        }
        out.init_penalty = wq * acc;
    }

    // H2 regularization: value, first and pure second differences.
    {
        const double wq = g.h_t * g.h_x1 * g.h_x2;
        const double ce = 2.0 * w.epsilon * wq;
        const double ht = g.h_t, hx = g.h_x1, hy = g.h_x2;
        const double ht2 = ht * ht, hx2 = hx * hx, hy2 = hy * hy;
        double acc = 0.0;

        for (int k = 0; k <= g.n_t; ++k)
            for (int m = 0; m <= g.n_y; ++m)
                for (int n = 0; n <= g.n_x; ++n) {
                    double v = u(k, m, n);
                    acc += v * v;
                    if (grad) (*grad)(k, m, n) += ce * v;
                }

        for (int k = 0; k < g.n_t; ++k)
            for (int m = 0; m <= g.n_y; ++m)
                for (int n = 0; n <= g.n_x; ++n) {
                    double d = (u(k + 1, m, n) - u(k, m, n)) / ht;
                    acc += d * d;
                    if (grad) {
                        double c = ce * d / ht;
                        (*grad)(k + 1, m, n) += c;
                        (*grad)(k, m, n) -= c;
                    }
                }
        for (int k = 0; k <= g.n_t; ++k)
            for (int m = 0; m <= g.n_y; ++m)
                for (int n = 0; n < g.n_x; ++n) {
                    double d = (u(k, m, n + 1) - u(k, m, n)) / hx;
                    acc += d * d;
                    if (grad) {
                        double c = ce * d / hx;
                        (*grad)(k, m, n + 1) += c;
                        (*grad)(k, m, n) -= c;
                    }
                }
        for (int k = 0; k <= g.n_t; ++k)
            for (int m = 0; m < g.n_y; ++m)
                for (int n = 0; n <= g.n_x; ++n) {
                    double d = (u(k, m + 1, n) - u(k, m, n)) / hy;
                    acc += d * d;
                    if (grad) {
                        double c = ce * d / hy;
                        (*grad)(k, m + 1, n) += c;
                        (*grad)(k, m, n) -= c;
                    }
                }

        for (int k = 1; k < g.n_t; ++k)
            for (int m = 0; m <= g.n_y; ++m)
                for (int n = 0; n <= g.n_x; ++n) {
                    double d = (u(k + 1, m, n) - 2.0 * u(k, m, n) + u(k - 1, m, n)) / ht2;
                    acc += d * d;
                    if (grad) {
                        double c = ce * d / ht2;
                        (*grad)(k + 1, m, n) += c;
                        (*grad)(k, m, n) -= 2.0 * c;
                        (*grad)(k - 1, m, n) += c;
                    }
                }
        for (int k = 0; k <= g.n_t; ++k)
            for (int m = 0; m <= g.n_y; ++m)
                for (int n = 1; n < g.n_x; ++n) {
                    double d = (u(k, m, n + 1) - 2.0 * u(k, m, n) + u(k, m, n - 1)) / hx2;
                    acc += d * d;
                    if (grad) {
                        double c = ce * d / hx2;
                        (*grad)(k, m, n + 1) += c;
                        (*grad)(k, m, n) -= 2.0 * c;
                        (*grad)(k, m, n - 1) += c;
                    }
                }
        for (int k = 0; k <= g.n_t; ++k)
            for (int m = 1; m < g.n_y; ++m)
                for (int n = 0; n <= g.n_x; ++n) {
                    double d = (u(k, m + 1, n) - 2.0 * u(k, m, n) + u(k, m - 1, n)) / hy2;
                    acc += d * d;
                    if (grad) {
                        double c = ce * d / hy2;
                        (*grad)(k, m + 1, n) += c;
                        (*grad)(k, m, n) -= 2.0 * c;
                        (*grad)(k, m - 1, n) += c;
                    }
                }

        out.regularization = wq * acc;
    }

    out.total = out.residual + w.w_trace * out.trace_misfit + w.w_flux * out.flux_misfit +
                w.w_init * out.init_penalty + w.epsilon * out.regularization;
    return out;
}

} // namespace qrm
