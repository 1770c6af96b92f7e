#include "qrm/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qrm {

namespace {

ExperimentPreset quadrant_preset(std::string name, Phantom phantom, ProblemKind kind,
                                 std::vector<double> gammas, double default_noise) {
    ExperimentPreset p;
    p.name = std::move(name);
    p.extent = Extent{0.0, 4.0, 0.0, 4.0, 3.0};
    p.steps = Steps{0.1, 0.1, 1.0 / 15.0};
    p.support_a = 1.0;
    p.phantom = phantom;
    p.kind = kind;
    p.zero_far_edges = true;
    p.noise_levels = std::move(gammas);
    p.default_noise = default_noise;
    p.weights = Weights{1e-6, 1.0, 1.0, 1.0};
    if (kind == ProblemKind::Phi) {
        p.weights.w_trace = 1000.0;
    } else {
        p.weights.w_init = 100.0;
    }
    return p;
}

ExperimentPreset unit_square_preset(std::string name, double T, double h_t) {
    ExperimentPreset p;
    p.name = std::move(name);
    p.extent = Extent{0.0, 1.0, 0.0, 1.0, T};
    p.steps = Steps{0.05, 0.05, h_t};
    p.support_a = 1.0;
    p.phantom = Phantom::SineFull;
    p.kind = ProblemKind::Phi;
    p.zero_far_edges = false; // data on the whole boundary of SQ(1)
    p.noise_levels = {0.25};
    p.default_noise = 0.25;
    p.weights = Weights{1e-6, 1000.0, 1.0, 1.0};
    return p;
}

std::vector<std::string> geometry_warnings(const ExperimentPreset& p) {
    std::vector<std::string> out;
    const double T = p.extent.t_max;
    if (p.zero_far_edges) {
        double t_min = p.support_a * std::numbers::sqrt2 / (2.0 - std::numbers::sqrt2);
        if (T <= t_min) {
            out.push_back("observation time T does not satisfy T > a*sqrt(2)/(2-sqrt(2))");
        }
    } else {
        double diam = (p.extent.x1_max - p.extent.x1_min) * std::numbers::sqrt2;
        if (T < diam) {
            out.push_back(
                "T below the domain diameter: the known-initial-condition term matters here");
        }
    }
    return out;
}

} // namespace

std::vector<std::string> preset_names() {
    return {"test1", "test2", "test3", "test4", "test5"};
}

ExperimentPreset preset(const std::string& name) {
    if (name == "test1") {
        return quadrant_preset("test1", Phantom::SineFull, ProblemKind::Phi, {0.25, 0.5}, 0.25);
    }
    if (name == "test2") {
        return quadrant_preset("test2", Phantom::SineShifted, ProblemKind::Psi,
                               {0.05, 0.25, 0.5}, 0.25);
    }
    if (name == "test3") {
        // N_x = N_y = 20 on SQ(1); h_t chosen to keep the explicit scheme
        // stable (lambda_x + lambda_y = 1/2), 30 levels over T = 0.75.
        return unit_square_preset("test3", 0.75, 0.025);
    }
    if (name == "test4") {
        return unit_square_preset("test4", 2.0, 1.0 / 30.0);
    }
    if (name == "test5") {
        return quadrant_preset("test5", Phantom::DeltaPair, ProblemKind::Phi, {0.5}, 0.5);
    }
    throw ConfigError("unknown test name: " + name +
                      " (valid: test1, test2, test3, test4, test5)");
}

std::vector<double> cross_section(const SpatialField& v, const SpaceTimeGrid& grid,
                                  double x1_value) {
    if (!v.matches(grid)) throw GridMismatchError("field shape does not match grid");
    double ratio = (x1_value - grid.x1_min) / grid.h_x1;
    double rounded = std::nearbyint(ratio);
    if (std::abs(ratio - rounded) > 1e-9 || rounded < 0 || rounded > grid.n_x) {
        throw NodeMisalignedError("cross-section line is not a grid column");
    }
    int n = static_cast<int>(rounded);
    std::vector<double> out(grid.nodes_y());
    for (int m = 0; m <= grid.n_y; ++m) out[m] = v(m, n);
    return out;
}

std::vector<Peak> peak_metrics(const SpatialField& v, const SpaceTimeGrid& grid) {
    if (!v.matches(grid)) throw GridMismatchError("field shape does not match grid");
    double global_max = *std::max_element(v.values().begin(), v.values().end());
    if (global_max <= 0.0) return {};
    double threshold = 0.5 * global_max;

    std::vector<Peak> peaks;
    for (int m = 0; m <= grid.n_y; ++m) {
        for (int n = 0; n <= grid.n_x; ++n) {
            double c = v(m, n);
            if (c <= threshold) continue;
            bool is_max = true;
            for (int dm = -1; dm <= 1 && is_max; ++dm) {
                for (int dn = -1; dn <= 1; ++dn) {
                    if (dm == 0 && dn == 0) continue;
                    int mm = m + dm, nn = n + dn;
                    if (mm < 0 || mm > grid.n_y || nn < 0 || nn > grid.n_x) continue;
                    if (v(mm, nn) >= c) {
                        is_max = false;
                        break;
                    }
                }
            }
            if (is_max) peaks.push_back({m, n, grid.x1(n), grid.x2(m), c});
        }
    }
    std::sort(peaks.begin(), peaks.end(),
              [](const Peak& a, const Peak& b) { return a.height > b.height; });
    return peaks;
}

double field_correlation(const SpatialField& a, const SpatialField& b) {
    const std::vector<double>& x = a.values();
    const std::vector<double>& y = b.values();
    if (x.size() != y.size() || x.empty()) {
        throw GridMismatchError("correlated fields must have equal shapes");
    }
    double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

SimulatedData simulate_experiment(const ExperimentPreset& p, double gamma, std::uint64_t seed) {
    SimulatedData out;
    out.inverse_grid = make_grid(p.extent, p.steps, p.support_a);
    if (!out.inverse_grid.cfl_ok()) {
        throw CflViolationError("preset grid violates the CFL condition");
    }

    const double T = p.extent.t_max;
    const double a = p.support_a;
    out.warnings = geometry_warnings(p);

    Extent fwd_extent{-T, a + T, -T, a + T, T};
    SpaceTimeGrid fwd_grid = make_grid(fwd_extent, p.steps, a);

    SpatialField phantom_fwd = make_phantom(p.phantom, fwd_grid);
    SpatialField zero_fwd(fwd_grid);
    ForwardProblem problem =
        p.kind == ProblemKind::Phi
            ? make_forward_problem(fwd_grid, std::move(phantom_fwd), std::move(zero_fwd), 0.0, a)
            : make_forward_problem(fwd_grid, std::move(zero_fwd), std::move(phantom_fwd), 0.0, a);

    Field u = solve_forward(problem);
    for (double v : u.values()) out.forward_max_abs = std::max(out.forward_max_abs, std::abs(v));

    out.clean = extract_cauchy(u, out.inverse_grid, p.zero_far_edges);
    out.noisy = add_noise(out.clean, NoiseSpec{gamma, seed});
    out.phantom_field = make_phantom(p.phantom, out.inverse_grid);
    return out;
}

RunReport reconstruct_from_data(const ExperimentPreset& p, const CauchyData& data,
                                double gamma, std::uint64_t seed) {
    RunReport report;
    report.config = p;
    report.gamma = gamma;
    report.seed = seed;
    report.grid = make_grid(p.extent, p.steps, p.support_a);
    if (!data.grid().same_layout(report.grid)) {
        throw GridMismatchError("data grid does not match the preset grid");
    }

    FunctionalSpec spec;
    spec.grid = report.grid;
    spec.kind = p.kind;
    spec.weights = p.weights;
    if (p.ablate_init_penalty) spec.weights.w_init = 0.0;
    spec.data = data;
    spec.known_init = SpatialField(report.grid); // the known condition is zero

    report.zero_breakdown = evaluate(Field(report.grid), spec);

    CgConfig cfg;
    cfg.max_iters = p.max_iters;
    MinimizeResult res = minimize(spec, cfg);
    report.final_breakdown = res.final_breakdown;
    report.history = std::move(res.history);

    const SpaceTimeGrid& g = report.grid;
    if (p.kind == ProblemKind::Phi) {
        report.reconstruction = time_slice(res.field, 0);
    } else {
        SpatialField r(g);
        for (int m = 0; m <= g.n_y; ++m)
            for (int n = 0; n <= g.n_x; ++n)
                r(m, n) = (res.field(1, m, n) - res.field(0, m, n)) / g.h_t;
        report.reconstruction = std::move(r);
    }
    report.exact = make_phantom(p.phantom, g);

    const std::vector<double>& rv = report.reconstruction.values();
    report.metrics.max_value = *std::max_element(rv.begin(), rv.end());
    report.metrics.min_value = *std::min_element(rv.begin(), rv.end());

    SpatialField diff = report.reconstruction;
    for (std::size_t i = 0; i < diff.values().size(); ++i) {
        diff.values()[i] -= report.exact.values()[i];
    }
    double exact_l2 = discrete_l2_sq(report.exact, g);
    double diff_l2 = discrete_l2_sq(diff, g);
    report.metrics.rel_l2_error = exact_l2 > 0.0 ? std::sqrt(diff_l2 / exact_l2)
                                                 : std::sqrt(diff_l2);
    report.metrics.field_correlation = field_correlation(report.reconstruction, report.exact);
    report.metrics.cross_section = cross_section(report.reconstruction, g, 0.5);
    report.metrics.peaks = peak_metrics(report.reconstruction, g);
    report.warnings = geometry_warnings(p);
    return report;
}

RunReport run_experiment(const ExperimentPreset& p, double gamma, std::uint64_t seed) {
    SimulatedData sim = simulate_experiment(p, gamma, seed);
    return reconstruct_from_data(p, sim.noisy, gamma, seed);
}

RunReport run_experiment(const ExperimentPreset& p, std::uint64_t seed) {
    return run_experiment(p, p.default_noise, seed);
}

SweepReport noise_sweep(const ExperimentPreset& p, const std::vector<double>& gammas,
                        int seeds_per_gamma, std::uint64_t base_seed) {
    if (gammas.empty()) throw ConfigError("noise sweep needs at least one gamma");
    if (seeds_per_gamma < 1) throw ConfigError("noise sweep needs at least one seed per gamma");

    SweepReport out;
    out.gammas = gammas;
    for (double gamma : gammas) {
        double acc = 0.0;
        for (int i = 0; i < seeds_per_gamma; ++i) {
            std::uint64_t seed = base_seed + static_cast<std::uint64_t>(i);
            RunReport r = run_experiment(p, gamma, seed);
            out.rows.push_back({gamma, seed, r.metrics.rel_l2_error, r.metrics.max_value,
                                r.metrics.min_value});
            acc += r.metrics.rel_l2_error;
        }
        out.mean_rel_l2.push_back(acc / seeds_per_gamma);
    }
    return out;
}

} // namespace qrm
