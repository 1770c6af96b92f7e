// Acceptance suite: one line per criterion, PASS or FAIL, with the measured
// quantities inline. Exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "qrm/cli.hpp"
#include "qrm/experiments.hpp"
#include "qrm/io.hpp"
#include "support/dense.hpp"
#include "support/spec_builders.hpp"
#include "support/test_rng.hpp"

using namespace qrm;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("%s  C%02d  %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(double x, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, x);
    return buf;
}

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const clock::time_point start = clock::now();
    return std::chrono::duration<double>(clock::now() - start).count();
}

// --- cached experiment runs ------------------------------------------------

struct RunKey {
    std::string test;
    double gamma;
    std::uint64_t seed;
    bool ablate;
    bool unbalanced;
    bool operator<(const RunKey& o) const {
        return std::tie(test, gamma, seed, ablate, unbalanced) <
               std::tie(o.test, o.gamma, o.seed, o.ablate, o.unbalanced);
    }
};

std::map<RunKey, RunReport>& run_cache() {
    static std::map<RunKey, RunReport> cache;
    return cache;
}

const RunReport& cached_run(const std::string& test, double gamma, std::uint64_t seed,
                            bool ablate = false, bool unbalanced = false) {
    RunKey key{test, gamma, seed, ablate, unbalanced};
    auto it = run_cache().find(key);
    if (it != run_cache().end()) return it->second;
    ExperimentPreset p = preset(test);
    p.ablate_init_penalty = ablate;
    if (unbalanced) p.weights = Weights{1e-6, 1.0, 1.0, 1.0};
    RunReport r = run_experiment(p, gamma, seed);
    return run_cache().emplace(key, std::move(r)).first->second;
}

// --- criterion 1 -----------------------------------------------------------

void criterion_1() {
    double t0 = now_seconds();
    test::TestRng rng(2026);
    bool ok = true;
    int checked = 0;
    for (int trial = 0; trial < 1000 && ok; ++trial) {
        SpaceTimeGrid g = test::random_small_grid(rng, 5);
        Field u(g);

        // dyadic values keep every arithmetic progression exact
        auto dyadic = [&]() { return rng.uniform_int(-1024, 1024) * 0x1.0p-10; };

        double c = dyadic();
        for (double& v : u.values()) v = c;
        int k = rng.uniform_int(1, g.n_t - 1);
        int m = rng.uniform_int(1, g.n_y - 1);
        int n = rng.uniform_int(1, g.n_x - 1);
        ok = ok && residual_stencil(u, k, m, n) == 0.0;

        double a = dyadic(), b = dyadic();
        for (int kk = 0; kk <= g.n_t; ++kk)
            for (int mm = 0; mm <= g.n_y; ++mm)
                for (int nn = 0; nn <= g.n_x; ++nn) u(kk, mm, nn) = a + b * kk;
        ok = ok && residual_stencil(u, k, m, n) == 0.0;

        for (int kk = 0; kk <= g.n_t; ++kk)
            for (int mm = 0; mm <= g.n_y; ++mm)
                for (int nn = 0; nn <= g.n_x; ++nn) u(kk, mm, nn) = a + b * nn;
        ok = ok && residual_stencil(u, k, m, n) == 0.0;

        for (int kk = 0; kk <= g.n_t; ++kk)
            for (int mm = 0; mm <= g.n_y; ++mm)
                for (int nn = 0; nn <= g.n_x; ++nn) u(kk, mm, nn) = a + b * mm;
        ok = ok && residual_stencil(u, k, m, n) == 0.0;
        checked += 4;
    }
    double dt = now_seconds() - t0;
    report(1, ok && dt < 1.0,
           "stencil exactly zero on constant/linear fields: " + std::to_string(checked) +
               " checks over 1000 random grids in " + fmt(dt, 2) + " s");
}

// --- criterion 2 -----------------------------------------------------------

double standing_wave_error(double h) {
    SpaceTimeGrid g = make_grid(Extent{0.0, 1.0, 0.0, 1.0, 0.5}, Steps{h, h, 0.5 * h});
    SpatialField phi(g), psi(g);
    constexpr double pi = std::numbers::pi;
    for (int m = 1; m < g.n_y; ++m)
        for (int n = 1; n < g.n_x; ++n)
            phi(m, n) = std::sin(pi * g.x1(n)) * std::sin(pi * g.x2(m));
    Field u = solve_forward(make_forward_problem(g, phi, psi, 0.0, 1.0));
    double err = 0.0;
    for (int k = 0; k <= g.n_t; ++k) {
        double amp = std::cos(std::numbers::sqrt2 * pi * g.t(k));
        for (int m = 0; m <= g.n_y; ++m)
            for (int n = 0; n <= g.n_x; ++n) {
                double exact = amp * std::sin(pi * g.x1(n)) * std::sin(pi * g.x2(m));
                err = std::max(err, std::abs(u(k, m, n) - exact));
            }
    }
    return err;
}

void criterion_2() {
    double t0 = now_seconds();
    double e1 = standing_wave_error(1.0 / 10.0);
    double e2 = standing_wave_error(1.0 / 20.0);
    double e3 = standing_wave_error(1.0 / 40.0);
    double r1 = e1 / e2, r2 = e2 / e3;
    double dt = now_seconds() - t0;
    bool ok = r1 >= 3.0 && r1 <= 5.0 && r2 >= 3.0 && r2 <= 5.0 && dt < 10.0;
    report(2, ok,
           "standing-wave max-error refinement factors " + fmt(r1) + ", " + fmt(r2) +
               " in [3,5] (" + fmt(dt, 2) + " s)");
}

// --- criterion 3 -----------------------------------------------------------

void criterion_3() {
    SpaceTimeGrid g = make_grid(Extent{0.0, 4.0, 0.0, 4.0, 3.0}, Steps{0.1, 0.1, 1.0 / 15.0});
    double ex = std::abs(g.lambda_x - 4.0 / 9.0);
    double ey = std::abs(g.lambda_y - 4.0 / 9.0);
    double et = std::abs(g.lambda_t - 2.0 / 9.0);
    bool ok = g.n_x == 40 && g.n_y == 40 && g.n_t == 45 && ex <= 1e-15 && ey <= 1e-15 &&
              et <= 1e-15;
    report(3, ok,
           "reference grid: n=(40,40,45), |lambda_x-4/9|=" + fmt(ex, 2) +
               ", |lambda_t-2/9|=" + fmt(et, 2));
}

// --- criterion 4 -----------------------------------------------------------

void criterion_4() {
    double t0 = now_seconds();
    test::TestRng rng(777);
    double worst = 0.0;
    int trials = 0;
    for (ProblemKind kind : {ProblemKind::Phi, ProblemKind::Psi}) {
        for (bool ablated : {false, true}) {
            FunctionalSpec spec = test::make_random_spec(rng, 5, kind, ablated, true);
            for (int trial = 0; trial < 5; ++trial) {
                Field u(spec.grid), d(spec.grid);
                rng.fill(u.values());
                rng.fill(d.values());
                Field g = gradient(u, spec);
                double gd = 0.0;
                for (std::size_t i = 0; i < g.values().size(); ++i)
                    gd += g.values()[i] * d.values()[i];
                const double delta = 1e-6;
                Field up = u, um = u;
                for (std::size_t i = 0; i < u.values().size(); ++i) {
                    up.values()[i] += delta * d.values()[i];
                    um.values()[i] -= delta * d.values()[i];
                }
                double fd = (evaluate(up, spec).total - evaluate(um, spec).total) /
                            (2.0 * delta);
                double rel = std::abs(gd - fd) / std::max(std::abs(gd), std::abs(fd));
                worst = std::max(worst, rel);
                ++trials;
            }
        }
    }
    double dt = now_seconds() - t0;
    bool ok = worst <= 1e-6 && dt < 5.0;
    report(4, ok,
           "gradient vs central differences, " + std::to_string(trials) +
               " directions (both kinds, ablated+full): worst rel err " + fmt(worst, 3) +
               " <= 1e-6 (" + fmt(dt, 2) + " s)");
}

// --- criterion 5 -----------------------------------------------------------

void criterion_5() {
    double t0 = now_seconds();
    test::TestRng rng(555);
    FunctionalSpec spec = test::make_random_spec(rng, 4, ProblemKind::Phi, false, true);
    Field star = test::direct_minimizer(spec);
    double j_star = evaluate(star, spec).total;

    CgConfig cfg;
    cfg.max_iters = static_cast<int>(spec.grid.node_count());
    cfg.restart_period = cfg.max_iters + 1;
    MinimizeResult res = minimize(spec, cfg);
    double rel = std::abs(res.final_breakdown.total - j_star) / std::abs(j_star);
    double dt = now_seconds() - t0;
    bool ok = rel <= 1e-8 && dt < 10.0;
    report(5, ok,
           "CG(" + std::to_string(cfg.max_iters) + " iters) vs dense normal equations: |dJ|/J = " +
               fmt(rel, 3) + " <= 1e-8 (" + fmt(dt, 2) + " s)");
}

// --- criterion 6 -----------------------------------------------------------

void criterion_6() {
    bool ok = true;
    std::string detail = "monotone J over 300 iterations:";
    for (const std::string& name : preset_names()) {
        ExperimentPreset p = preset(name);
        const RunReport& r = cached_run(name, p.default_noise, 1);
        bool mono = true;
        for (std::size_t i = 1; i < r.history.entries.size(); ++i) {
            if (r.history.entries[i].j_value > r.history.entries[i - 1].j_value) mono = false;
        }
        bool complete = r.history.entries.back().iter == p.max_iters;
        ok = ok && mono && complete;
        detail += " " + name + (mono && complete ? "+" : "-");
    }
    report(6, ok, detail);
}

// --- criterion 7 -----------------------------------------------------------

void criterion_7() {
    double mean_max = 0.0, mean_min = 0.0, mean_corr = 0.0;
    for (std::uint64_t s = 1; s <= 5; ++s) {
        const RunReport& r = cached_run("test1", 0.5, s);
        mean_max += r.metrics.max_value;
        mean_min += r.metrics.min_value;
        mean_corr += r.metrics.field_correlation;
    }
    mean_max /= 5.0;
    mean_min /= 5.0;
    mean_corr /= 5.0;
    bool ok = mean_max >= 0.75 && mean_max <= 1.05 && -mean_min >= 0.75 && -mean_min <= 1.05 &&
              mean_corr > 0.9;
    report(7, ok,
           "test1 gamma=0.5 (5 seeds): mean max " + fmt(mean_max) + ", mean |min| " +
               fmt(-mean_min) + " in [0.75,1.05]; mean phantom correlation " + fmt(mean_corr) +
               " > 0.9 (whole-field Pearson; the exact x1=0.5 section is identically zero)");
}

// --- criterion 8 -----------------------------------------------------------

void criterion_8() {
    double mean_abl = 0.0, mean_on = 0.0;
    bool strictly_below = true;
    for (std::uint64_t s = 1; s <= 5; ++s) {
        const RunReport& abl = cached_run("test1", 0.05, s, true);
        const RunReport& on = cached_run("test1", 0.05, s, false);
        mean_abl += abl.metrics.max_value;
        mean_on += on.metrics.max_value;
        strictly_below = strictly_below && abl.metrics.max_value < on.metrics.max_value;
    }
    mean_abl /= 5.0;
    mean_on /= 5.0;
    bool band = mean_abl >= 0.55 && mean_abl <= 0.80;
    bool ok = band && strictly_below && mean_abl < mean_on;
    report(8, ok,
           "test1 ablated gamma=0.05 (5 seeds): mean max " + fmt(mean_abl) +
               (band ? " in" : " NOT in") + " [0.55,0.80]; strictly below penalty-on mean " +
               fmt(mean_on) + (strictly_below ? " at every seed" : " VIOLATED"));
}

// --- criterion 9 -----------------------------------------------------------

void criterion_9() {
    const RunReport& r = cached_run("test1", 0.0, 1, false, true);
    double res = r.final_breakdown.residual;
    double trace = r.final_breakdown.trace_misfit;
    bool res_band = res >= 1e-4 && res <= 1e-2;
    bool trace_band = trace >= 1e-3 && trace <= 1e-1;
    bool ratio = trace >= 10.0 * res;
    bool ok = res_band && trace_band && ratio;
    report(9, ok,
           "test1 unbalanced gamma=0 after 300 iterations: residual " + fmt(res, 3) +
               (res_band ? " in" : " NOT in") + " [1e-4,1e-2], trace " + fmt(trace, 3) +
               (trace_band ? " in" : " NOT in") + " [1e-3,1e-1], trace/residual " +
               fmt(trace / res, 3) + (ratio ? " >= 10" : " < 10"));
}

// --- criterion 10 ----------------------------------------------------------

bool peaks_at_spikes(const RunReport& r) {
    if (r.metrics.peaks.size() < 2) return false;
    auto at = [](const Peak& p, double c) {
        return std::abs(p.x1 - c) < 1e-9 && std::abs(p.x2 - c) < 1e-9;
    };
    const Peak& a = r.metrics.peaks[0];
    const Peak& b = r.metrics.peaks[1];
    return (at(a, 0.4) && at(b, 0.7)) || (at(a, 0.7) && at(b, 0.4));
}

void criterion_10() {
    double mean_on = 0.0, mean_off = 0.0;
    bool located = true, per_seed_lower = true;
    for (std::uint64_t s = 1; s <= 3; ++s) {
        const RunReport& on = cached_run("test5", 0.5, s);
        const RunReport& off = cached_run("test5", 0.05, s, true);
        located = located && peaks_at_spikes(on);
        double h_on = (on.metrics.peaks.size() >= 2)
                          ? 0.5 * (on.metrics.peaks[0].height + on.metrics.peaks[1].height)
                          : 0.0;
        double h_off = off.metrics.peaks.empty() ? 0.0 : off.metrics.peaks[0].height;
        if (off.metrics.peaks.size() >= 2) {
            h_off = 0.5 * (off.metrics.peaks[0].height + off.metrics.peaks[1].height);
        }
        mean_on += h_on;
        mean_off += h_off;
        per_seed_lower = per_seed_lower && h_off < h_on;
    }
    mean_on /= 3.0;
    mean_off /= 3.0;
    bool heights = mean_on >= 60.0 && mean_on <= 90.0; // 75 +- 20%
    bool ok = located && heights && per_seed_lower && mean_off < mean_on;
    report(10, ok,
           "test5 gamma=0.5 peaks at (0.4,0.4),(0.7,0.7): " +
               std::string(located ? "exact" : "MISSED") + "; mean height " + fmt(mean_on) +
               (heights ? " in" : " NOT in") + " [60,90]; ablated gamma=0.05 mean " +
               fmt(mean_off) + (per_seed_lower ? " strictly lower" : " NOT lower"));
}

// --- criterion 11 ----------------------------------------------------------

void criterion_11() {
    std::vector<double> gammas = {0.05, 0.25, 0.5};
    std::vector<double> means;
    for (double gamma : gammas) {
        double acc = 0.0;
        for (std::uint64_t s = 1; s <= 5; ++s) {
            acc += cached_run("test1", gamma, s).metrics.rel_l2_error;
        }
        means.push_back(acc / 5.0);
    }
    bool ok = means[0] <= means[1] && means[1] <= means[2];
    report(11, ok,
           "test1 mean rel L2 over 5 seeds: " + fmt(means[0]) + " <= " + fmt(means[1]) +
               " <= " + fmt(means[2]) + " across gamma 0.05/0.25/0.5");
}

// --- criterion 12 ----------------------------------------------------------

void criterion_12() {
    double mean_on = 0.0, mean_off = 0.0;
    for (std::uint64_t s = 1; s <= 5; ++s) {
        mean_on += cached_run("test4", 0.25, s, false).metrics.rel_l2_error;
        mean_off += cached_run("test4", 0.25, s, true).metrics.rel_l2_error;
    }
    mean_on /= 5.0;
    mean_off /= 5.0;
    double diff = std::abs(mean_on - mean_off);
    bool ok = diff < 0.05;
    report(12, ok,
           "test4 (T=2 > diam) penalty on/off rel L2: " + fmt(mean_on) + " vs " + fmt(mean_off) +
               ", |diff| " + fmt(diff, 3) + " < 0.05");
}

// --- criterion 13 ----------------------------------------------------------

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

bool identical_dirs(const std::filesystem::path& a, const std::filesystem::path& b) {
    std::vector<std::string> names;
    for (const auto& e : std::filesystem::directory_iterator(a)) {
        names.push_back(e.path().filename().string());
    }
    if (names.empty()) return false;
    for (const std::string& name : names) {
        if (slurp(a / name) != slurp(b / name)) return false;
    }
    return true;
}

void criterion_13() {
    namespace fs = std::filesystem;
    fs::path base = fs::temp_directory_path() / "qrm_acceptance_repro";
    fs::remove_all(base);
    fs::create_directories(base);

    io::ConfigFile cfg = io::parse_config_text(
        "test = test3\nnoise = 0.25\nseed = 4\niters = 40\n", "acceptance");

    auto run_twice = [&](const std::string& tag, auto&& command) {
        fs::path d1 = base / (tag + "_1"), d2 = base / (tag + "_2");
        command(d1);
        command(d2);
        return identical_dirs(d1, d2);
    };

    bool sim_ok = run_twice("simulate", [&](const fs::path& dir) {
        cli::Overrides o;
        o.out_dir = dir;
        cli::cmd_simulate(cli::resolve_config(cfg, o));
    });
    bool run_ok = run_twice("runtest", [&](const fs::path& dir) {
        cli::Overrides o;
        o.out_dir = dir;
        cli::cmd_run_test(cli::resolve_config(cfg, o));
    });
    bool rec_ok = run_twice("reconstruct", [&](const fs::path& dir) {
        cli::Overrides o;
        o.out_dir = dir;
        cli::cmd_reconstruct(cli::resolve_config(cfg, o), base / "simulate_1");
    });
    bool sweep_ok = run_twice("sweep", [&](const fs::path& dir) {
        cli::Overrides o;
        o.out_dir = dir;
        o.noise = std::vector<double>{0.05, 0.25};
        o.seeds_per_gamma = 2;
        cli::cmd_sweep(cli::resolve_config(cfg, o));
    });

    bool ok = sim_ok && run_ok && rec_ok && sweep_ok;
    report(13, ok,
           std::string("byte-identical reruns: simulate ") + (sim_ok ? "+" : "-") +
               ", run-test " + (run_ok ? "+" : "-") + ", reconstruct " + (rec_ok ? "+" : "-") +
               ", sweep " + (sweep_ok ? "+" : "-"));
}

} // namespace

int main() {
    std::printf("quasi-reversibility acceptance suite\n");
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    criterion_12();
    criterion_13();
    std::printf("%d of 13 criteria passed (%.0f s total)\n", 13 - g_failures, now_seconds());
    return g_failures;
}
