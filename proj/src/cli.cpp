#include "qrm/cli.hpp"

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

namespace qrm::cli {

namespace {

const char* const kKnownKeys[] = {
    "test",     "kind",    "phantom", "x1_min",  "x1_max",          "x2_min",
    "x2_max",   "T",       "h_x1",    "h_x2",    "h_t",             "support_a",
    "zero_far_edges",      "noise",   "seed",    "seeds_per_gamma", "out",
    "epsilon",  "w_trace", "w_flux",  "w_init",  "iters",           "ablate_init_penalty",
};

bool parse_bool(const std::string& value, const std::string& key) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError("config key '" + key + "' expects a boolean, got '" + value + "'");
}

double config_double(const io::ConfigFile& file, const std::string& key, double fallback) {
    if (!file.has(key)) return fallback;
    std::string raw = file.get(key, "");
    try {
        return io::parse_double(raw, file.origin + " key " + key);
    } catch (const DataError& e) {
        throw ConfigError(e.what());
    }
}

std::uint64_t parse_u64(const std::string& raw, const std::string& what) {
    try {
        std::size_t used = 0;
        std::uint64_t v = std::stoull(raw, &used);
        if (used != raw.size()) throw std::invalid_argument(raw);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(what + " expects an unsigned integer, got '" + raw + "'");
    }
}

int parse_int(const std::string& raw, const std::string& what) {
    try {
        std::size_t used = 0;
        int v = std::stoi(raw, &used);
        if (used != raw.size()) throw std::invalid_argument(raw);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(what + " expects an integer, got '" + raw + "'");
    }
}

void require_single_noise(const RunConfig& config, const char* command) {
    if (config.noise_levels.size() != 1) {
        throw ConfigError(std::string(command) + " takes exactly one noise level");
    }
}

std::vector<std::pair<std::string, std::string>> config_echo(const RunConfig& config,
                                                             double gamma) {
    const ExperimentPreset& p = config.preset;
    std::vector<std::pair<std::string, std::string>> items;
    items.emplace_back("test", p.name);
    items.emplace_back("kind", kind_name(p.kind));
    items.emplace_back("phantom", phantom_name(p.phantom));
    items.emplace_back("x1_min", io::format_double(p.extent.x1_min));
    items.emplace_back("x1_max", io::format_double(p.extent.x1_max));
    items.emplace_back("x2_min", io::format_double(p.extent.x2_min));
    items.emplace_back("x2_max", io::format_double(p.extent.x2_max));
    items.emplace_back("T", io::format_double(p.extent.t_max));
    items.emplace_back("h_x1", io::format_double(p.steps.h_x1));
    items.emplace_back("h_x2", io::format_double(p.steps.h_x2));
    items.emplace_back("h_t", io::format_double(p.steps.h_t));
    items.emplace_back("support_a", io::format_double(p.support_a));
    items.emplace_back("zero_far_edges", p.zero_far_edges ? "true" : "false");
    items.emplace_back("noise", io::format_double(gamma));
    items.emplace_back("seed", std::to_string(config.seed));
    items.emplace_back("epsilon", io::format_double(p.weights.epsilon));
    items.emplace_back("w_trace", io::format_double(p.weights.w_trace));
    items.emplace_back("w_flux", io::format_double(p.weights.w_flux));
    items.emplace_back("w_init", io::format_double(p.weights.w_init));
    items.emplace_back("iters", std::to_string(p.max_iters));
    items.emplace_back("ablate_init_penalty", p.ablate_init_penalty ? "true" : "false");
    return items;
}

void write_simulation_artifacts(const RunConfig& config, double gamma,
                                const SimulatedData& sim) {
    const std::filesystem::path& dir = config.out_dir;
    io::write_spatial_field(dir / "phantom.csv", sim.phantom_field, sim.inverse_grid);
    io::write_cauchy(dir / "cauchy_clean.csv", sim.clean);
    io::write_cauchy(dir / "cauchy_noisy.csv", sim.noisy);

    std::vector<std::pair<std::string, std::string>> summary = config_echo(config, gamma);
    summary.emplace_back("forward_max_abs", io::format_double(sim.forward_max_abs));
    summary.emplace_back("clean_data_energy", io::format_double(sim.clean.energy()));
    summary.emplace_back("noisy_data_energy", io::format_double(sim.noisy.energy()));
    for (const std::string& w : sim.warnings) summary.emplace_back("warning", w);
    io::write_summary(dir / "forward_summary.txt", summary);
}

void write_reconstruction_artifacts(const RunConfig& config, const RunReport& report) {
    const std::filesystem::path& dir = config.out_dir;
    const SpaceTimeGrid& g = report.grid;

    io::write_spatial_field(dir / "reconstruction.csv", report.reconstruction, g);
    io::write_history_csv(dir / "history.csv", report.history);

    {
        std::ofstream out(dir / "cross_section.csv", std::ios::binary);
        out << "x2,exact,reconstructed\n";
        std::vector<double> exact_cs = cross_section(report.exact, g, 0.5);
        for (int m = 0; m <= g.n_y; ++m) {
            out << io::format_double(g.x2(m)) << ',' << io::format_double(exact_cs[m]) << ','
                << io::format_double(report.metrics.cross_section[m]) << '\n';
        }
    }
    {
        std::ofstream out(dir / "metrics.csv", std::ios::binary);
        out << "metric,value\n";
        out << "rel_l2_error," << io::format_double(report.metrics.rel_l2_error) << '\n';
        out << "max_value," << io::format_double(report.metrics.max_value) << '\n';
        out << "min_value," << io::format_double(report.metrics.min_value) << '\n';
        out << "field_correlation," << io::format_double(report.metrics.field_correlation)
            << '\n';
        int rank = 0;
        for (const Peak& p : report.metrics.peaks) {
            out << "peak" << ++rank << ',' << io::format_double(p.x1) << ';'
                << io::format_double(p.x2) << ';' << io::format_double(p.height) << '\n';
        }
    }

    std::vector<std::pair<std::string, std::string>> summary =
        config_echo(config, report.gamma);
    summary.emplace_back("rel_l2_error", io::format_double(report.metrics.rel_l2_error));
    summary.emplace_back("max_value", io::format_double(report.metrics.max_value));
    summary.emplace_back("min_value", io::format_double(report.metrics.min_value));
    summary.emplace_back("field_correlation",
                         io::format_double(report.metrics.field_correlation));
    summary.emplace_back("peak_count", std::to_string(report.metrics.peaks.size()));
    summary.emplace_back("J_final", io::format_double(report.final_breakdown.total));
    summary.emplace_back("J_zero", io::format_double(report.zero_breakdown.total));
    summary.emplace_back("residual", io::format_double(report.final_breakdown.residual));
    summary.emplace_back("trace_misfit",
                         io::format_double(report.final_breakdown.trace_misfit));
    summary.emplace_back("flux_misfit", io::format_double(report.final_breakdown.flux_misfit));
    summary.emplace_back("init_penalty",
                         io::format_double(report.final_breakdown.init_penalty));
    summary.emplace_back("regularization",
                         io::format_double(report.final_breakdown.regularization));
    summary.emplace_back("iterations_run",
                         std::to_string(report.history.entries.back().iter));
    for (const std::string& w : report.warnings) summary.emplace_back("warning", w);
    io::write_summary(dir / "summary.txt", summary);
}

} // namespace

RunConfig resolve_config(const io::ConfigFile& file, const Overrides& overrides) {
    for (const io::ConfigEntry& e : file.entries) {
        bool known = false;
        for (const char* k : kKnownKeys) {
            if (e.key == k) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw ConfigError(file.origin + ":" + std::to_string(e.line) +
                              ": unknown config key '" + e.key + "'");
        }
    }

    RunConfig config;
    std::string test_name;
    if (overrides.test) test_name = *overrides.test;
    else if (file.has("test")) test_name = file.get("test", "");

    if (!test_name.empty()) {
        config.preset = preset(test_name);
    } else {
        // custom problem: geometry, kind and phantom must be spelled out
        for (const char* key : {"kind", "phantom", "x1_max", "T", "h_x1", "h_t"}) {
            if (!file.has(key)) {
                throw ConfigError("config without 'test' must define '" + std::string(key) +
                                  "'");
            }
        }
        ExperimentPreset p;
        p.name = "custom";
        p.kind = kind_from_name(file.get("kind", "phi"));
        p.phantom = phantom_from_name(file.get("phantom", "zero"));
        p.extent.x1_min = config_double(file, "x1_min", 0.0);
        p.extent.x1_max = config_double(file, "x1_max", 1.0);
        p.extent.x2_min = config_double(file, "x2_min", p.extent.x1_min);
        p.extent.x2_max = config_double(file, "x2_max", p.extent.x1_max);
        p.extent.t_max = config_double(file, "T", 1.0);
        p.steps.h_x1 = config_double(file, "h_x1", 0.1);
        p.steps.h_x2 = config_double(file, "h_x2", p.steps.h_x1);
        p.steps.h_t = config_double(file, "h_t", 0.05);
        p.support_a = config_double(file, "support_a", 1.0);
        p.zero_far_edges = true;
        p.weights = Weights{1e-6, 1.0, 1.0, 1.0};
        if (p.kind == ProblemKind::Phi) p.weights.w_trace = 1000.0;
        else p.weights.w_init = 100.0;
        p.noise_levels = {0.25};
        p.default_noise = 0.25;
        config.preset = std::move(p);
    }

    ExperimentPreset& p = config.preset;
    if (!test_name.empty()) {
        // named preset still accepts geometry overrides from the file
        p.extent.x1_min = config_double(file, "x1_min", p.extent.x1_min);
        p.extent.x1_max = config_double(file, "x1_max", p.extent.x1_max);
        p.extent.x2_min = config_double(file, "x2_min", p.extent.x2_min);
        p.extent.x2_max = config_double(file, "x2_max", p.extent.x2_max);
        p.extent.t_max = config_double(file, "T", p.extent.t_max);
        p.steps.h_x1 = config_double(file, "h_x1", p.steps.h_x1);
        p.steps.h_x2 = config_double(file, "h_x2", p.steps.h_x2);
        p.steps.h_t = config_double(file, "h_t", p.steps.h_t);
        p.support_a = config_double(file, "support_a", p.support_a);
        if (file.has("kind")) p.kind = kind_from_name(file.get("kind", ""));
        if (file.has("phantom")) p.phantom = phantom_from_name(file.get("phantom", ""));
    }
    if (file.has("zero_far_edges")) {
        p.zero_far_edges = parse_bool(file.get("zero_far_edges", ""), "zero_far_edges");
    }

    p.weights.epsilon = config_double(file, "epsilon", p.weights.epsilon);
    p.weights.w_trace = config_double(file, "w_trace", p.weights.w_trace);
    p.weights.w_flux = config_double(file, "w_flux", p.weights.w_flux);
    p.weights.w_init = config_double(file, "w_init", p.weights.w_init);
    if (file.has("iters")) p.max_iters = parse_int(file.get("iters", ""), "iters");
    if (file.has("ablate_init_penalty")) {
        p.ablate_init_penalty =
            parse_bool(file.get("ablate_init_penalty", ""), "ablate_init_penalty");
    }

    if (overrides.epsilon) p.weights.epsilon = *overrides.epsilon;
    if (overrides.w_trace) p.weights.w_trace = *overrides.w_trace;
    if (overrides.w_flux) p.weights.w_flux = *overrides.w_flux;
    if (overrides.w_init) p.weights.w_init = *overrides.w_init;
    if (overrides.iters) p.max_iters = *overrides.iters;
    if (overrides.ablate_init_penalty) p.ablate_init_penalty = true;
    if (p.max_iters < 1) throw ConfigError("iters must be at least 1");
    if (p.weights.epsilon <= 0.0) throw ConfigError("epsilon must be positive");

    if (overrides.noise) config.noise_levels = *overrides.noise;
    else if (file.has("noise")) {
        config.noise_levels.clear();
        for (const std::string& raw : file.get_all("noise")) {
            try {
                config.noise_levels.push_back(io::parse_double(raw, file.origin + " key noise"));
            } catch (const DataError& e) {
                throw ConfigError(e.what());
            }
        }
    } else {
        config.noise_levels = {p.default_noise};
    }
    for (double gamma : config.noise_levels) {
        if (gamma < 0.0 || gamma >= 1.0) {
            throw ConfigError("noise level must lie in [0, 1)");
        }
    }

    if (overrides.seed) config.seed = *overrides.seed;
    else if (file.has("seed")) config.seed = parse_u64(file.get("seed", "1"), "seed");

    if (overrides.seeds_per_gamma) config.seeds_per_gamma = *overrides.seeds_per_gamma;
    else if (file.has("seeds_per_gamma")) {
        config.seeds_per_gamma = parse_int(file.get("seeds_per_gamma", "1"), "seeds_per_gamma");
    }
    if (config.seeds_per_gamma < 1) throw ConfigError("seeds_per_gamma must be at least 1");

    if (overrides.out_dir) config.out_dir = *overrides.out_dir;
    else if (file.has("out")) config.out_dir = file.get("out", "qrm-out");

    return config;
}

int worker_cap(int tasks) {
    int cap = static_cast<int>(std::thread::hardware_concurrency());
    if (cap < 1) cap = 1;
    if (const char* env = std::getenv("QRM_THREADS")) {
        int requested = parse_int(env, "QRM_THREADS");
        if (requested < 1) throw ConfigError("QRM_THREADS must be at least 1");
        cap = std::min(cap, requested);
    }
    return std::min(cap, tasks);
}

void cmd_simulate(const RunConfig& config) {
    require_single_noise(config, "simulate");
    std::filesystem::create_directories(config.out_dir);
    double gamma = config.noise_levels[0];
    SimulatedData sim = simulate_experiment(config.preset, gamma, config.seed);
    write_simulation_artifacts(config, gamma, sim);
    io::write_manifest(config.out_dir);
}

void cmd_reconstruct(const RunConfig& config, const std::filesystem::path& data_dir) {
    require_single_noise(config, "reconstruct");
    std::filesystem::path data_file = data_dir / "cauchy_noisy.csv";
    if (!std::filesystem::exists(data_file)) data_file = data_dir / "cauchy_clean.csv";
    if (!std::filesystem::exists(data_file)) {
        throw DataError("no cauchy_noisy.csv or cauchy_clean.csv in " + data_dir.string());
    }
    CauchyData data = io::read_cauchy(data_file);

    std::filesystem::create_directories(config.out_dir);
    double gamma = config.noise_levels[0];
    RunReport report = reconstruct_from_data(config.preset, data, gamma, config.seed);

    write_reconstruction_artifacts(config, report);
    io::write_manifest(config.out_dir);
}

void cmd_run_test(const RunConfig& config) {
    require_single_noise(config, "run-test");
    std::filesystem::create_directories(config.out_dir);
    double gamma = config.noise_levels[0];

    SimulatedData sim = simulate_experiment(config.preset, gamma, config.seed);
    write_simulation_artifacts(config, gamma, sim);

    RunReport report = reconstruct_from_data(config.preset, sim.noisy, gamma, config.seed);
    write_reconstruction_artifacts(config, report);
    io::write_manifest(config.out_dir);
}

void cmd_sweep(const RunConfig& config) {
    if (config.noise_levels.empty()) throw ConfigError("sweep needs at least one noise level");
    std::filesystem::create_directories(config.out_dir);

    struct Task {
        double gamma;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    for (double gamma : config.noise_levels) {
        for (int i = 0; i < config.seeds_per_gamma; ++i) {
            tasks.push_back({gamma, config.seed + static_cast<std::uint64_t>(i)});
        }
    }

    std::vector<SweepRow> rows(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) break;
            RunReport r = run_experiment(config.preset, tasks[i].gamma, tasks[i].seed);
            rows[i] = {tasks[i].gamma, tasks[i].seed, r.metrics.rel_l2_error,
                       r.metrics.max_value, r.metrics.min_value};
        }
    };
    int workers = worker_cap(static_cast<int>(tasks.size()));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    {
        std::ofstream out(config.out_dir / "sweep.csv", std::ios::binary);
        out << "gamma,seed,rel_l2_error,max,min\n";
        for (const SweepRow& r : rows) {
            out << io::format_double(r.gamma) << ',' << r.seed << ','
                << io::format_double(r.rel_l2_error) << ',' << io::format_double(r.max_value)
                << ',' << io::format_double(r.min_value) << '\n';
        }
    }

    std::vector<std::pair<std::string, std::string>> summary =
        config_echo(config, config.noise_levels[0]);
    summary.emplace_back("seeds_per_gamma", std::to_string(config.seeds_per_gamma));
    std::size_t row = 0;
    for (double gamma : config.noise_levels) {
        double acc = 0.0;
        for (int i = 0; i < config.seeds_per_gamma; ++i) acc += rows[row++].rel_l2_error;
        summary.emplace_back("mean_rel_l2_gamma_" + io::format_double(gamma),
                             io::format_double(acc / config.seeds_per_gamma));
    }
    io::write_summary(config.out_dir / "summary.txt", summary);
    io::write_manifest(config.out_dir);
}

void cmd_report(const std::filesystem::path& dir) {
    std::vector<std::string> bad = io::verify_manifest(dir);
    if (!bad.empty()) {
        std::string message = "manifest verification failed:";
        for (const std::string& b : bad) message += " " + b;
        throw DataError(message);
    }
    std::ifstream in(dir / "summary.txt", std::ios::binary);
    if (!in) throw DataError("no summary.txt in " + dir.string());
    std::cout << in.rdbuf();
    std::cout << "manifest = verified (" << dir.string() << ")\n";
}

} // namespace qrm::cli
