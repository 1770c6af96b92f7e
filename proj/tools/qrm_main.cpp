#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qrm/cli.hpp"

namespace {

using qrm::cli::Overrides;
using qrm::cli::RunConfig;

std::vector<double> parse_noise_list(const std::string& raw) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= raw.size()) {
        std::size_t pos = raw.find(',', start);
        std::string token = raw.substr(start, pos == std::string::npos ? pos : pos - start);
        if (token.empty()) throw qrm::ConfigError("empty entry in noise list '" + raw + "'");
        out.push_back(qrm::io::parse_double(token, "--noise"));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    if (out.empty()) throw qrm::ConfigError("--noise needs at least one value");
    return out;
}

struct FlagSet {
    std::string config_path;
    std::string out_dir;
    std::string noise_raw;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int seeds = 0;
    double epsilon = 0.0, w_trace = 0.0, w_flux = 0.0, w_init = 0.0;
    bool epsilon_set = false, w_trace_set = false, w_flux_set = false, w_init_set = false;
    int iters = 0;
    bool ablate = false;

    void attach(CLI::App* cmd, bool with_seeds) {
        cmd->add_option("--config", config_path, "flat key = value configuration file");
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--noise", noise_raw, "noise level (comma list for sweep)");
        cmd->add_option("--seed", seed, "base RNG seed")->each([this](const std::string&) {
            seed_set = true;
        });
        if (with_seeds) cmd->add_option("--seeds", seeds, "seeds per noise level");
        cmd->add_option("--epsilon", epsilon, "regularization parameter")
            ->each([this](const std::string&) { epsilon_set = true; });
        cmd->add_option("--w-trace", w_trace, "trace misfit weight")
            ->each([this](const std::string&) { w_trace_set = true; });
        cmd->add_option("--w-flux", w_flux, "normal-derivative misfit weight")
            ->each([this](const std::string&) { w_flux_set = true; });
        cmd->add_option("--w-init", w_init, "initial-condition penalty weight")
            ->each([this](const std::string&) { w_init_set = true; });
        cmd->add_option("--iters", iters, "conjugate gradient iterations");
        cmd->add_flag("--ablate-init-penalty", ablate,
                      "drop the known-initial-condition penalty term");
    }

    RunConfig resolve(const std::string& test_name = "") const {
        qrm::io::ConfigFile file;
        if (!config_path.empty()) file = qrm::io::parse_config_file(config_path);

        Overrides o;
        if (!test_name.empty()) o.test = test_name;
        if (!noise_raw.empty()) o.noise = parse_noise_list(noise_raw);
        if (seed_set) o.seed = seed;
        if (seeds > 0) o.seeds_per_gamma = seeds;
        if (epsilon_set) o.epsilon = epsilon;
        if (w_trace_set) o.w_trace = w_trace;
        if (w_flux_set) o.w_flux = w_flux;
        if (w_init_set) o.w_init = w_init;
        if (iters > 0) o.iters = iters;
        o.ablate_init_penalty = ablate;
        if (!out_dir.empty()) o.out_dir = out_dir;
        return qrm::cli::resolve_config(file, o);
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quasi-reversibility reconstruction of wave-equation initial conditions"};
    app.require_subcommand(1);

    FlagSet sim_flags, rec_flags, run_flags, sweep_flags;
    std::string run_test_name, rec_data_dir, report_dir;

    CLI::App* sim = app.add_subcommand("simulate", "generate phantom, forward data and noise");
    sim_flags.attach(sim, false);

    CLI::App* rec = app.add_subcommand("reconstruct", "invert previously simulated data");
    rec_flags.attach(rec, false);
    rec->add_option("--data", rec_data_dir, "directory holding cauchy data files")->required();

    CLI::App* run = app.add_subcommand("run-test", "simulate + reconstruct a named preset");
    run->add_option("name", run_test_name, "preset name (test1..test5)")->required();
    run_flags.attach(run, false);

    CLI::App* sweep = app.add_subcommand("sweep", "noise sweep over seeds");
    sweep_flags.attach(sweep, true);

    CLI::App* report = app.add_subcommand("report", "verify a run directory and print summary");
    report->add_option("dir", report_dir, "run directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 2;
    }

    try {
        if (sim->parsed()) qrm::cli::cmd_simulate(sim_flags.resolve());
        else if (rec->parsed()) qrm::cli::cmd_reconstruct(rec_flags.resolve(), rec_data_dir);
        else if (run->parsed()) qrm::cli::cmd_run_test(run_flags.resolve(run_test_name));
        else if (sweep->parsed()) qrm::cli::cmd_sweep(sweep_flags.resolve());
        else if (report->parsed()) qrm::cli::cmd_report(report_dir);
        return 0;
    } catch (const qrm::ConfigError& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return 2;
    } catch (const qrm::DataError& e) {
        std::cerr << "error: data: " << e.what() << "\n";
        return 3;
    } catch (const qrm::GridMismatchError& e) {
        std::cerr << "error: data: " << e.what() << "\n";
        return 3;
    } catch (const qrm::NodeMisalignedError& e) {
        std::cerr << "error: data: " << e.what() << "\n";
        return 3;
    } catch (const qrm::NonCommensurateError& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: numeric: " << e.what() << "\n";
        return 4;
    }
}
