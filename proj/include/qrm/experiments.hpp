#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qrm/forward.hpp"
#include "qrm/functional.hpp"
#include "qrm/noise.hpp"
#include "qrm/optimizer.hpp"
#include "qrm/phantoms.hpp"

namespace qrm {

/// A named end-to-end configuration: geometry, steps, phantom, problem
/// kind, weights and iteration budget. test1/2/5 run the quadrant problem
/// on Omega = (0,4)^2 with T = 3 and data on the near edges only;
/// test3/4 run on Omega = SQ(1) with data on the whole boundary.
struct ExperimentPreset {
    std::string name;
    Extent extent;                    // Omega x (0, T)
    Steps steps;
    double support_a = 1.0;
    Phantom phantom = Phantom::SineFull;
    ProblemKind kind = ProblemKind::Phi;
    bool zero_far_edges = true;       // quadrant convention: f = g = 0 on Gamma3/4
    std::vector<double> noise_levels; // noise levels this test is usually run at
    double default_noise = 0.25;
    bool ablate_init_penalty = false; // drop the known-initial-condition term
    Weights weights;
    int max_iters = 300;
};

std::vector<std::string> preset_names();
ExperimentPreset preset(const std::string& name);

struct Peak {
    int m = 0, n = 0;
    double x1 = 0.0, x2 = 0.0;
    double height = 0.0;
};

struct Metrics {
    double rel_l2_error = 0.0;
    double max_value = 0.0;
    double min_value = 0.0;
    double field_correlation = 0.0;   // Pearson, reconstruction vs exact
    std::vector<double> cross_section; // column at x1 = 0.5
    std::vector<Peak> peaks;
};

struct RunReport {
    ExperimentPreset config;
    double gamma = 0.0;
    std::uint64_t seed = 0;
    SpaceTimeGrid grid;
    Metrics metrics;
    FunctionalBreakdown final_breakdown;
    FunctionalBreakdown zero_breakdown; // J at the zero start point
    ConvergenceHistory history;
    SpatialField reconstruction;
    SpatialField exact;
    std::vector<std::string> warnings;
};

/// phantom -> forward solve -> Cauchy extraction -> noise -> minimization
/// -> initial-condition readout and metrics. Deterministic in (preset,
/// gamma, seed).
RunReport run_experiment(const ExperimentPreset& p, double gamma, std::uint64_t seed);
RunReport run_experiment(const ExperimentPreset& p, std::uint64_t seed);

struct SweepRow {
    double gamma = 0.0;
    std::uint64_t seed = 0;
    double rel_l2_error = 0.0;
    double max_value = 0.0;
    double min_value = 0.0;
};

struct SweepReport {
    std::vector<SweepRow> rows;
    std::vector<double> gammas;
    std::vector<double> mean_rel_l2;
};

/// Seeds are consecutive from base_seed, so one seed per gamma reproduces
/// the single-run metrics exactly.
SweepReport noise_sweep(const ExperimentPreset& p, const std::vector<double>& gammas,
                        int seeds_per_gamma, std::uint64_t base_seed);

/// Column of nodal values along x1 = x1_value (must be a grid column).
std::vector<double> cross_section(const SpatialField& v, const SpaceTimeGrid& grid,
                                  double x1_value);

/// Local maxima strictly above half the global maximum, tallest first.
std::vector<Peak> peak_metrics(const SpatialField& v, const SpaceTimeGrid& grid);

/// Pearson correlation over all nodes; 0 when either side is constant.
double field_correlation(const SpatialField& a, const SpatialField& b);

/// Simulated experiment data, the part of the pipeline before inversion.
struct SimulatedData {
    SpaceTimeGrid inverse_grid;
    SpatialField phantom_field; // on the inverse grid
    CauchyData clean;
    CauchyData noisy;
    double forward_max_abs = 0.0;
    std::vector<std::string> warnings;
};

SimulatedData simulate_experiment(const ExperimentPreset& p, double gamma, std::uint64_t seed);

/// Inversion from given data: builds the functional, minimizes, reads the
/// unknown initial condition off the minimizer and computes metrics.
RunReport reconstruct_from_data(const ExperimentPreset& p, const CauchyData& data,
                                double gamma, std::uint64_t seed);

} // namespace qrm
