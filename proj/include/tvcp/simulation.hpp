#pragma once

#include "tvcp/haar_filter.hpp"
#include "tvcp/signal.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace tvcp {

struct GeneratorSpec {
    Index n = 774;
    std::vector<double> levels{0.0, 2.0, 4.0, 1.0, 4.0};
    double noise_sd = 2.0;
    std::uint64_t seed = 0;
};

/// Piecewise-constant mean with one equal-width segment per level. Widths are
/// floor(n / L); the remainder adds one position to each of the trailing
/// segments.
Signal gen_signal(const GeneratorSpec& spec);
/// Mean plus i.i.d. N(0, noise_sd^2) noise from a generator seeded by spec.seed.
Signal gen_data(const GeneratorSpec& spec);
/// Changepoints of gen_signal(spec).
ChangepointSet true_changepoints(const GeneratorSpec& spec);

enum class TauMode { fixed, data_driven, oracle };

TauMode parse_tau_mode(const std::string& s);
std::string to_string(TauMode m);

struct PipelineConfig {
    int cv_folds = 5;
    std::size_t lambda_grid_size = 50;
    /// > 0 skips CV and uses this lambda.
    double fixed_lambda = 0.0;
    /// 0 selects the log rule.
    Index bandwidth = 0;
    TauMode tau_mode = TauMode::data_driven;
    double tau = 1.0;  ///< used when tau_mode is fixed
    int permutations = 100;
    double q = 0.95;
    std::size_t oracle_grid_size = 101;
};

struct TrialRecord {
    GeneratorSpec spec;
    double lambda = 0.0;
    Index b = 0;
    bool bandwidth_clamped = false;
    double tau = 0.0;
    ChangepointSet true_changepoints;
    ChangepointSet raw_changepoints;
    ChangepointSet filtered_changepoints;  ///< reduced set at tau
    ChangepointSet full_filtered_changepoints;
    double l2_error = 0.0;  ///< ||theta_hat - theta_0||^2 / n
    ExtendedDistance d_screen;     ///< d(S_R | S_0)
    ExtendedDistance d_precision;  ///< d(S_0 | S_R)
    ExtendedDistance d_hausdorff_raw;
    ExtendedDistance d_hausdorff_filtered;
    ExtendedDistance d_hausdorff_full;
    double tau_oracle = 0.0;
    ExtendedDistance d_hausdorff_oracle;
};

/// Everything in a trial that does not depend on the threshold.
struct FitStage {
    GeneratorSpec spec;
    Signal theta0;
    ChangepointSet s0;
    Signal y;
    Signal theta_hat;
    double lambda;
    Bandwidth bandwidth;
    ChangepointSet raw;
    FilterProfile profile;
    ChangepointSet candidates;
    double l2_error;
};

FitStage fit_stage(const GeneratorSpec& spec, const PipelineConfig& config);

/// Permutation maxima for the data-driven threshold of a fitted trial. The
/// permutation stream is derived from the trial seed.
std::vector<double> permutation_maxima(const FitStage& stage, const PipelineConfig& config);

/// Filters at `tau` and records all distances. The oracle scan covers
/// oracle_grid_size equispaced values on [0, 2 H_n] together with `tau`.
TrialRecord finish_trial(const FitStage& stage, const PipelineConfig& config, double tau);

/// generate -> CV fit -> bandwidth -> threshold -> reduced filter -> distances.
TrialRecord run_trial(const GeneratorSpec& spec, const PipelineConfig& config);

struct Rates {
    double fpr;
    double tpr;
};

/// FPR = share of trials with d(S_0 | S_R) > b; TPR = share with d(S_R | S_0) <= b.
Rates fpr_tpr(const std::vector<TrialRecord>& records, Index b);
/// Same with each record's own bandwidth.
Rates fpr_tpr(const std::vector<TrialRecord>& records);

enum class SweepAxis { n, tau, q };

struct SweepConfig {
    std::string experiment;  ///< label written to every row
    SweepAxis axis = SweepAxis::n;
    std::vector<double> grid;
    GeneratorSpec base;
    PipelineConfig pipeline;
    int trials = 50;
    std::uint64_t master_seed = 0;
    unsigned jobs = 1;
};

struct Summary {
    double q25, median, q75;
};

/// Linear-interpolation quantiles (type 7); infinities are ordered last.
Summary summarize(std::vector<double> values);

struct SweepRow {
    std::string experiment;
    Index n;
    std::string tau_mode;
    double tau_param;  ///< fixed tau on tau sweeps, NaN otherwise
    double q;
    int trials;
    Index b;
    double median_lambda;
    double median_l2_error;
    double median_tau;
    Summary d_screen, d_precision, haus_raw, haus_filtered, haus_full, haus_oracle;
    double fpr, tpr;
    int containment_violations;  ///< d_H(S_F,S_0) <= b but d_H(S_R,S_0) > 2b
    int size_violations;         ///< |S_R| > 3|S(theta)| + 2
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<std::vector<TrialRecord>> records;  ///< one vector per grid point
};

/// Seed of trial t at a grid point of size n. Threshold and quantile sweeps
/// share n, so every grid point sees the same data (common random numbers).
std::uint64_t trial_seed(std::uint64_t master, Index n, int trial);

SweepResult sweep(const SweepConfig& config);

/// n points equally spaced on a log scale between lo and hi (rounded).
std::vector<double> log_spaced(double lo, double hi, std::size_t count);

/// Preset for haus-vs-n, tau-sweep, q-sweep, l2-scaling.
SweepConfig experiment_preset(const std::string& name);

void write_summary_csv(std::ostream& out, const std::vector<SweepRow>& rows);
/// One row per trial, for plotting.
void write_trials_csv(std::ostream& out, const SweepConfig& config, const SweepResult& result);

}  // namespace tvcp
