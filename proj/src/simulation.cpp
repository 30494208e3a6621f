#include "tvcp/simulation.hpp"

#include "tvcp/cross_validation.hpp"
#include "tvcp/errors.hpp"
#include "tvcp/fused_lasso.hpp"
#include "tvcp/metrics.hpp"
#include "tvcp/parallel.hpp"
#include "tvcp/rng.hpp"
#include "tvcp/signal_io.hpp"
#include "tvcp/tau_select.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tvcp {

Signal gen_signal(const GeneratorSpec& spec) {
    const auto levels = static_cast<Index>(spec.levels.size());
    if (levels < 1) throw InputError("generator needs at least one level");
    if (spec.n < levels) throw InputError("generator needs n >= number of levels");
    const Index width = spec.n / levels;
    const Index extra = spec.n % levels;
    std::vector<double> theta;
    theta.reserve(static_cast<std::size_t>(spec.n));
    for (Index k = 0; k < levels; ++k) {
        const Index w = width + (k >= levels - extra ? 1 : 0);
        theta.insert(theta.end(), static_cast<std::size_t>(w), spec.levels[static_cast<std::size_t>(k)]);
    }
    return Signal(std::move(theta));
}

Signal gen_data(const GeneratorSpec& spec) {
    if (!(spec.noise_sd >= 0.0)) throw InputError("noise standard deviation must be >= 0");
    Signal theta = gen_signal(spec);
    if (spec.noise_sd == 0.0) return theta;
    Rng rng(mix_seed(spec.seed));
    std::normal_distribution<double> noise(0.0, spec.noise_sd);
    std::vector<double> y = theta.vector();
    for (double& v : y) v += noise(rng);
    return Signal(std::move(y));
}

ChangepointSet true_changepoints(const GeneratorSpec& spec) { return changepoints(gen_signal(spec)); }

TauMode parse_tau_mode(const std::string& s) {
    if (s == "fixed") return TauMode::fixed;
    if (s == "data-driven" || s == "auto") return TauMode::data_driven;
    if (s == "oracle") return TauMode::oracle;
    throw InputError("unknown threshold mode '" + s + "' (expected fixed, data-driven or oracle)");
}

std::string to_string(TauMode m) {
    switch (m) {
        case TauMode::fixed: return "fixed";
        case TauMode::data_driven: return "data-driven";
        case TauMode::oracle: return "oracle";
    }
    return "?";
}

FitStage fit_stage(const GeneratorSpec& spec, const PipelineConfig& config) {
    Signal theta0 = gen_signal(spec);
    ChangepointSet s0 = changepoints(theta0);
    Signal y = gen_data(spec);
    double lambda = config.fixed_lambda;
    if (!(lambda > 0.0)) {
        lambda = cv_select_lambda(y, default_lambda_grid(y, config.lambda_grid_size), config.cv_folds).lambda;
    }
    Signal theta_hat = fused_lasso_1d(y, lambda).theta_hat;
    const Bandwidth bw = config.bandwidth > 0 ? Bandwidth{config.bandwidth, false}
                                              : auto_bandwidth(static_cast<std::size_t>(spec.n));
    ChangepointSet raw = changepoints(theta_hat);
    FilterProfile profile = haar_filter(theta_hat, bw.value);
    ChangepointSet cand = candidate_set(theta_hat, bw.value);
    double l2 = 0.0;
    for (std::size_t i = 0; i < theta0.size(); ++i) {
        const double d = theta_hat[i] - theta0[i];
        l2 += d * d;
    }
    l2 /= static_cast<double>(theta0.size());
    return FitStage{spec,  std::move(theta0), std::move(s0),      std::move(y),    std::move(theta_hat), lambda,
                    bw,    std::move(raw),    std::move(profile), std::move(cand), l2};
}

std::vector<double> permutation_maxima(const FitStage& stage, const PipelineConfig& config) {
    const Fitter fit = config.fixed_lambda > 0.0 ? fixed_fused_lasso_fitter(config.fixed_lambda)
                                                 : cv_fused_lasso_fitter(config.cv_folds, config.lambda_grid_size);
    TauSelectionConfig tc;
    tc.permutations = config.permutations;
    tc.bandwidth = stage.bandwidth.value;
    tc.q = config.q;
    tc.seed = derive_seed(stage.spec.seed, 0x7461755fULL);
    return select_tau(stage.y, stage.theta_hat, fit, tc).per_permutation_maxima;
}

TrialRecord finish_trial(const FitStage& stage, const PipelineConfig& config, double tau) {
    TrialRecord r;
    r.spec = stage.spec;
    r.lambda = stage.lambda;
    r.b = stage.bandwidth.value;
    r.bandwidth_clamped = stage.bandwidth.clamped;
    r.tau = tau;
    r.true_changepoints = stage.s0;
    r.raw_changepoints = stage.raw;
    r.filtered_changepoints = reduced_filter_set(stage.profile, stage.candidates, tau).locations;
    r.full_filtered_changepoints = full_filter_set(stage.profile, tau).locations;
    r.l2_error = stage.l2_error;
    r.d_screen = screening_distance(r.filtered_changepoints, stage.s0);
    r.d_precision = screening_distance(stage.s0, r.filtered_changepoints);
    r.d_hausdorff_raw = hausdorff(stage.raw, stage.s0);
    r.d_hausdorff_filtered = hausdorff(r.filtered_changepoints, stage.s0);
    r.d_hausdorff_full = hausdorff(r.full_filtered_changepoints, stage.s0);

    double h = min_gap(stage.theta0, stage.s0);
    if (!std::isfinite(h)) h = stage.profile.max_abs();
    const std::size_t g = std::max<std::size_t>(config.oracle_grid_size, 2);
    r.tau_oracle = tau;
    r.d_hausdorff_oracle = r.d_hausdorff_filtered;
    for (std::size_t k = 0; k < g; ++k) {
        const double t = 2.0 * h * static_cast<double>(k) / static_cast<double>(g - 1);
        const ExtendedDistance d = hausdorff(reduced_filter_set(stage.profile, stage.candidates, t).locations, stage.s0);
        if (d < r.d_hausdorff_oracle || (d == r.d_hausdorff_oracle && t < r.tau_oracle)) {
            r.d_hausdorff_oracle = d;
            r.tau_oracle = t;
        }
    }
    return r;
}

TrialRecord run_trial(const GeneratorSpec& spec, const PipelineConfig& config) {
    const FitStage stage = fit_stage(spec, config);
    switch (config.tau_mode) {
        case TauMode::fixed:
            return finish_trial(stage, config, config.tau);
        case TauMode::data_driven:
            return finish_trial(stage, config, upper_quantile(permutation_maxima(stage, config), config.q));
        case TauMode::oracle: {
            const TrialRecord probe = finish_trial(stage, config, 0.0);
            return finish_trial(stage, config, probe.tau_oracle);
        }
    }
    throw InputError("unknown threshold mode");
}

Rates fpr_tpr(const std::vector<TrialRecord>& records, Index b) {
    if (records.empty()) throw InputError("rates need at least one trial");
    const ExtendedDistance bd(static_cast<double>(b));
    std::size_t fp = 0, tp = 0;
    for (const auto& r : records) {
        if (r.d_precision > bd) ++fp;
        if (r.d_screen <= bd) ++tp;
    }
    const auto m = static_cast<double>(records.size());
    return {static_cast<double>(fp) / m, static_cast<double>(tp) / m};
}

Rates fpr_tpr(const std::vector<TrialRecord>& records) {
    if (records.empty()) throw InputError("rates need at least one trial");
    std::size_t fp = 0, tp = 0;
    for (const auto& r : records) {
        const ExtendedDistance bd(static_cast<double>(r.b));
        if (r.d_precision > bd) ++fp;
        if (r.d_screen <= bd) ++tp;
    }
    const auto m = static_cast<double>(records.size());
    return {static_cast<double>(fp) / m, static_cast<double>(tp) / m};
}

Summary summarize(std::vector<double> values) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (values.empty()) return {nan, nan, nan};
    std::sort(values.begin(), values.end());
    auto q = [&](double p) {
        const double h = static_cast<double>(values.size() - 1) * p;
        const auto lo = static_cast<std::size_t>(std::floor(h));
        const std::size_t hi = std::min(lo + 1, values.size() - 1);
        const double frac = h - static_cast<double>(lo);
        if (frac == 0.0 || values[lo] == values[hi]) return values[lo];
        return values[lo] + frac * (values[hi] - values[lo]);
    };
    return {q(0.25), q(0.5), q(0.75)};
}

std::uint64_t trial_seed(std::uint64_t master, Index n, int trial) {
    return derive_seed(master, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(trial));
}

namespace {

SweepRow aggregate(const SweepConfig& config, const std::vector<TrialRecord>& recs, double tau_param, double q,
                   const std::string& mode) {
    SweepRow row;
    row.experiment = config.experiment;
    row.n = recs.front().spec.n;
    row.tau_mode = mode;
    row.tau_param = tau_param;
    row.q = q;
    row.trials = static_cast<int>(recs.size());
    row.b = recs.front().b;
    auto collect = [&](auto get) {
        std::vector<double> v;
        v.reserve(recs.size());
        for (const auto& r : recs) v.push_back(get(r));
        return summarize(std::move(v));
    };
    row.median_lambda = collect([](const TrialRecord& r) { return r.lambda; }).median;
    row.median_l2_error = collect([](const TrialRecord& r) { return r.l2_error; }).median;
    row.median_tau = collect([](const TrialRecord& r) { return r.tau; }).median;
    row.d_screen = collect([](const TrialRecord& r) { return r.d_screen.value(); });
    row.d_precision = collect([](const TrialRecord& r) { return r.d_precision.value(); });
    row.haus_raw = collect([](const TrialRecord& r) { return r.d_hausdorff_raw.value(); });
    row.haus_filtered = collect([](const TrialRecord& r) { return r.d_hausdorff_filtered.value(); });
    row.haus_full = collect([](const TrialRecord& r) { return r.d_hausdorff_full.value(); });
    row.haus_oracle = collect([](const TrialRecord& r) { return r.d_hausdorff_oracle.value(); });
    const Rates rates = fpr_tpr(recs);
    row.fpr = rates.fpr;
    row.tpr = rates.tpr;
    row.containment_violations = 0;
    row.size_violations = 0;
    for (const auto& r : recs) {
        const double b = static_cast<double>(r.b);
        if (r.d_hausdorff_full.value() <= b && r.d_hausdorff_filtered.value() > 2.0 * b) ++row.containment_violations;
        if (r.filtered_changepoints.size() > 3 * r.raw_changepoints.size() + 2) ++row.size_violations;
    }
    return row;
}

}  // namespace

SweepResult sweep(const SweepConfig& config) {
    if (config.grid.empty()) throw InputError("sweep grid is empty");
    if (config.trials < 1) throw InputError("sweep needs at least one trial");
    const std::size_t points = config.grid.size();
    const auto trials = static_cast<std::size_t>(config.trials);
    SweepResult out;
    out.records.assign(points, std::vector<TrialRecord>(trials));
    const double nan = std::numeric_limits<double>::quiet_NaN();

    auto spec_for = [&](Index n, std::size_t t) {
        GeneratorSpec spec = config.base;
        spec.n = n;
        spec.seed = trial_seed(config.master_seed, n, static_cast<int>(t));
        return spec;
    };

    if (config.axis == SweepAxis::n) {
        for (double v : config.grid) {
            if (!(v >= 1.0) || v != std::floor(v)) throw InputError("sample sizes must be positive integers");
        }
        parallel_for(points * trials, config.jobs, [&](std::size_t task) {
            const std::size_t p = task / trials, t = task % trials;
            out.records[p][t] = run_trial(spec_for(static_cast<Index>(config.grid[p]), t), config.pipeline);
        });
        for (std::size_t p = 0; p < points; ++p) {
            const PipelineConfig& pc = config.pipeline;
            out.rows.push_back(aggregate(config, out.records[p], pc.tau_mode == TauMode::fixed ? pc.tau : nan,
                                         pc.tau_mode == TauMode::data_driven ? pc.q : nan, to_string(pc.tau_mode)));
        }
        return out;
    }

    for (double v : config.grid) {
        if (config.axis == SweepAxis::tau && !(v >= 0.0)) throw InputError("thresholds must be >= 0");
        if (config.axis == SweepAxis::q && !(v > 0.0 && v < 1.0)) throw InputError("quantile levels must lie in (0, 1)");
    }
    parallel_for(trials, config.jobs, [&](std::size_t t) {
        const FitStage stage = fit_stage(spec_for(config.base.n, t), config.pipeline);
        if (config.axis == SweepAxis::tau) {
            for (std::size_t p = 0; p < points; ++p) out.records[p][t] = finish_trial(stage, config.pipeline, config.grid[p]);
        } else {
            const std::vector<double> maxima = permutation_maxima(stage, config.pipeline);
            for (std::size_t p = 0; p < points; ++p) {
                out.records[p][t] = finish_trial(stage, config.pipeline, upper_quantile(maxima, config.grid[p]));
            }
        }
    });
    for (std::size_t p = 0; p < points; ++p) {
        if (config.axis == SweepAxis::tau) {
            out.rows.push_back(aggregate(config, out.records[p], config.grid[p], nan, "fixed"));
        } else {
            out.rows.push_back(aggregate(config, out.records[p], nan, config.grid[p], "data-driven"));
        }
    }
    return out;
}

std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
    if (!(lo > 0.0 && hi >= lo) || count == 0) throw InputError("log spacing needs 0 < lo <= hi and count >= 1");
    if (count == 1) return {std::round(lo)};
    std::vector<double> out;
    const double a = std::log(lo), c = std::log(hi);
    for (std::size_t k = 0; k < count; ++k) {
        out.push_back(std::round(std::exp(a + (c - a) * static_cast<double>(k) / static_cast<double>(count - 1))));
    }
    return out;
}

SweepConfig experiment_preset(const std::string& name) {
    SweepConfig c;
    c.experiment = name;
    if (name == "haus-vs-n") {
        c.axis = SweepAxis::n;
        c.grid = {100, 774, 3000};
        c.pipeline.tau_mode = TauMode::data_driven;
        c.trials = 50;
    } else if (name == "tau-sweep") {
        c.axis = SweepAxis::tau;
        for (int k = 0; k <= 20; ++k) c.grid.push_back(0.1 * k);
        c.base.n = 774;
        c.pipeline.tau_mode = TauMode::fixed;
        c.trials = 100;
    } else if (name == "q-sweep") {
        c.axis = SweepAxis::q;
        c.grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99};
        c.base.n = 774;
        c.pipeline.tau_mode = TauMode::data_driven;
        c.trials = 50;
    } else if (name == "l2-scaling") {
        c.axis = SweepAxis::n;
        c.grid = log_spaced(100, 10000, 9);
        c.pipeline.tau_mode = TauMode::fixed;
        c.trials = 20;
    } else {
        throw InputError("unknown experiment '" + name + "' (expected haus-vs-n, tau-sweep, q-sweep or l2-scaling)");
    }
    return c;
}

namespace {

std::string fmt(double v) { return std::isnan(v) ? std::string() : format_double(v); }

}  // namespace

void write_summary_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "experiment,n,tau_mode,tau,q,trials,b,median_lambda,median_l2_error,median_tau";
    for (const char* d : {"d_screen", "d_precision", "haus_raw", "haus_filtered", "haus_full", "haus_oracle"}) {
        out << ',' << d << "_q25," << d << "_median," << d << "_q75";
    }
    out << ",fpr,tpr,containment_violations,size_violations\n";
    for (const auto& r : rows) {
        out << r.experiment << ',' << r.n << ',' << r.tau_mode << ',' << fmt(r.tau_param) << ',' << fmt(r.q) << ','
            << r.trials << ',' << r.b << ',' << fmt(r.median_lambda) << ',' << fmt(r.median_l2_error) << ','
            << fmt(r.median_tau);
        for (const Summary* s : {&r.d_screen, &r.d_precision, &r.haus_raw, &r.haus_filtered, &r.haus_full,
                                 &r.haus_oracle}) {
            out << ',' << fmt(s->q25) << ',' << fmt(s->median) << ',' << fmt(s->q75);
        }
        out << ',' << fmt(r.fpr) << ',' << fmt(r.tpr) << ',' << r.containment_violations << ','
            << r.size_violations << '\n';
    }
}

void write_trials_csv(std::ostream& out, const SweepConfig& config, const SweepResult& result) {
    out << "experiment,point,grid_value,trial,seed,n,b,lambda,tau,l2_error,n_raw,n_filtered,n_full,d_screen,"
           "d_precision,haus_raw,haus_filtered,haus_full,tau_oracle,haus_oracle\n";
    for (std::size_t p = 0; p < result.records.size(); ++p) {
        for (std::size_t t = 0; t < result.records[p].size(); ++t) {
            const TrialRecord& r = result.records[p][t];
            out << config.experiment << ',' << p << ',' << fmt(config.grid[p]) << ',' << t << ',' << r.spec.seed
                << ',' << r.spec.n << ',' << r.b << ',' << fmt(r.lambda) << ',' << fmt(r.tau) << ','
                << fmt(r.l2_error) << ',' << r.raw_changepoints.size() << ',' << r.filtered_changepoints.size() << ','
                << r.full_filtered_changepoints.size() << ',' << fmt(r.d_screen.value()) << ','
                << fmt(r.d_precision.value()) << ',' << fmt(r.d_hausdorff_raw.value()) << ','
                << fmt(r.d_hausdorff_filtered.value()) << ',' << fmt(r.d_hausdorff_full.value()) << ','
                << fmt(r.tau_oracle) << ',' << fmt(r.d_hausdorff_oracle.value()) << '\n';
        }
    }
}

}  // namespace tvcp
