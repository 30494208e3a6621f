#include "tvcp/cli.hpp"

#include "tvcp/cross_validation.hpp"
#include "tvcp/errors.hpp"
#include "tvcp/fused_lasso.hpp"
#include "tvcp/graph.hpp"
#include "tvcp/graph_fused_lasso.hpp"
#include "tvcp/haar_filter.hpp"
#include "tvcp/interpolant.hpp"
#include "tvcp/metrics.hpp"
#include "tvcp/signal_io.hpp"
#include "tvcp/simulation.hpp"
#include "tvcp/tau_select.hpp"
#include "tvcp/trend_filter.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

#ifndef TVCP_VERSION
#define TVCP_VERSION "0.0.0"
#endif

namespace tvcp::cli {

using nlohmann::json;

std::string version_string() { return std::string("tvcp ") + TVCP_VERSION; }

std::string sha256_file(const std::string& path) {
    const std::string bytes = read_text_file(path);
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), md, &len) != 1) {
        throw std::runtime_error("sha256 failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

namespace {

json distance_json(const ExtendedDistance& d) {
    if (d.is_infinite()) return "inf";
    return d.value();
}

json changepoints_json(const ChangepointSet& s) { return json(s.vector()); }

json edges_json(const EdgeSet& s) {
    json a = json::array();
    for (const Edge& e : s) a.push_back({e.u, e.v});
    return a;
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("TVCP_SEED")) {
        try {
            std::size_t pos = 0;
            const unsigned long long v = std::stoull(env, &pos);
            if (pos == std::string(env).size()) return v;
        } catch (const std::exception&) {
        }
        throw InputError(std::string("TVCP_SEED is not an unsigned integer: ") + env);
    }
    return 0;
}

/// Bookkeeping shared by all subcommands: what ran, with which inputs.
struct Run {
    std::string subcommand;
    std::vector<std::string> argv;
    json params = json::object();
    json inputs = json::array();
    std::optional<std::uint64_t> seed;

    void add_input(const std::string& role, const std::string& path) {
        inputs.push_back({{"role", role}, {"path", path}, {"sha256", sha256_file(path)}});
    }

    json manifest() const {
        json m;
        m["subcommand"] = subcommand;
        std::vector<std::string> canon = argv;
        if (seed && std::find(canon.begin(), canon.end(), "--seed") == canon.end()) {
            canon.push_back("--seed");
            canon.push_back(std::to_string(*seed));
        }
        m["argv"] = canon;
        m["parameters"] = params;
        m["inputs"] = inputs;
        m["seed"] = seed ? json(*seed) : json(nullptr);
        m["version"] = version_string();
        return m;
    }
};

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot open output file: " + path);
    f << text;
    if (!f) throw InputError("failed writing output file: " + path);
}

void write_json(const std::string& path, const json& j, std::ostream& out) {
    const std::string text = j.dump(2) + "\n";
    if (path.empty() || path == "-") out << text;
    else write_file(path, text);
}

Index resolve_bandwidth(const std::string& spec, std::size_t n, Run& run) {
    if (spec == "auto") {
        const Bandwidth bw = auto_bandwidth(n);
        run.params["bandwidth"] = bw.value;
        run.params["bandwidth_clamped"] = bw.clamped;
        return bw.value;
    }
    Index b = 0;
    try {
        std::size_t pos = 0;
        b = std::stoll(spec, &pos);
        if (pos != spec.size()) throw InputError("");
    } catch (const std::exception&) {
        throw InputError("--bandwidth must be 'auto' or a positive integer, got '" + spec + "'");
    }
    if (b < 1) throw InputError("--bandwidth must be >= 1");
    run.params["bandwidth"] = b;
    run.params["bandwidth_clamped"] = false;
    return b;
}

struct CvSpec {
    int k = 5;
    std::size_t grid = 50;
};

CvSpec parse_cv_spec(const std::string& text) {
    CvSpec cv;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw InputError("--cv expects key=value pairs, got '" + item + "'");
        const std::string key = item.substr(0, eq), val = item.substr(eq + 1);
        try {
            if (key == "k") cv.k = std::stoi(val);
            else if (key == "grid") cv.grid = val == "auto" ? 50 : std::stoul(val);
            else throw InputError("unknown --cv key '" + key + "'");
        } catch (const InputError&) {
            throw;
        } catch (const std::exception&) {
            throw InputError("bad --cv value '" + item + "'");
        }
    }
    if (cv.grid < 1) throw InputError("--cv grid must have at least one point");
    return cv;
}

Fitter make_fitter(const std::string& name, double lambda, const CvSpec& cv, Run& run) {
    run.params["fitter"] = name;
    if (name == "fl1d-cv") {
        run.params["cv_folds"] = cv.k;
        run.params["cv_grid_size"] = cv.grid;
        return cv_fused_lasso_fitter(cv.k, cv.grid);
    }
    if (name == "fl1d") {
        if (!(lambda >= 0.0)) throw InputError("fitter fl1d needs --lambda >= 0");
        run.params["lambda"] = lambda;
        return fixed_fused_lasso_fitter(lambda);
    }
    throw InputError("unknown fitter '" + name + "' (expected fl1d-cv or fl1d)");
}

// ---- subcommand option holders ----

struct FitOpts {
    std::string model = "fl1d", input, graph, output = "fit.json", cv;
    double lambda = -1.0;
    double tol = 0.0;
};

struct FilterOpts {
    std::string input, data, fitter = "fl1d-cv", bandwidth = "auto", tau = "auto", variant = "reduced",
                output = "filter.json", cv = "k=5,grid=auto";
    double lambda = -1.0;
    int permutations = 100;
    double q = 0.95;
    std::optional<std::uint64_t> seed;
    unsigned jobs = 1;
};

struct SelectOpts {
    std::string input, fitter = "fl1d-cv", bandwidth = "auto", output = "tau.json", cv = "k=5,grid=auto";
    double lambda = -1.0;
    int permutations = 100;
    double q = 0.95;
    std::optional<std::uint64_t> seed;
    unsigned jobs = 1;
};

struct InterpOpts {
    std::string input, changepoints, output = "z.json";
    bool verify = false;
    double min_spacing = 0.0;
};

struct MetricsOpts {
    std::string kind, a, b, graph, output = "-";
    std::size_t n_nodes = 0;
};

struct SimOpts {
    std::string experiment, out = "results.csv", grid, tau_mode;
    int trials = -1;
    std::optional<std::uint64_t> seed;
    unsigned jobs = 1;
    bool emit_plots = false;
    int permutations = -1;
    double q = -1.0, tau = -1.0;
};

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            std::size_t pos = 0;
            v.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw InputError("");
        } catch (const std::exception&) {
            throw InputError("bad number in list: '" + item + "'");
        }
    }
    if (v.empty()) throw InputError("empty number list");
    return v;
}

// ---- handlers ----

int run_fit(const FitOpts& o, Run& run, std::ostream& out) {
    run.add_input("input", o.input);
    const Signal y = read_signal(o.input);
    const bool have_lambda = o.lambda >= 0.0;
    if (have_lambda == !o.cv.empty()) throw InputError("fit needs exactly one of --lambda or --cv");
    run.params["model"] = o.model;
    json result;
    result["model"] = o.model;

    double lambda = o.lambda;
    if (!o.cv.empty()) {
        if (o.model != "fl1d") throw InputError("--cv is only available for --model fl1d");
        const CvSpec cv = parse_cv_spec(o.cv);
        const CvResult r = cv_select_lambda(y, default_lambda_grid(y, cv.grid), cv.k);
        lambda = r.lambda;
        run.params["cv_folds"] = cv.k;
        run.params["cv_grid_size"] = cv.grid;
        result["cv"] = {{"grid", r.grid}, {"errors", r.errors}, {"selected_index", r.index}};
    }
    run.params["lambda"] = lambda;
    result["lambda"] = lambda;

    if (o.model == "fl1d") {
        const FusedLassoFit fit = fused_lasso_1d(y, lambda);
        result["theta_hat"] = fit.theta_hat.vector();
        result["objective"] = fit.objective;
        result["changepoints"] = changepoints_json(changepoints(fit.theta_hat));
    } else if (o.model == "tf1") {
        const double tol = o.tol > 0.0 ? o.tol : 1e-8;
        run.params["tol"] = tol;
        const TrendFit fit = trend_filter_linear(y, lambda, tol);
        result["theta_hat"] = fit.theta_hat.vector();
        result["objective"] = fit.objective;
        result["duality_gap"] = fit.gap;
        result["iterations"] = fit.iterations;
        result["knots"] = changepoints_json(knots2(fit.theta_hat, default_knot_tol(fit.theta_hat)));
    } else if (o.model == "gfl") {
        if (o.graph.empty()) throw InputError("--model gfl needs --graph");
        run.add_input("graph", o.graph);
        const Graph g = parse_edge_list(read_text_file(o.graph), y.size());
        const double tol = o.tol > 0.0 ? o.tol : 1e-10;
        run.params["tol"] = tol;
        const FusedLassoFit fit = graph_fused_lasso(y, g, lambda, tol);
        result["theta_hat"] = fit.theta_hat.vector();
        result["objective"] = fit.objective;
        result["changepoints"] = edges_json(graph_changepoints(fit.theta_hat, g, default_graph_jump_tol(fit.theta_hat)));
    } else {
        throw InputError("unknown model '" + o.model + "' (expected fl1d, tf1 or gfl)");
    }
    result["manifest"] = run.manifest();
    write_json(o.output, result, out);
    return exit_ok;
}

int run_filter(const FilterOpts& o, Run& run, std::ostream& out) {
    if (o.input.empty() == o.data.empty()) throw InputError("filter needs exactly one of --input (fitted signal) or --data");
    std::optional<Signal> y;
    std::optional<Signal> theta;
    std::optional<Fitter> fitter;
    if (!o.data.empty()) {
        run.add_input("data", o.data);
        y = read_signal(o.data);
        fitter = make_fitter(o.fitter, o.lambda, parse_cv_spec(o.cv), run);
        theta = (*fitter)(*y);
    } else {
        run.add_input("input", o.input);
        theta = read_signal(o.input);
    }
    const Index b = resolve_bandwidth(o.bandwidth, theta->size(), run);
    json result;
    double tau = 0.0;
    if (o.tau == "auto") {
        if (!y) throw InputError("--tau auto needs --data so the fit can be rerun on permuted data");
        TauSelectionConfig tc;
        tc.permutations = o.permutations;
        tc.bandwidth = b;
        tc.q = o.q;
        tc.seed = o.seed ? *o.seed : default_seed();
        tc.jobs = o.jobs;
        run.seed = tc.seed;
        const TauSelection sel = select_tau(*y, *theta, *fitter, tc);
        tau = sel.tau_hat;
        run.params["permutations"] = o.permutations;
        run.params["q"] = o.q;
        result["per_permutation_maxima"] = sel.per_permutation_maxima;
    } else {
        try {
            std::size_t pos = 0;
            tau = std::stod(o.tau, &pos);
            if (pos != o.tau.size()) throw InputError("");
        } catch (const std::exception&) {
            throw InputError("--tau must be 'auto' or a number, got '" + o.tau + "'");
        }
    }
    run.params["tau"] = tau;
    run.params["variant"] = o.variant;
    const FilterProfile profile = haar_filter(*theta, b);
    FilteredSet set;
    if (o.variant == "reduced") {
        const ChangepointSet cand = candidate_set(*theta, b);
        set = reduced_filter_set(profile, cand, tau);
        result["candidates"] = changepoints_json(cand);
    } else if (o.variant == "full") {
        set = full_filter_set(profile, tau);
    } else {
        throw InputError("--variant must be reduced or full");
    }
    result["bandwidth"] = b;
    result["tau"] = tau;
    result["variant"] = o.variant;
    result["estimate_changepoints"] = changepoints_json(changepoints(*theta));
    result["locations"] = changepoints_json(set.locations);
    result["manifest"] = run.manifest();
    write_json(o.output, result, out);
    return exit_ok;
}

int run_select(const SelectOpts& o, Run& run, std::ostream& out) {
    run.add_input("input", o.input);
    const Signal y = read_signal(o.input);
    const Fitter fit = make_fitter(o.fitter, o.lambda, parse_cv_spec(o.cv), run);
    TauSelectionConfig tc;
    tc.permutations = o.permutations;
    tc.bandwidth = resolve_bandwidth(o.bandwidth, y.size(), run);
    tc.q = o.q;
    tc.seed = o.seed ? *o.seed : default_seed();
    tc.jobs = o.jobs;
    run.seed = tc.seed;
    run.params["permutations"] = o.permutations;
    run.params["q"] = o.q;
    const TauSelection sel = select_tau(y, fit, tc);
    run.params["tau_hat"] = sel.tau_hat;
    json result;
    result["tau_hat"] = sel.tau_hat;
    result["per_permutation_maxima"] = sel.per_permutation_maxima;
    result["B"] = o.permutations;
    result["b"] = tc.bandwidth;
    result["q"] = o.q;
    result["seed"] = tc.seed;
    result["manifest"] = run.manifest();
    write_json(o.output, result, out);
    return exit_ok;
}

/// A JSON array given inline on the command line, or the path of a file holding one.
std::string json_array_arg(const std::string& arg, const std::string& role, Run& run) {
    const auto lead = arg.find_first_not_of(" \t");
    if (lead != std::string::npos && arg[lead] == '[') {
        run.params[role] = arg;
        return arg;
    }
    run.add_input(role, arg);
    return read_text_file(arg);
}

int run_interpolant(const InterpOpts& o, Run& run, std::ostream& out) {
    run.add_input("input", o.input);
    const Signal x = read_signal(o.input);
    const ChangepointSet s0 = parse_changepoints_json(json_array_arg(o.changepoints, "changepoints", run));
    const InterpolantResult r = lower_interpolant(x, s0);
    json result;
    result["z"] = r.z.vector();
    result["breakpoints"] = r.breakpoints;
    json blocks = json::array();
    for (const Block& blk : r.blocks) blocks.push_back({blk.first, blk.last});
    result["blocks"] = blocks;
    result["in_class_M"] = check_class_M(r.z, s0);
    if (o.verify) {
        const InterpolantReport rep = verify_interpolant_properties(x, r.z, s0, o.min_spacing);
        json rel = json::array();
        for (const Relation& e : rep.relations) {
            rel.push_back({{"name", e.name}, {"lhs", e.lhs}, {"rhs", e.rhs},
                           {"kind", e.equality ? "equal" : "at_most"}, {"pass", e.pass}});
        }
        result["verification"] = {{"tolerance", rep.tolerance}, {"all_pass", rep.all_pass()}, {"relations", rel}};
        run.params["verify"] = true;
    }
    result["manifest"] = run.manifest();
    write_json(o.output, result, out);
    return exit_ok;
}

int run_metrics(const MetricsOpts& o, Run& run, std::ostream& out) {
    run.params["kind"] = o.kind;
    const std::string a_text = json_array_arg(o.a, "a", run);
    const std::string b_text = json_array_arg(o.b, "b", run);
    json result;
    result["kind"] = o.kind;
    if (o.kind == "dh" || o.kind == "screen") {
        const ChangepointSet a = parse_changepoints_json(a_text);
        const ChangepointSet b = parse_changepoints_json(b_text);
        result["value"] = distance_json(o.kind == "dh" ? hausdorff(a, b) : screening_distance(a, b));
    } else if (o.kind == "dg") {
        if (o.graph.empty()) throw InputError("--kind dg needs --graph");
        run.add_input("graph", o.graph);
        const Graph g = parse_edge_list(read_text_file(o.graph), o.n_nodes);
        const EdgeSet a = parse_edge_set_json(a_text);
        const EdgeSet b = parse_edge_set_json(b_text);
        a.validate_for(g);
        b.validate_for(g);
        result["value"] = distance_json(graph_screening_distance(a, b, g));
    } else {
        throw InputError("--kind must be dh, screen or dg");
    }
    result["manifest"] = run.manifest();
    write_json(o.output, result, out);
    return exit_ok;
}

std::string trials_path(const std::string& csv_path) {
    std::filesystem::path p(csv_path);
    const std::string stem = p.stem().string();
    return (p.parent_path() / (stem + "_trials.csv")).string();
}

int run_simulate(const SimOpts& o, Run& run, std::ostream&) {
    SweepConfig c = experiment_preset(o.experiment);
    if (o.trials >= 0) c.trials = o.trials;
    if (!o.grid.empty()) c.grid = parse_number_list(o.grid);
    if (o.permutations > 0) c.pipeline.permutations = o.permutations;
    if (o.q >= 0.0) c.pipeline.q = o.q;
    if (o.tau >= 0.0) c.pipeline.tau = o.tau;
    if (!o.tau_mode.empty()) {
        if (c.axis != SweepAxis::n) throw InputError("--tau-mode applies only to sample-size experiments");
        c.pipeline.tau_mode = parse_tau_mode(o.tau_mode);
    }
    c.master_seed = o.seed ? *o.seed : default_seed();
    c.jobs = o.jobs;
    run.seed = c.master_seed;
    run.params["experiment"] = c.experiment;
    run.params["grid"] = c.grid;
    run.params["trials"] = c.trials;
    run.params["n"] = c.base.n;
    run.params["tau_mode"] = to_string(c.pipeline.tau_mode);
    run.params["permutations"] = c.pipeline.permutations;
    run.params["q"] = c.pipeline.q;
    run.params["tau"] = c.pipeline.tau;
    run.params["cv_folds"] = c.pipeline.cv_folds;
    run.params["lambda_grid_size"] = c.pipeline.lambda_grid_size;
    run.params["oracle_grid_size"] = c.pipeline.oracle_grid_size;

    const SweepResult result = sweep(c);
    std::ostringstream csv;
    write_summary_csv(csv, result.rows);
    write_file(o.out, csv.str());
    json outputs = json::array({o.out});
    if (o.emit_plots) {
        std::ostringstream tr;
        write_trials_csv(tr, c, result);
        write_file(trials_path(o.out), tr.str());
        outputs.push_back(trials_path(o.out));
    }
    run.params["outputs"] = outputs;
    write_file(o.out + ".manifest.json", run.manifest().dump(2) + "\n");
    return exit_ok;
}

int run_rerun(const std::string& manifest_path, std::ostream& out, std::ostream& err) {
    json doc;
    try {
        doc = json::parse(read_text_file(manifest_path));
    } catch (const json::exception& e) {
        throw InputError("manifest is not valid JSON: " + std::string(e.what()));
    }
    const json& m = doc.contains("manifest") ? doc["manifest"] : doc;
    if (!m.contains("argv") || !m["argv"].is_array()) throw InputError("manifest has no argv");
    if (m.contains("inputs")) {
        for (const auto& in : m["inputs"]) {
            const std::string path = in.at("path").get<std::string>();
            if (sha256_file(path) != in.at("sha256").get<std::string>()) {
                throw InputError("input changed since the manifest was written: " + path);
            }
        }
    }
    const auto args = m["argv"].get<std::vector<std::string>>();
    if (!args.empty() && args.front() == "rerun") throw InputError("manifest would rerun itself");
    return dispatch(args, out, err);
}

void report(std::ostream& err, const char* kind, const std::string& message) {
    err << json{{"error", kind}, {"message", message}}.dump() << '\n';
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fused lasso changepoint tools", "tvcp"};
    app.set_version_flag("--version", version_string());
    app.require_subcommand(1);

    FitOpts fit;
    auto* fit_cmd = app.add_subcommand("fit", "Fit a fused lasso, trend filter, or graph fused lasso");
    fit_cmd->add_option("--model", fit.model, "fl1d | tf1 | gfl")->check(CLI::IsMember({"fl1d", "tf1", "gfl"}));
    fit_cmd->add_option("--input", fit.input, "Signal file")->required();
    fit_cmd->add_option("--lambda", fit.lambda, "Penalty level");
    fit_cmd->add_option("--cv", fit.cv, "Cross-validation, e.g. k=5,grid=auto (fl1d only)");
    fit_cmd->add_option("--graph", fit.graph, "Edge list (gfl)");
    fit_cmd->add_option("--tol", fit.tol, "Duality gap tolerance for iterative solvers");
    fit_cmd->add_option("--output", fit.output, "Output JSON ('-' for stdout)");

    FilterOpts filt;
    auto* filter_cmd = app.add_subcommand("filter", "Haar filter post-processing of a fitted signal");
    filter_cmd->add_option("--input", filt.input, "Fitted signal");
    filter_cmd->add_option("--data", filt.data, "Raw data; fits with --fitter first");
    filter_cmd->add_option("--fitter", filt.fitter, "fl1d-cv | fl1d");
    filter_cmd->add_option("--lambda", filt.lambda, "Penalty for --fitter fl1d");
    filter_cmd->add_option("--cv", filt.cv, "CV settings for fl1d-cv");
    filter_cmd->add_option("--bandwidth", filt.bandwidth, "auto or integer");
    filter_cmd->add_option("--tau", filt.tau, "Threshold or auto (needs --data)");
    filter_cmd->add_option("--variant", filt.variant, "reduced | full");
    filter_cmd->add_option("--B", filt.permutations, "Permutations for --tau auto");
    filter_cmd->add_option("--q", filt.q, "Quantile for --tau auto");
    filter_cmd->add_option("--seed", filt.seed, "Permutation seed");
    filter_cmd->add_option("--jobs", filt.jobs, "Worker threads");
    filter_cmd->add_option("--output", filt.output, "Output JSON ('-' for stdout)");

    SelectOpts sel;
    auto* select_cmd = app.add_subcommand("select-tau", "Permutation-calibrated filter threshold");
    select_cmd->add_option("--input", sel.input, "Data")->required();
    select_cmd->add_option("--fitter", sel.fitter, "fl1d-cv | fl1d");
    select_cmd->add_option("--lambda", sel.lambda, "Penalty for --fitter fl1d");
    select_cmd->add_option("--cv", sel.cv, "CV settings for fl1d-cv");
    select_cmd->add_option("--B", sel.permutations, "Permutations");
    select_cmd->add_option("--q", sel.q, "Quantile level");
    select_cmd->add_option("--bandwidth", sel.bandwidth, "auto or integer");
    select_cmd->add_option("--seed", sel.seed, "Seed");
    select_cmd->add_option("--jobs", sel.jobs, "Worker threads");
    select_cmd->add_option("--output", sel.output, "Output JSON ('-' for stdout)");

    InterpOpts ip;
    auto* interp_cmd = app.add_subcommand("interpolant", "Lower interpolant of a vector");
    interp_cmd->add_option("--input", ip.input, "Vector x")->required();
    interp_cmd->add_option("--changepoints", ip.changepoints, "JSON array of changepoints, inline or a file")->required();
    interp_cmd->add_option("--output", ip.output, "Output JSON ('-' for stdout)");
    interp_cmd->add_flag("--verify", ip.verify, "Append the norm-relation report");
    interp_cmd->add_option("--min-spacing", ip.min_spacing, "Override W in the report");

    MetricsOpts mo;
    auto* metrics_cmd = app.add_subcommand("metrics", "Distances between changepoint sets");
    metrics_cmd->add_option("--kind,--dist", mo.kind, "dh | screen | dg")->required();
    metrics_cmd->add_option("--a", mo.a, "First set: JSON array inline or a file")->required();
    metrics_cmd->add_option("--b", mo.b, "Second set: JSON array inline or a file")->required();
    metrics_cmd->add_option("--graph", mo.graph, "Edge list (dg)");
    metrics_cmd->add_option("--n-nodes", mo.n_nodes, "Node count (dg; default largest id)");
    metrics_cmd->add_option("--output", mo.output, "Output JSON ('-' for stdout)");

    SimOpts so;
    auto* sim_cmd = app.add_subcommand("simulate", "Run a simulation experiment");
    sim_cmd->add_option("--experiment", so.experiment, "haus-vs-n | tau-sweep | q-sweep | l2-scaling")->required();
    sim_cmd->add_option("--trials", so.trials, "Trials per grid point");
    sim_cmd->add_option("--seed", so.seed, "Master seed");
    sim_cmd->add_option("--out", so.out, "Summary CSV path");
    sim_cmd->add_option("--grid", so.grid, "Comma-separated grid override");
    sim_cmd->add_option("--tau-mode", so.tau_mode, "fixed | data-driven | oracle (sample-size experiments)");
    sim_cmd->add_option("--tau", so.tau, "Fixed threshold");
    sim_cmd->add_option("--B", so.permutations, "Permutations");
    sim_cmd->add_option("--q", so.q, "Quantile level");
    sim_cmd->add_option("--jobs", so.jobs, "Worker threads");
    sim_cmd->add_flag("--emit-plots-data", so.emit_plots, "Also write one row per trial");

    std::string manifest_path;
    auto* rerun_cmd = app.add_subcommand("rerun", "Repeat a run from its manifest");
    rerun_cmd->add_option("--manifest", manifest_path, "Manifest or result JSON")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::Success& e) {
        app.exit(e, out, err);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << app.help();
        report(err, "usage", e.what());
        return exit_input;
    }

    Run run;
    run.argv = args;
    try {
        if (*fit_cmd) {
            run.subcommand = "fit";
            return run_fit(fit, run, out);
        }
        if (*filter_cmd) {
            run.subcommand = "filter";
            return run_filter(filt, run, out);
        }
        if (*select_cmd) {
            run.subcommand = "select-tau";
            return run_select(sel, run, out);
        }
        if (*interp_cmd) {
            run.subcommand = "interpolant";
            return run_interpolant(ip, run, out);
        }
        if (*metrics_cmd) {
            run.subcommand = "metrics";
            return run_metrics(mo, run, out);
        }
        if (*sim_cmd) {
            run.subcommand = "simulate";
            return run_simulate(so, run, out);
        }
        if (*rerun_cmd) return run_rerun(manifest_path, out, err);
    } catch (const ConvergenceError& e) {
        err << json{{"error", "convergence"}, {"message", e.what()}, {"final_gap", e.final_gap()},
                    {"iterations", e.iterations()}}
                   .dump()
            << '\n';
        return exit_convergence;
    } catch (const InputError& e) {
        report(err, "input", e.what());
        return exit_input;
    } catch (const nlohmann::json::exception& e) {
        report(err, "input", e.what());
        return exit_input;
    }
    return exit_input;
}

}  // namespace tvcp::cli
