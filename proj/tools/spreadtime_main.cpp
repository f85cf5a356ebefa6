// Command-line front end: analysis runs, oracle cross-checks, sweeps,
// simulation, trace estimation and planning queries. Tables go out as CSV
// (or JSON with --format json); when --out is given, a .json sidecar records
// the full parameters for reproducibility.
//
// Exit codes: 0 success, 2 validation error, 3 infeasible request,
// 4 numerical failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spreadtime/analysis.hpp"
#include "spreadtime/chain.hpp"
#include "spreadtime/closedform.hpp"
#include "spreadtime/contribution.hpp"
#include "spreadtime/errors.hpp"
#include "spreadtime/hetero.hpp"
#include "spreadtime/model.hpp"
#include "spreadtime/sim.hpp"
#include "spreadtime/trace.hpp"
#include "spreadtime/version.hpp"

namespace {

using nlohmann::json;
using namespace spreadtime;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::initializer_list<std::string> cells) { rows.emplace_back(cells); }

    void write_csv(std::ostream& out) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            out << header[i] << (i + 1 < header.size() ? "," : "\n");
        for (const auto& row : rows)
            for (std::size_t i = 0; i < row.size(); ++i)
                out << row[i] << (i + 1 < row.size() ? "," : "\n");
    }

    json to_json() const {
        json rows_out = json::array();
        for (const auto& row : rows) {
            json obj;
            for (std::size_t i = 0; i < row.size(); ++i) obj[header[i]] = row[i];
            rows_out.push_back(obj);
        }
        return rows_out;
    }
};

struct OutputOptions {
    std::string out_path; // empty means stdout
    std::string format = "csv";
};

void add_output_flags(CLI::App* cmd, OutputOptions& opts) {
    cmd->add_option("--out", opts.out_path, "Output file (default: stdout)");
    cmd->add_option("--format", opts.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
}

void emit_table(const Table& table, const OutputOptions& opts, const json& sidecar) {
    std::ostringstream body;
    if (opts.format == "csv")
        table.write_csv(body);
    else
        body << table.to_json().dump(2) << '\n';

    if (opts.out_path.empty()) {
        std::cout << body.str();
        return;
    }
    std::ofstream out(opts.out_path);
    if (!out) throw SpreadError("cannot open output file " + opts.out_path);
    out << body.str();
    std::ofstream meta(opts.out_path + ".json");
    meta << sidecar.dump(2) << '\n';
}

void emit_json(const json& value, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << value.dump(2) << '\n';
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw SpreadError("cannot open output file " + out_path);
    out << value.dump(2) << '\n';
}

NetworkSpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read spec file " + path);
    std::ostringstream text;
    text << in.rdbuf();
    NetworkSpec spec = spec_from_json_string(text.str());
    require_valid(spec);
    return spec;
}

json sidecar_base(const std::string& command) {
    json j;
    j["command"] = command;
    j["version"] = kVersion;
    return j;
}

// Distributes a total seed count over groups in declaration order.
NetworkSpec with_total_seeds(const NetworkSpec& spec, int total) {
    if (total < 1) throw ValidationError("seed count must be >= 1");
    NetworkSpec out = spec;
    int remaining = total;
    for (auto& g : out.groups) {
        g.seeds = std::min(remaining, g.size);
        remaining -= g.seeds;
    }
    if (remaining > 0) throw ValidationError("seed count exceeds the population");
    return out;
}

int run(int argc, char** argv) {
    CLI::App app{"Probabilistic guarantees on information-spread time in opportunistic networks"};
    app.require_subcommand(1);

    // ---- cdf ----------------------------------------------------------
    struct {
        std::string spec;
        double alpha = 0.9;
        double t_min = 0.0, t_max = 0.0;
        std::size_t points = 101;
        OutputOptions out;
    } cdf_args;
    auto* cdf_cmd = app.add_subcommand("cdf", "Completion-time CDF on a time grid");
    cdf_cmd->add_option("--spec", cdf_args.spec, "NetworkSpec JSON file")->required();
    cdf_cmd->add_option("--alpha", cdf_args.alpha, "Penetration fraction");
    cdf_cmd->add_option("--t-min", cdf_args.t_min, "Grid start, hours");
    cdf_cmd->add_option("--t-max", cdf_args.t_max, "Grid end, hours")->required();
    cdf_cmd->add_option("--points", cdf_args.points, "Grid size");
    add_output_flags(cdf_cmd, cdf_args.out);

    // ---- guarantee ----------------------------------------------------
    struct {
        std::string spec;
        std::vector<double> alphas{0.9};
        std::vector<double> betas{0.99};
        std::vector<int> seeds;
        OutputOptions out;
    } guar_args;
    auto* guar_cmd = app.add_subcommand("guarantee", "Guaranteed time G, mean and ratio");
    guar_cmd->add_option("--spec", guar_args.spec, "NetworkSpec JSON file")->required();
    guar_cmd->add_option("--alpha", guar_args.alphas, "Penetration fractions");
    guar_cmd->add_option("--beta", guar_args.betas, "Confidence levels");
    guar_cmd->add_option("--seeds", guar_args.seeds, "Total seed count overrides");
    add_output_flags(guar_cmd, guar_args.out);

    // ---- moments ------------------------------------------------------
    struct {
        std::string spec;
        double alpha = 0.9;
        std::vector<int> orders{1, 2};
        OutputOptions out;
    } mom_args;
    auto* mom_cmd = app.add_subcommand("moments", "Completion-time moments");
    mom_cmd->add_option("--spec", mom_args.spec, "NetworkSpec JSON file")->required();
    mom_cmd->add_option("--alpha", mom_args.alpha, "Penetration fraction");
    mom_cmd->add_option("--orders", mom_args.orders, "Moment orders");
    add_output_flags(mom_cmd, mom_args.out);

    // ---- simulate -----------------------------------------------------
    struct {
        std::string spec;
        double alpha = 0.9;
        std::uint64_t replications = 10000;
        std::uint64_t rng_seed = 0;
        std::string model = "cooperative";
        unsigned threads = 1;
        OutputOptions out;
    } sim_args;
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo completion-time samples");
    sim_cmd->add_option("--spec", sim_args.spec, "NetworkSpec JSON file")->required();
    sim_cmd->add_option("--alpha", sim_args.alpha, "Penetration fraction");
    sim_cmd->add_option("--replications", sim_args.replications, "Replication count");
    sim_cmd->add_option("--rng-seed", sim_args.rng_seed, "RNG seed");
    sim_cmd->add_option("--model", sim_args.model, "Spread model")
        ->check(CLI::IsMember({"cooperative", "non_cooperative"}));
    sim_cmd->add_option("--threads", sim_args.threads, "Worker threads");
    sim_cmd->add_option("--out", sim_args.out.out_path, "Samples CSV path")->required();

    // ---- hetero-sweep -------------------------------------------------
    struct {
        double mean_rate = 1.0;
        int total = 40;
        std::vector<double> alphas{0.3, 0.5, 0.7, 1.0};
        double beta = 0.9;
        double gamma_max = 20.0;
        std::size_t grid_points = 41;
        unsigned threads = 1;
        OutputOptions out;
    } sweep_args;
    auto* sweep_cmd =
        app.add_subcommand("hetero-sweep", "Acceleration region over (gamma1, gamma2)");
    sweep_cmd->add_option("--mean-rate", sweep_args.mean_rate, "Average pair rate per hour");
    sweep_cmd->add_option("--n", sweep_args.total, "Total population (even)");
    sweep_cmd->add_option("--alpha", sweep_args.alphas, "Penetration fractions");
    sweep_cmd->add_option("--beta", sweep_args.beta, "Confidence level");
    sweep_cmd->add_option("--gamma-max", sweep_args.gamma_max, "Axis upper bound");
    sweep_cmd->add_option("--grid-points", sweep_args.grid_points, "Axis resolution");
    sweep_cmd->add_option("--threads", sweep_args.threads, "Worker threads");
    add_output_flags(sweep_cmd, sweep_args.out);

    // ---- estimate -----------------------------------------------------
    struct {
        std::string trace;
        std::string grouping;
        double transfer_time_s = 90.0;
        double horizon_h = 0.0;
        std::vector<int> seeds{1};
        bool base_rates = false;
        std::string out_path;
    } est_args;
    auto* est_cmd = app.add_subcommand("estimate", "NetworkSpec from a contact trace");
    est_cmd->add_option("--trace", est_args.trace, "Contact CSV")->required();
    est_cmd->add_option("--grouping", est_args.grouping, "node,group CSV")->required();
    est_cmd->add_option("--transfer-time", est_args.transfer_time_s, "Transfer time, seconds");
    est_cmd->add_option("--horizon", est_args.horizon_h, "Observation horizon, hours")
        ->required();
    est_cmd->add_option("--seeds", est_args.seeds, "Seed counts per group for the output spec");
    est_cmd->add_flag("--base-rates", est_args.base_rates,
                      "Emit raw meeting rates instead of effective rates");
    est_cmd->add_option("--out", est_args.out_path, "Output file (default: stdout)");

    // ---- plan ---------------------------------------------------------
    struct {
        std::string spec;
        double alpha = 0.9;
        double beta = 0.99;
        double t_bound = 0.0;
        std::string mode = "seeds";
        std::vector<std::size_t> priority;
        std::string out_path;
    } plan_args;
    auto* plan_cmd = app.add_subcommand("plan", "Invert G for seeds or rate scale");
    plan_cmd->add_option("--spec", plan_args.spec, "NetworkSpec JSON file")->required();
    plan_cmd->add_option("--alpha", plan_args.alpha, "Penetration fraction");
    plan_cmd->add_option("--beta", plan_args.beta, "Confidence level");
    plan_cmd->add_option("--t-bound", plan_args.t_bound, "Time bound, hours")->required();
    plan_cmd->add_option("--mode", plan_args.mode, "Planning mode")
        ->check(CLI::IsMember({"seeds", "rate"}));
    plan_cmd->add_option("--priority", plan_args.priority,
                         "Group fill order for mode=seeds (required for multi-group specs)");
    plan_cmd->add_option("--out", plan_args.out_path, "Output file (default: stdout)");

    // ---- oracle -------------------------------------------------------
    struct {
        int n = 100;
        int seeds = 1;
        double lambda = 1.0;
        double alpha = 1.0;
        double beta = 0.99;
        double eta = 1.0;
        int stages = 1;
        double z = 0.0;
        std::vector<double> rates;
        std::string out_path;
    } oracle_args;
    auto* oracle_cmd = app.add_subcommand("oracle", "Closed-form cross-checks");
    oracle_cmd->require_subcommand(1);
    auto add_oracle = [&](const std::string& name, const std::string& desc) {
        auto* sub = oracle_cmd->add_subcommand(name, desc);
        sub->add_option("--n", oracle_args.n, "Population size");
        sub->add_option("--seeds", oracle_args.seeds, "Seed count");
        sub->add_option("--lambda", oracle_args.lambda, "Rate per hour");
        sub->add_option("--alpha", oracle_args.alpha, "Penetration fraction");
        sub->add_option("--beta", oracle_args.beta, "Confidence level");
        sub->add_option("--eta", oracle_args.eta, "Base rate");
        sub->add_option("--stages", oracle_args.stages, "Stage count");
        sub->add_option("--z", oracle_args.z, "Evaluation point");
        sub->add_option("--rates", oracle_args.rates, "Rate list");
        sub->add_option("--out", oracle_args.out_path, "Output file (default: stdout)");
        return sub;
    };
    add_oracle("homog-mean", "Mean completion time, birth chain");
    add_oracle("homog-variance", "Variance, birth chain");
    add_oracle("hypoexp-ccdf", "CCDF of a sum of Exp(eta*i)");
    add_oracle("erlang-ccdf", "Generalized-Erlang CCDF");
    add_oracle("bounds", "Asymptotic guaranteed-time bracket");
    add_oracle("noncoop-mean", "Non-cooperative mean");
    add_oracle("noncoop-variance", "Non-cooperative variance");
    add_oracle("noncoop-ccdf", "Non-cooperative CCDF");

    // ---- contribution -------------------------------------------------
    struct {
        std::string spec;
        double alpha = 0.9;
        double beta = 0.99;
        bool remove_seed = false;
        OutputOptions out;
    } contrib_args;
    auto* contrib_cmd = app.add_subcommand("contribution", "Per-group node contribution");
    contrib_cmd->add_option("--spec", contrib_args.spec, "NetworkSpec JSON file")->required();
    contrib_cmd->add_option("--alpha", contrib_args.alpha, "Penetration fraction");
    contrib_cmd->add_option("--beta", contrib_args.beta, "Confidence level");
    contrib_cmd->add_flag("--remove-seed", contrib_args.remove_seed, "Remove a seed node");
    add_output_flags(contrib_cmd, contrib_args.out);

    // ---- gen-trace ----------------------------------------------------
    struct {
        std::string spec;
        double horizon_h = 672.0;
        double duration_mean_s = 600.0;
        std::string duration_kind = "exponential";
        std::uint64_t rng_seed = 0;
        std::string out_path;
        std::string grouping_out;
    } gen_args;
    auto* gen_cmd = app.add_subcommand("gen-trace", "Synthetic contact trace");
    gen_cmd->add_option("--spec", gen_args.spec, "NetworkSpec JSON file (base meeting rates)")
        ->required();
    gen_cmd->add_option("--horizon", gen_args.horizon_h, "Horizon, hours");
    gen_cmd->add_option("--duration-mean", gen_args.duration_mean_s,
                        "Mean contact duration, seconds");
    gen_cmd->add_option("--duration-kind", gen_args.duration_kind, "Duration model")
        ->check(CLI::IsMember({"exponential", "fixed"}));
    gen_cmd->add_option("--rng-seed", gen_args.rng_seed, "RNG seed");
    gen_cmd->add_option("--out", gen_args.out_path, "Trace CSV path (default: stdout)");
    gen_cmd->add_option("--grouping-out", gen_args.grouping_out, "node,group CSV path");

    CLI11_PARSE(app, argc, argv);

    if (cdf_cmd->parsed()) {
        const auto spec = load_spec(cdf_args.spec);
        if (cdf_args.points < 1) throw ValidationError("points must be >= 1");
        if (cdf_args.t_max < cdf_args.t_min) throw ValidationError("t-max below t-min");
        Table table;
        table.header = {"t_hours", "cdf", "survival"};
        std::optional<SpreadDistribution> dist;
        try {
            dist.emplace(SpreadDistribution::from_spec(spec, cdf_args.alpha));
        } catch (const TrivialCompletion&) {
        }
        for (std::size_t i = 0; i < cdf_args.points; ++i) {
            const double t =
                cdf_args.points == 1
                    ? cdf_args.t_min
                    : cdf_args.t_min + (cdf_args.t_max - cdf_args.t_min) *
                                           static_cast<double>(i) / (cdf_args.points - 1);
            const double p = dist ? dist->cdf(t) : 1.0;
            table.add_row({fmt(t), fmt(p), fmt(1.0 - p)});
        }
        json side = sidecar_base("cdf");
        side["parameters"] = {{"alpha", cdf_args.alpha},
                              {"t_min", cdf_args.t_min},
                              {"t_max", cdf_args.t_max},
                              {"points", cdf_args.points}};
        side["spec"] = json::parse(spec_to_json_string(spec));
        emit_table(table, cdf_args.out, side);
        return 0;
    }

    if (guar_cmd->parsed()) {
        const auto spec = load_spec(guar_args.spec);
        Table table;
        table.header = {"alpha", "beta", "seeds", "guaranteed_time_hours", "mean_hours", "ratio"};
        std::vector<NetworkSpec> variants;
        if (guar_args.seeds.empty())
            variants.push_back(spec);
        else
            for (int s : guar_args.seeds) variants.push_back(with_total_seeds(spec, s));
        for (const auto& variant : variants)
            for (double alpha : guar_args.alphas)
                for (double beta : guar_args.betas) {
                    const auto m = completion_metrics(variant, alpha, beta);
                    table.add_row({fmt(alpha), fmt(beta),
                                   std::to_string(variant.total_seeds()),
                                   fmt(m.guaranteed_time), fmt(m.mean), fmt(m.ratio)});
                }
        json side = sidecar_base("guarantee");
        side["parameters"] = {{"alpha", guar_args.alphas},
                              {"beta", guar_args.betas},
                              {"seeds", guar_args.seeds}};
        side["spec"] = json::parse(spec_to_json_string(spec));
        emit_table(table, guar_args.out, side);
        return 0;
    }

    if (mom_cmd->parsed()) {
        const auto spec = load_spec(mom_args.spec);
        Table table;
        table.header = {"order", "moment"};
        std::optional<SpreadDistribution> dist;
        try {
            dist.emplace(SpreadDistribution::from_spec(spec, mom_args.alpha));
        } catch (const TrivialCompletion&) {
        }
        for (int order : mom_args.orders)
            table.add_row({std::to_string(order), fmt(dist ? dist->moment(order) : 0.0)});
        json side = sidecar_base("moments");
        side["parameters"] = {{"alpha", mom_args.alpha}, {"orders", mom_args.orders}};
        side["spec"] = json::parse(spec_to_json_string(spec));
        emit_table(table, mom_args.out, side);
        return 0;
    }

    if (sim_cmd->parsed()) {
        const auto spec = load_spec(sim_args.spec);
        SimConfig config;
        config.replications = sim_args.replications;
        config.rng_seed = sim_args.rng_seed;
        config.threads = sim_args.threads;
        config.model = sim_args.model == "cooperative" ? SpreadModel::cooperative
                                                       : SpreadModel::non_cooperative;
        const auto samples = simulate_completion(spec, sim_args.alpha, config);

        Table table;
        table.header = {"sample_hours"};
        for (double s : samples.samples()) table.add_row({fmt(s)});

        json side = sidecar_base("simulate");
        side["parameters"] = {{"alpha", sim_args.alpha},
                              {"replications", sim_args.replications},
                              {"rng_seed", sim_args.rng_seed},
                              {"model", sim_args.model},
                              {"fingerprint", samples.fingerprint()}};
        side["spec"] = json::parse(spec_to_json_string(spec));
        side["summary"] = {{"mean_hours", samples.mean()},
                           {"variance", samples.variance()}};
        if (config.model == SpreadModel::cooperative) {
            const auto dist = SpreadDistribution::from_spec(spec, sim_args.alpha);
            side["summary"]["ks_distance"] =
                ks_distance(samples, [&](double t) { return dist.cdf(t); });
        }
        OutputOptions opts;
        opts.out_path = sim_args.out.out_path;
        emit_table(table, opts, side);
        std::cout << side["summary"].dump(2) << '\n';
        return 0;
    }

    if (sweep_cmd->parsed()) {
        GridSpec grid;
        grid.gamma_max = sweep_args.gamma_max;
        grid.points = sweep_args.grid_points;
        grid.threads = sweep_args.threads;
        Table table;
        table.header = {"alpha", "gamma1", "gamma2", "delta_g_hours", "member"};
        json homog = json::object();
        for (double alpha : sweep_args.alphas) {
            const auto region =
                gamma_region(sweep_args.mean_rate, sweep_args.total, alpha, sweep_args.beta, grid);
            homog[fmt(alpha)] = region.homogeneous_g;
            for (std::size_t i1 = 0; i1 < region.gamma1_values.size(); ++i1)
                for (std::size_t i2 = 0; i2 < region.gamma2_values.size(); ++i2) {
                    const auto c = region.cell(i1, i2);
                    table.add_row({fmt(alpha), fmt(region.gamma1_values[i1]),
                                   fmt(region.gamma2_values[i2]), fmt(region.delta_g[c]),
                                   region.member[c] ? "1" : "0"});
                }
        }
        json side = sidecar_base("hetero-sweep");
        side["parameters"] = {{"mean_rate", sweep_args.mean_rate},
                              {"n", sweep_args.total},
                              {"alpha", sweep_args.alphas},
                              {"beta", sweep_args.beta},
                              {"gamma_max", sweep_args.gamma_max},
                              {"grid_points", sweep_args.grid_points}};
        side["homogeneous_g_hours"] = homog;
        emit_table(table, sweep_args.out, side);
        return 0;
    }

    if (est_cmd->parsed()) {
        std::ifstream trace_in(est_args.trace);
        if (!trace_in) throw ValidationError("cannot read trace file " + est_args.trace);
        const auto parsed = parse_trace(trace_in);
        for (const auto& w : parsed.warnings) std::cerr << "warning: " << w << '\n';

        std::ifstream group_in(est_args.grouping);
        if (!group_in) throw ValidationError("cannot read grouping file " + est_args.grouping);
        const auto grouping = parse_grouping(group_in);

        const double horizon_s = est_args.horizon_h * 3600.0;
        const auto rates = group_rate_matrix(parsed.records, grouping, horizon_s);
        const auto stats = compute_stats(parsed.records);
        const double psi = susceptibility_estimate(stats, est_args.transfer_time_s);

        NetworkSpec spec;
        std::vector<int> sizes(rates.dimension(), 0);
        for (const auto& [node, g] : grouping) ++sizes[g];
        for (std::size_t g = 0; g < rates.dimension(); ++g) {
            GroupProfile profile;
            profile.size = sizes[g];
            profile.infectivity = 1.0;
            profile.susceptibility = psi;
            profile.seeds = g < est_args.seeds.size() ? est_args.seeds[g] : 0;
            spec.groups.push_back(profile);
        }
        spec.rates = rates;
        if (!est_args.base_rates) spec = effective_rates(spec);

        json out = json::parse(spec_to_json_string(spec));
        out["estimation"] = {{"avg_neighbors", stats.avg_neighbors},
                             {"susceptibility", psi},
                             {"transfer_time_s", est_args.transfer_time_s},
                             {"horizon_hours", est_args.horizon_h},
                             {"contacts", parsed.records.size()},
                             {"rates_kind", est_args.base_rates ? "base" : "effective"},
                             {"version", kVersion}};
        emit_json(out, est_args.out_path);
        return 0;
    }

    if (plan_cmd->parsed()) {
        const auto spec = load_spec(plan_args.spec);
        json answer = sidecar_base("plan");
        answer["parameters"] = {{"alpha", plan_args.alpha},
                                {"beta", plan_args.beta},
                                {"t_bound_hours", plan_args.t_bound},
                                {"mode", plan_args.mode}};
        if (plan_args.mode == "seeds") {
            answer["seeds"] = min_seeds_for_bound(spec, plan_args.alpha, plan_args.beta,
                                                  plan_args.t_bound, plan_args.priority);
        } else {
            const auto dist = SpreadDistribution::from_spec(spec, plan_args.alpha);
            answer["rate_scale"] = rate_scale_for_bound(dist, plan_args.beta, plan_args.t_bound);
        }
        emit_json(answer, plan_args.out_path);
        return 0;
    }

    if (oracle_cmd->parsed()) {
        const auto* sub = oracle_cmd->get_subcommands().front();
        json answer = sidecar_base("oracle/" + sub->get_name());
        const auto& a = oracle_args;
        if (sub->get_name() == "homog-mean")
            answer["value"] = homog_mean_completion(a.n, a.seeds, a.lambda, a.alpha);
        else if (sub->get_name() == "homog-variance")
            answer["value"] = homog_variance(a.n, a.seeds, a.lambda, a.alpha);
        else if (sub->get_name() == "hypoexp-ccdf")
            answer["value"] = hypoexp_ccdf(a.stages, a.eta, a.z);
        else if (sub->get_name() == "erlang-ccdf")
            answer["value"] = generalized_erlang_ccdf(a.rates, a.z);
        else if (sub->get_name() == "bounds") {
            const auto [lo, hi] = guaranteed_time_bounds(a.n, a.lambda, a.beta);
            answer["lower"] = lo;
            answer["upper"] = hi;
        } else if (sub->get_name() == "noncoop-mean")
            answer["value"] = noncoop_mean(a.n, a.lambda);
        else if (sub->get_name() == "noncoop-variance")
            answer["value"] = noncoop_variance(a.n, a.lambda);
        else if (sub->get_name() == "noncoop-ccdf")
            answer["value"] = noncoop_ccdf(a.n, a.lambda, a.z);
        emit_json(answer, a.out_path);
        return 0;
    }

    if (contrib_cmd->parsed()) {
        const auto spec = load_spec(contrib_args.spec);
        ContributionOptions options;
        options.remove_seed = contrib_args.remove_seed;
        Table table;
        table.header = {"group", "contribution"};
        const auto values =
            group_contributions(spec, contrib_args.alpha, contrib_args.beta, options);
        for (std::size_t g = 0; g < values.size(); ++g)
            table.add_row({std::to_string(g), fmt(values[g])});
        json side = sidecar_base("contribution");
        side["parameters"] = {{"alpha", contrib_args.alpha},
                              {"beta", contrib_args.beta},
                              {"remove_seed", contrib_args.remove_seed}};
        side["spec"] = json::parse(spec_to_json_string(spec));
        emit_table(table, contrib_args.out, side);
        return 0;
    }

    if (gen_cmd->parsed()) {
        const auto spec = load_spec(gen_args.spec);
        DurationModel model;
        model.kind = gen_args.duration_kind == "fixed" ? DurationModel::Kind::fixed
                                                       : DurationModel::Kind::exponential;
        model.mean_s = gen_args.duration_mean_s;
        const auto records =
            generate_trace(spec, gen_args.horizon_h * 3600.0, model, gen_args.rng_seed);
        if (gen_args.out_path.empty()) {
            write_trace(std::cout, records);
        } else {
            std::ofstream out(gen_args.out_path);
            if (!out) throw SpreadError("cannot open output file " + gen_args.out_path);
            write_trace(out, records);
        }
        if (!gen_args.grouping_out.empty()) {
            std::ofstream out(gen_args.grouping_out);
            if (!out) throw SpreadError("cannot open output file " + gen_args.grouping_out);
            write_grouping(out, default_grouping(spec));
        }
        return 0;
    }

    return 0;
}

json error_json(const std::string& category, const std::string& message) {
    return json{{"error", category}, {"message", message}};
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const InfeasibleError& e) {
        std::cerr << error_json("infeasible", e.what()).dump() << '\n';
        return 3;
    } catch (const TrivialCompletion& e) {
        std::cerr << error_json("trivial_completion", e.what()).dump() << '\n';
        return 2;
    } catch (const TraceParseError& e) {
        std::cerr << error_json("parse", e.what()).dump() << '\n';
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << error_json("validation", e.what()).dump() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << error_json("validation", e.what()).dump() << '\n';
        return 2;
    } catch (const SpreadError& e) {
        std::cerr << error_json("numerical", e.what()).dump() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << error_json("internal", e.what()).dump() << '\n';
        return 4;
    }
}
