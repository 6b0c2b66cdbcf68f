// netsis command line: reproducible NIMFA SIS experiments emitting CSV data.
//
// Subcommands: simulate | temporal | sweep | predict | markov | verify.
// Every experiment is described by a JSON config; --set key=value overrides
// individual fields so runs stay diffable. All emitted times are in units of
// the mean curing time 1/delta; the scale factor is recorded in the .meta.json
// sidecar written next to each output.
//
// Exit codes: 0 success, 1 usage/config error, 2 numerical failure,
// 3 counterexample found (verify only).

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "netsis/conjecture.hpp"
#include "netsis/io.hpp"
#include "netsis/parallel.hpp"
#include "netsis/sweep.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace netsis;

namespace {

struct GlobalOptions {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int workers = 1;
    int runs = 0;
    std::vector<std::string> overrides;
};

json load_config(const GlobalOptions& opts) {
    std::ifstream in(opts.config_path);
    if (!in) throw ConfigError("cannot open config: " + opts.config_path);
    json cfg;
    try {
        cfg = json::parse(in, nullptr, true, true); // allow comments
    } catch (const json::exception& e) {
        throw ConfigError("config parse error in " + opts.config_path + ": " + e.what());
    }
    if (!cfg.is_object()) throw ConfigError("config root must be a JSON object");

    for (const auto& kv : opts.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value: " + kv);
        const std::string path = kv.substr(0, eq);
        const std::string raw = kv.substr(eq + 1);
        json value;
        try {
            value = json::parse(raw);
        } catch (const json::exception&) {
            value = raw; // plain string
        }
        json* node = &cfg;
        std::istringstream keys(path);
        std::string key, next;
        std::getline(keys, key, '.');
        while (std::getline(keys, next, '.')) {
            node = &(*node)[key];
            key = next;
        }
        (*node)[key] = value;
    }
    if (opts.seed_given) cfg["seed"] = opts.seed;
    return cfg;
}

fs::path resolve_out(const GlobalOptions& opts, const std::string& name) {
    fs::path p = name;
    if (!opts.out_dir.empty()) p = fs::path(opts.out_dir) / p.filename();
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    return p;
}

void write_meta(const fs::path& out_path, const json& cfg, double delta, const json& extra) {
    json meta;
    meta["time_scale_delta"] = delta;
    meta["time_units"] = "1/delta";
    meta["config"] = cfg;
    for (auto it = extra.begin(); it != extra.end(); ++it) meta[it.key()] = it.value();
    std::ofstream out(out_path.string() + ".meta.json");
    out << meta.dump(2) << "\n";
}

EpidemicParams params_from(const json& cfg) {
    EpidemicParams p;
    p.beta = cfg.value("beta", 0.1);
    p.delta = cfg.value("delta", 1.0);
    if (p.delta <= 0.0) throw ConfigError("delta must be positive");
    if (p.beta < 0.0) throw ConfigError("beta must be non-negative");
    return p;
}

StateVector initial_state(const json& cfg, int n) {
    const double y0 = cfg.value("y0", 1.0);
    if (y0 < 0.0 || y0 > 1.0) throw ConfigError("y0 must be in [0,1]");
    return uniform_state(n, y0);
}

// ---------------------------------------------------------------------------

int cmd_simulate(const GlobalOptions& opts) {
    const json cfg = load_config(opts);
    if (!cfg.contains("graph")) throw ConfigError("simulate config needs a 'graph' spec");
    const Graph g = graph_from_spec_json(cfg.at("graph").dump());
    const auto rp = rescale(params_from(cfg));
    const double h = cfg.value("h", 0.01);
    const double t_end = cfg.value("t_end", 100.0);

    const Trajectory traj =
        integrate(g, rp.params, initial_state(cfg, g.node_count()), t_end, h);

    const fs::path out = resolve_out(opts, cfg.value("out", "trajectory.csv"));
    std::ofstream os(out);
    write_trajectory_csv(traj, os);
    write_meta(out, cfg, rp.time_scale, {{"max_clamp", traj.max_clamp}});
    std::cout << "wrote " << out.string() << " (" << traj.size() << " samples)\n";
    return 0;
}

int cmd_temporal(const GlobalOptions& opts) {
    const json cfg = load_config(opts);
    if (!cfg.contains("sequence")) throw ConfigError("temporal config needs a 'sequence' spec");
    json seq = cfg.at("sequence");
    if (!seq.contains("seed") && cfg.contains("seed")) seq["seed"] = cfg.at("seed");
    const TemporalNetwork tn = temporal_from_json(seq.dump());
    const auto rp = rescale(params_from(cfg));
    const double h = cfg.value("h", 0.01);

    SnapInfo snap;
    const Trajectory traj =
        integrate_temporal(tn, rp.params, initial_state(cfg, tn.node_count()), h, &snap);

    const fs::path out = resolve_out(opts, cfg.value("out", "temporal.csv"));
    std::ofstream os(out);
    write_trajectory_csv(traj, os);
    write_meta(out, cfg, rp.time_scale,
               {{"max_clamp", traj.max_clamp}, {"snap_error", snap.max_snap_error}});
    std::cout << "wrote " << out.string() << " (" << traj.size() << " samples, "
              << tn.interval_count() << " intervals)\n";
    return 0;
}

int cmd_sweep(const GlobalOptions& opts) {
    const json cfg = load_config(opts);
    const int count = cfg.value("count", 500);
    const int n = cfg.value("n", 50);
    const auto rp = rescale(params_from(cfg));
    const double tau = rp.params.beta;
    const double r = cfg.value("r", 1e-4);
    const double r_star = cfg.value("r_star", r * r);
    TBarOptions tb;
    tb.h = cfg.value("h", 0.01);
    tb.t_max = cfg.value("t_max", 1e4);
    const RngSeed seed = cfg.value("seed", RngSeed{1});

    std::vector<GraphType> types;
    if (cfg.contains("types"))
        for (const auto& t : cfg.at("types"))
            types.push_back(graph_type_from_string(t.get<std::string>()));
    else
        types.push_back(GraphType::er);

    struct Row {
        TransitionReport rep;
        bool ordering_ok = true;
    };
    std::vector<Row> rows(static_cast<std::size_t>(count) * types.size());

    const fs::path out = resolve_out(opts, cfg.value("out", "sweep.csv"));
    const std::string cx_dir =
        resolve_out(opts, cfg.value("counterexample_dir", "counterexamples")).string();

    parallel_for(static_cast<int>(rows.size()), opts.workers, [&](int idx) {
        const int type_idx = idx / count;
        const int graph_idx = idx % count;
        const GraphType type = types[static_cast<std::size_t>(type_idx)];
        const RngSeed gseed = derive_seed(seed, static_cast<std::uint64_t>(idx));
        const Graph g = random_sweep_graph(type, n, gseed);
        Row row;
        row.rep = transition_report(g, tau, r, r_star, tb,
                                    to_string(type) + "-" + std::to_string(graph_idx), gseed);
        row.ordering_ok = check_bound_ordering(row.rep, tb.h).all_ok();
        if (!row.ordering_ok) {
            row.rep.flags.push_back("ordering_violation");
            json params = {{"tau", tau},         {"r", r},
                           {"r_star", r_star},   {"h", tb.h},
                           {"seed", gseed},      {"graph_id", row.rep.graph_id},
                           {"R0", row.rep.r0},   {"t_bar_decay", row.rep.t_bar_decay},
                           {"t_bar_growth", row.rep.t_bar_growth}};
            write_counterexample_bundle(cx_dir + "/" + row.rep.graph_id, g, params.dump(2), {});
        }
        rows[static_cast<std::size_t>(idx)] = std::move(row);
    });

    std::ofstream os(out);
    write_sweep_header(os);
    int violations = 0;
    std::vector<TransitionReport> reports;
    reports.reserve(rows.size());
    for (const auto& row : rows) {
        write_sweep_row(row.rep, os);
        reports.push_back(row.rep);
        if (!row.ordering_ok) ++violations;
    }

    json bins = json::array();
    for (const auto& bin : bin_by_r0(reports)) {
        if (bin.count == 0) continue;
        bins.push_back({{"r0_lo", bin.r0_lo},
                        {"r0_hi", bin.r0_hi},
                        {"count", bin.count},
                        {"mean_t_bar_decay", bin.mean_t_bar},
                        {"range_t_bar_decay", bin.range_t_bar},
                        {"flagged", bin.flagged}});
    }

    // mixed-start spot check on the median graph of each R0 decile: the
    // reported time uses the two extremal starts only, so sample random
    // interior starts and log (never fail on) any that converge later
    json spot = json::array();
    if (cfg.value("spot_check", true) && !reports.empty()) {
        const int samples = cfg.value("spot_check_samples", 50);
        std::vector<std::size_t> order(reports.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return reports[a].r0 < reports[b].r0;
        });
        std::vector<std::size_t> picks;
        for (int d = 0; d < 10; ++d) {
            const std::size_t lo = order.size() * d / 10;
            const std::size_t hi = order.size() * (d + 1) / 10;
            if (lo < hi) picks.push_back(order[(lo + hi) / 2]);
        }
        std::vector<MixedStartCheck> checks(picks.size());
        parallel_for(static_cast<int>(picks.size()), opts.workers, [&](int i) {
            const auto& rep = reports[picks[static_cast<std::size_t>(i)]];
            const int type_count = count;
            const int type_idx = static_cast<int>(picks[static_cast<std::size_t>(i)]) / type_count;
            const GraphType type = types[static_cast<std::size_t>(type_idx)];
            const Graph g = random_sweep_graph(type, n, rep.seed);
            checks[static_cast<std::size_t>(i)] = spot_check_mixed_starts(
                g, tau, r, rep.t_bar(), samples, derive_seed(seed, 0xDEC1 + i), tb);
        });
        for (std::size_t i = 0; i < picks.size(); ++i) {
            spot.push_back({{"graph_id", reports[picks[i]].graph_id},
                            {"R0", reports[picks[i]].r0},
                            {"samples", checks[i].samples},
                            {"exceedances", checks[i].exceedances},
                            {"worst_excess", checks[i].worst_excess}});
        }
    }

    write_meta(out, cfg, rp.time_scale,
               {{"ordering_violations", violations},
                {"r0_bins", bins},
                {"mixed_start_spot_check", spot}});
    std::cout << "wrote " << out.string() << " (" << rows.size() << " graphs, " << violations
              << " ordering violations)\n";
    return 0;
}

int cmd_predict(const GlobalOptions& opts) {
    const json cfg = load_config(opts);
    if (!cfg.contains("sequence")) throw ConfigError("predict config needs a 'sequence' spec");
    const auto rp = rescale(params_from(cfg));
    const double tau = rp.params.beta;
    const double r = cfg.value("r", 1e-4);
    const double h = cfg.value("h", 0.01);

    json seq = cfg.at("sequence");
    if (!seq.contains("seed") && cfg.contains("seed")) seq["seed"] = cfg.at("seed");
    json bound_request;
    if (seq.contains("delta_t") && seq.at("delta_t").is_string()) {
        bound_request = seq.at("delta_t");
        seq["delta_t"] = 1.0; // placeholder; replaced after the graphs exist
    }
    TemporalNetwork tn = temporal_from_json(seq.dump());

    double delta_t = tn.update_times[1] - tn.update_times[0];
    if (!bound_request.is_null()) {
        const std::string which = bound_request.get<std::string>();
        if (which == "upper_bound") {
            delta_t = combined_upper_bound_sequence_growth_only(tn.graphs, tau, r);
        } else if (which == "lower_bound") {
            delta_t = 0.0;
            for (const Graph& g : tn.graphs)
                delta_t = std::max(delta_t, decay_lower_bound(g, tau, r));
        } else {
            throw ConfigError("delta_t must be a number, 'upper_bound' or 'lower_bound'");
        }
        delta_t = std::max(h, std::round(delta_t / h) * h); // keep the grid exact
        tn = constant_interval_network(std::move(tn.graphs), delta_t);
    }

    const PredictionReport report =
        quenched_predict(tn, rp.params, r, h, initial_state(cfg, tn.node_count()));

    const fs::path out = resolve_out(opts, cfg.value("out", "predict.csv"));
    std::ofstream os(out);
    write_prediction_csv(report, os);
    write_meta(out, cfg, rp.time_scale,
               {{"delta_t", delta_t}, {"max_abs_error", report.max_abs_error()}});
    std::cout << "wrote " << out.string() << " (delta_t = " << delta_t
              << ", max error = " << report.max_abs_error() << ")\n";
    return 0;
}

int cmd_markov(const GlobalOptions& opts) {
    const json cfg = load_config(opts);
    if (!cfg.contains("sequence")) throw ConfigError("markov config needs a 'sequence' spec");
    const EpidemicParams p = params_from(cfg);
    const auto rp = rescale(p);
    json seq = cfg.at("sequence");
    if (!seq.contains("seed") && cfg.contains("seed")) seq["seed"] = cfg.at("seed");
    const TemporalNetwork tn = temporal_from_json(seq.dump());

    const int runs = opts.runs > 0 ? opts.runs : cfg.value("runs", 200);
    const double t_end = cfg.value("t_end", tn.end_time());
    const double sample_dt = cfg.value("sample_dt", 0.1);
    const RngSeed seed = cfg.value("seed", RngSeed{1});

    MarkovState x0 = MarkovState::all_infected(tn.node_count());
    if (cfg.contains("x0") && cfg.at("x0").is_number()) {
        const double frac = cfg.at("x0").get<double>();
        x0 = MarkovState::all_healthy(tn.node_count());
        const int k = static_cast<int>(std::lround(frac * tn.node_count()));
        for (int i = 0; i < k; ++i) x0.infected[i] = 1;
    }

    // times below are already in units of 1/delta; run the rescaled process
    const EnsembleResult res = ensemble_prevalence(tn, rp.params.beta, 1.0, x0, t_end, runs,
                                                   sample_dt, seed, opts.workers);

    const fs::path out = resolve_out(opts, cfg.value("out", "ensemble.csv"));
    std::ofstream os(out);
    write_ensemble_csv(res, os);
    write_meta(out, cfg, rp.time_scale, {{"runs", runs}});

    if (cfg.contains("nimfa_out")) {
        const double y0 =
            static_cast<double>(x0.count_infected()) / static_cast<double>(tn.node_count());
        const Trajectory traj = integrate_temporal(
            tn, rp.params, uniform_state(tn.node_count(), y0), cfg.value("h", 0.01));
        const fs::path nout = resolve_out(opts, cfg.at("nimfa_out").get<std::string>());
        std::ofstream nos(nout);
        write_trajectory_csv(traj, nos);
        write_meta(nout, cfg, rp.time_scale, json::object());
    }
    std::cout << "wrote " << out.string() << " (" << runs << " runs)\n";
    return 0;
}

int cmd_verify(const GlobalOptions& opts) {
    const json cfg = load_config(opts);
    const int n = cfg.value("n", 50);
    const int count = cfg.value("count", 100);
    const int projection_count = cfg.value("projection_count", 20);
    const double h = cfg.value("h", 0.01);
    const double t_end = cfg.value("t_end", 1000.0);
    const RngSeed seed = cfg.value("seed", RngSeed{1});
    const double tau_c_complete = 1.0 / static_cast<double>(n - 1);
    std::vector<double> multipliers = {0.5, 1.0, 2.0, 5.0};
    if (cfg.contains("tau_multipliers"))
        multipliers = cfg.at("tau_multipliers").get<std::vector<double>>();

    const std::string cx_dir =
        resolve_out(opts, cfg.value("counterexample_dir", "counterexamples")).string();
    const fs::path out = resolve_out(opts, cfg.value("out", "verify.csv"));
    std::ofstream os(out);
    os << "check,graph_id,tau,max_residual,pass\n";

    int failures = 0;
    std::vector<DecayCheckResult> envelope(static_cast<std::size_t>(count) * multipliers.size());
    parallel_for(static_cast<int>(envelope.size()), opts.workers, [&](int idx) {
        const std::size_t mi = static_cast<std::size_t>(idx) / count;
        const RngSeed gseed = derive_seed(seed, static_cast<std::uint64_t>(idx));
        const Graph g = erdos_renyi(n, Rng(gseed).uniform(), derive_seed(gseed, 7));
        envelope[static_cast<std::size_t>(idx)] = check_decay_envelope(
            g, multipliers[mi] * tau_c_complete, h, t_end,
            "er-" + std::to_string(idx % count) + "-x" + std::to_string(multipliers[mi]));
        if (!envelope[static_cast<std::size_t>(idx)].pass) {
            json params = {{"check", "decay_envelope"},
                           {"tau", multipliers[mi] * tau_c_complete},
                           {"seed", gseed},
                           {"h", h},
                           {"t_end", t_end}};
            write_counterexample_bundle(
                cx_dir + "/envelope-" + std::to_string(idx), g, params.dump(2),
                {"max_residual,argmax_time",
                 fmt_full(envelope[static_cast<std::size_t>(idx)].max_residual) + "," +
                     fmt_full(envelope[static_cast<std::size_t>(idx)].argmax_time)});
        }
    });
    for (const auto& res : envelope) {
        os << "decay_envelope," << res.graph_id << "," << fmt_full(res.tau) << ","
           << fmt_full(res.max_residual) << "," << (res.pass ? 1 : 0) << "\n";
        if (!res.pass) ++failures;
    }

    // projection checks on connected graphs (plus the exactly regular ring)
    std::vector<ProjectionCheckResult> projection(projection_count + 1);
    parallel_for(projection_count + 1, opts.workers, [&](int idx) {
        Graph g = idx == 0 ? cycle_graph(n) : Graph();
        std::string id = idx == 0 ? "ring" : "er-conn-" + std::to_string(idx - 1);
        if (idx > 0) {
            RngSeed s = derive_seed(seed, 0xABC0 + static_cast<std::uint64_t>(idx));
            for (int tries = 0;; ++tries) {
                g = erdos_renyi(n, 0.1 + 0.85 * Rng(s).uniform(), derive_seed(s, 11));
                if (is_connected(g)) break;
                s = derive_seed(s, 13 + tries);
            }
        }
        const double tau = idx == 0 ? 1.0 / g.spectral().lambda1 : tau_c_complete;
        projection[static_cast<std::size_t>(idx)] =
            check_projection_inequalities(g, tau, h, t_end, id);
        if (!projection[static_cast<std::size_t>(idx)].pass) {
            const auto& res = projection[static_cast<std::size_t>(idx)];
            json params = {{"check", "projection"}, {"tau", tau}, {"h", h}, {"t_end", t_end}};
            write_counterexample_bundle(
                cx_dir + "/projection-" + id, g, params.dump(2),
                {"c_residual,xi_residual,mean_residual,chain_residual,max_xi_norm",
                 fmt_full(res.max_c_residual) + "," + fmt_full(res.max_xi_residual) + "," +
                     fmt_full(res.max_mean_residual) + "," + fmt_full(res.max_chain_residual) +
                     "," + fmt_full(res.max_xi_norm)});
        }
    });
    for (const auto& res : projection) {
        const double worst = std::max({res.max_c_residual, res.max_xi_residual,
                                       res.max_mean_residual, res.max_chain_residual});
        os << "projection," << res.graph_id << "," << fmt_full(res.tau) << ","
           << fmt_full(worst) << "," << (res.pass ? 1 : 0) << "\n";
        if (!res.pass) ++failures;
    }

    write_meta(out, cfg, 1.0, {{"failures", failures}});
    std::cout << "wrote " << out.string() << " (" << failures << " failed checks)\n";
    return failures == 0 ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"NIMFA SIS on time-varying networks: simulation, transition-time "
                 "measurement, analytic bounds, and Markovian cross-validation"};
    app.require_subcommand(1);

    GlobalOptions opts;
    app.add_option("--config", opts.config_path, "experiment config (JSON)");
    app.add_option("--out", opts.out_dir, "output directory (prefixes configured paths)");
    auto* seed_opt = app.add_option("--seed", opts.seed, "master seed override");
    app.add_option("--workers", opts.workers, "worker thread count")->check(CLI::PositiveNumber);
    app.add_option("--set", opts.overrides, "config override key=value (repeatable)");

    auto* simulate = app.add_subcommand("simulate", "static NIMFA trajectory CSV");
    auto* temporal = app.add_subcommand("temporal", "temporal NIMFA trajectory CSV");
    auto* sweep = app.add_subcommand("sweep", "transition-time and bound sweep CSV");
    auto* predict = app.add_subcommand("predict", "quenched prediction error CSV");
    auto* markov = app.add_subcommand("markov", "Markovian SIS ensemble CSV");
    markov->add_option("--runs", opts.runs, "ensemble run count override");
    auto* verify = app.add_subcommand("verify", "decay envelope and projection checks");
    for (auto* sub : {simulate, temporal, sweep, predict, markov, verify}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }
    opts.seed_given = seed_opt->count() > 0;
    if (opts.config_path.empty()) {
        std::cerr << "error: --config is required\n";
        return 1;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(opts);
        if (temporal->parsed()) return cmd_temporal(opts);
        if (sweep->parsed()) return cmd_sweep(opts);
        if (predict->parsed()) return cmd_predict(opts);
        if (markov->parsed()) return cmd_markov(opts);
        if (verify->parsed()) return cmd_verify(opts);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
