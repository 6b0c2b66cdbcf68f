#include "netsis/io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "json.hpp"

namespace netsis {

using nlohmann::json;

std::string fmt_full(double x) {
    if (std::isnan(x)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace {

Graph graph_from_spec(const json& spec) {
    if (spec.is_string()) return read_edge_list_file(spec.get<std::string>());
    if (!spec.is_object()) throw ConfigError("graph spec must be an object or a path string");
    const std::string kind = spec.value("kind", "");
    try {
        if (kind == "er")
            return erdos_renyi(spec.at("n").get<int>(), spec.at("p").get<double>(),
                               spec.value("seed", RngSeed{0}));
        if (kind == "ba")
            return barabasi_albert(spec.at("n").get<int>(), spec.at("m0").get<int>(),
                                   spec.at("m").get<int>(), spec.value("seed", RngSeed{0}));
        if (kind == "ws")
            return watts_strogatz(spec.at("n").get<int>(), spec.at("K").get<int>(),
                                  spec.at("beta_ws").get<double>(),
                                  spec.value("seed", RngSeed{0}));
        if (kind == "complete") return complete_graph(spec.at("n").get<int>());
        if (kind == "complete_bipartite")
            return complete_bipartite(spec.at("a").get<int>(), spec.at("b").get<int>());
        if (kind == "star") return star_graph(spec.at("n").get<int>());
        if (kind == "path") return path_graph(spec.at("n").get<int>());
        if (kind == "cycle") return cycle_graph(spec.at("n").get<int>());
        if (kind == "edge_list") return read_edge_list_file(spec.at("path").get<std::string>());
    } catch (const json::exception& e) {
        throw ConfigError(std::string("graph spec field error: ") + e.what());
    }
    throw ConfigError("unknown graph kind: '" + kind + "'");
}

} // namespace

Graph graph_from_spec_json(const std::string& json_text) {
    json spec;
    try {
        spec = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid graph spec JSON: ") + e.what());
    }
    return graph_from_spec(spec);
}

TemporalNetwork temporal_from_json(const std::string& json_text) {
    json spec;
    try {
        spec = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid temporal network JSON: ") + e.what());
    }
    if (!spec.is_object()) throw ConfigError("temporal network spec must be an object");
    if (!spec.contains("delta_t")) throw ConfigError("temporal network spec needs delta_t");
    const double delta_t = spec.at("delta_t").get<double>();

    std::vector<Graph> graphs;
    if (spec.contains("graphs")) {
        for (const auto& gs : spec.at("graphs")) graphs.push_back(graph_from_spec(gs));
    } else if (spec.contains("random")) {
        const auto& rnd = spec.at("random");
        const int count = spec.value("count", 0);
        if (count < 1) throw ConfigError("random temporal sequence needs count >= 1");
        if (rnd.value("kind", "") != "er")
            throw ConfigError("random temporal sequences support kind 'er' only");
        const int n = rnd.at("n").get<int>();
        double p_lo, p_hi;
        if (rnd.at("p").is_array()) {
            p_lo = rnd.at("p").at(0).get<double>();
            p_hi = rnd.at("p").at(1).get<double>();
        } else {
            p_lo = p_hi = rnd.at("p").get<double>();
        }
        const RngSeed seed = spec.value("seed", RngSeed{0});
        Rng rng(derive_seed(seed, 0));
        for (int m = 0; m < count; ++m) {
            const double p = p_lo + (p_hi - p_lo) * rng.uniform();
            graphs.push_back(erdos_renyi(n, p, derive_seed(seed, m + 1)));
        }
    } else {
        throw ConfigError("temporal network spec needs 'graphs' or 'random' + 'count'");
    }
    return constant_interval_network(std::move(graphs), delta_t);
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
    const int n = traj.states.empty() ? 0 : static_cast<int>(traj.states.front().size());
    out << "t,y";
    for (int i = 0; i < n; ++i) out << ",v_" << i;
    out << "\n";
    for (std::size_t k = 0; k < traj.size(); ++k) {
        out << fmt_full(traj.times[k]) << "," << fmt_full(traj.prevalence[k]);
        for (double v : traj.states[k]) out << "," << fmt_full(v);
        out << "\n";
    }
}

void write_prediction_csv(const PredictionReport& report, std::ostream& out) {
    out << "t,y_actual,y_pred,abs_err\n";
    for (std::size_t k = report.first_compared_sample; k < report.actual.size(); ++k) {
        out << fmt_full(report.actual.times[k]) << ","
            << fmt_full(report.actual.prevalence[k]) << ","
            << fmt_full(report.pred_prevalence[k]) << "," << fmt_full(report.abs_error[k])
            << "\n";
    }
}

void write_ensemble_csv(const EnsembleResult& res, std::ostream& out) {
    out << "t,mean_y,survivors,runs,stderr\n";
    for (std::size_t k = 0; k < res.times.size(); ++k) {
        out << fmt_full(res.times[k]) << "," << fmt_full(res.mean_y[k]) << ","
            << res.survivors[k] << "," << res.runs << "," << fmt_full(res.stderr_y[k]) << "\n";
    }
}

void write_sweep_header(std::ostream& out) {
    out << "graph_id,seed,R0,y_inf,t_bar_decay,t_bar_growth,t_star,U_D,U_G,T_hat,L_G,L_D,flags\n";
}

void write_sweep_row(const TransitionReport& rep, std::ostream& out) {
    out << rep.graph_id << "," << rep.seed << "," << fmt_full(rep.r0) << ","
        << fmt_full(rep.y_inf) << "," << fmt_full(rep.t_bar_decay) << ","
        << fmt_full(rep.t_bar_growth) << "," << fmt_full(rep.t_star) << ","
        << fmt_full(rep.bounds.u_d) << "," << fmt_full(rep.bounds.u_g) << ","
        << fmt_full(rep.bounds.t_hat) << "," << fmt_full(rep.bounds.l_g) << ","
        << fmt_full(rep.bounds.l_d) << "," << rep.flags_joined() << "\n";
}

} // namespace netsis
