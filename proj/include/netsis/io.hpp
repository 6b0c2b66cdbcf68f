#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "netsis/graph.hpp"
#include "netsis/stochastic.hpp"
#include "netsis/temporal.hpp"
#include "netsis/transition.hpp"

namespace netsis {

/// Thrown on malformed configuration or generator specs; the CLI maps it to
/// the usage/config exit code.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Full-precision decimal formatting (17 significant digits round-trips a
/// double exactly).
std::string fmt_full(double x);

// ---------------------------------------------------------------------------
// JSON generator specs, e.g. {"kind":"er","n":50,"p":0.5,"seed":42}.
// Accepted kinds: er, ba, ws, complete, complete_bipartite, star, path,
// cycle, edge_list. A bare JSON string is treated as an edge-list path.

Graph graph_from_spec_json(const std::string& json_text);

/// {"delta_t": 10.0, "graphs": [<generator spec or edge-list path>, ...]}
/// or a random sequence {"delta_t":..., "count":M, "random":{"kind":"er",
/// "n":50, "p":[lo,hi]}, "seed":...}.
TemporalNetwork temporal_from_json(const std::string& json_text);

// ---------------------------------------------------------------------------
// CSV emitters (17 significant digits everywhere)

/// Header "t,y,v_0,...,v_{N-1}", one row per sample.
void write_trajectory_csv(const Trajectory& traj, std::ostream& out);

/// Header "t,y_actual,y_pred,abs_err"; rows start at the first predicted
/// interval.
void write_prediction_csv(const PredictionReport& report, std::ostream& out);

/// Header "t,mean_y,survivors,runs,stderr".
void write_ensemble_csv(const EnsembleResult& res, std::ostream& out);

/// Header "graph_id,seed,R0,y_inf,t_bar_decay,t_bar_growth,t_star,U_D,U_G,
/// T_hat,L_G,L_D,flags".
void write_sweep_header(std::ostream& out);
void write_sweep_row(const TransitionReport& rep, std::ostream& out);

} // namespace netsis
