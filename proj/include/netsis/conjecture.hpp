#pragma once

#include <string>
#include <vector>

#include "netsis/dynamics.hpp"
#include "netsis/graph.hpp"

namespace netsis {

/// Residual slack absorbing integrator error so discretization noise cannot
/// produce false counterexamples.
inline constexpr double kConjectureSlack = 1e-9;

/// Result of checking that the decay from the all-infected state stays under
/// the universal envelope: |y(t) - y_inf| <= 1/(1+t).
struct DecayCheckResult {
    std::string graph_id;
    double tau = 0.0;
    double max_residual = 0.0;  ///< max over samples of |y - y_inf| - 1/(1+t)
    double argmax_time = 0.0;
    bool pass = false;          ///< max_residual <= kConjectureSlack
};

/// Integrates the decay from V(0) = u and reports the largest envelope
/// violation on the sample grid. Stops early once the gap is certain to stay
/// under the envelope for the rest of [0, t_end].
DecayCheckResult check_decay_envelope(const Graph& g, double tau, double h, double t_end,
                                      const std::string& graph_id = "");

/// Residual maxima for the spectral-projection decomposition of a decay run
/// from V(0) = u on a connected graph. With c(t) = x1' V(t) and
/// xi(t) = V(t) - c(t) x1, the checked inequalities are
///   c(t) <= c(0)/(1+t)
///   ||xi(t)|| <= ||xi(0)||/(1+t)
///   N y(t) <= c(0)c(t) + ||xi(0)|| ||xi(t)||   (Cauchy-Schwarz side)
///   c(0)c(t) + ||xi(0)|| ||xi(t)|| <= N/(1+t)
/// Each residual is reported on the per-node (prevalence) scale: the first
/// two are divided by sqrt(N), the last two by N. Otherwise the slack could
/// not absorb integrator error uniformly in N, which is its whole job.
struct ProjectionCheckResult {
    std::string graph_id;
    double tau = 0.0;
    double max_c_residual = 0.0;
    double max_xi_residual = 0.0;
    double max_mean_residual = 0.0;
    double max_chain_residual = 0.0;
    double max_xi_norm = 0.0;   ///< sup over samples of ||xi(t)|| (regular graphs: ~0)
    double c0 = 0.0;
    double xi0_norm = 0.0;
    bool regular = false;
    bool pass = false;
};

ProjectionCheckResult check_projection_inequalities(const Graph& g, double tau, double h,
                                                    double t_end,
                                                    const std::string& graph_id = "");

/// Reproducible counterexample bundle: edge list, JSON parameters, and a
/// residual CSV, written into its own directory.
void write_counterexample_bundle(const std::string& dir, const Graph& g,
                                 const std::string& params_json,
                                 const std::vector<std::string>& residual_csv_lines);

} // namespace netsis
