#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "netsis/dynamics.hpp"
#include "netsis/graph.hpp"

namespace netsis {

// ---------------------------------------------------------------------------
// analytic bounds on the upper-transition time (rescaled time, delta = 1)

/// Decay bound from the universal 1/(1+t) envelope: (1 - r)/r.
double decay_bound_envelope(double r);

/// Subcritical exponential decay bound: log(1/r)/(1 - R0). Requires R0 < 1.
double decay_bound_subcritical_core(double r0, double r);
double decay_bound_subcritical(const Graph& g, double tau, double r);

/// R0 value where the two decay bounds intersect: 1 - r/(1-r) log(1/r).
double bound_crossover(double r);

/// Growth bound (2/(R0-1)) log(tau d_max / (r (tau d_max + 1)) - 1) for a
/// connected supercritical graph; zero in the degenerate case where the
/// starting prevalence is already within r of the steady state.
double growth_bound_core(double r0, double tau_dmax, double r);
double growth_bound(const Graph& g, double tau, double r);

/// Tighter first form using the actual largest steady-state entry.
double growth_bound_from_vinf(double r0, double v_inf_max, double r);

/// Growth bound extended to general graphs: max over the supercritical
/// connected components; NaN when no component is supercritical.
double growth_bound_general(const Graph& g, double tau, double r);

/// Combined upper bound: per connected component, the subcritical
/// exponential bound below the crossover, the envelope bound up to R0 = 1,
/// and max(envelope, growth) above; the graph value is the component max.
double combined_upper_bound(const Graph& g, double tau, double r);

/// Variant using only the growth bound above the threshold (the envelope
/// term is dropped for R0 > 1); this is the practical inter-update-time
/// recipe for quenched prediction.
double combined_upper_bound_growth_only(const Graph& g, double tau, double r);

double combined_upper_bound_sequence(std::span<const Graph> graphs, double tau, double r);
double combined_upper_bound_sequence_growth_only(std::span<const Graph> graphs, double tau,
                                                 double r);

/// Lower bounds. Growth: log((y_inf - r)/r)/(R0 - 1), requires R0 > 1,
/// zero when y_inf <= 2r. Decay: log(1/(y_inf + r)), floored at zero.
double growth_lower_bound_core(double r0, double y_inf, double r);
double growth_lower_bound(const Graph& g, double tau, double r);
double decay_lower_bound_core(double y_inf, double r);
double decay_lower_bound(const Graph& g, double tau, double r);

/// Starting level eps such that the process started from eps*u stays more
/// than r away from the steady-state prevalence until at least time T:
/// eps = (y_inf - r) exp(-(tau N - 1) T). Requires R0 > 1 and r < y_inf.
double slow_start_epsilon(const Graph& g, double tau, double r, double T);

struct SlowStartCheck {
    bool holds = true;
    double first_violation_t = -1.0;
};

/// Integrates from eps*u and verifies |y(t) - y_inf| > r on every sample
/// up to T.
SlowStartCheck verify_slow_start(const Graph& g, double tau, double r, double T,
                                 double h = 0.01);

// ---------------------------------------------------------------------------
// measured convergence times

struct TBarOptions {
    double h = 0.01;
    double t_max = 1e4;
    /// sup-norm distance to the steady state below which the trajectory is
    /// treated as converged for good (the prevalence can no longer leave the
    /// r-band, so the run may stop before t_max without changing the answer)
    double converge_eps = 1e-10;
};

enum class StartMode {
    decay_from_full,   ///< V(0) = u
    growth_from_floor  ///< V(0) = r u
};

struct TBarResult {
    double t_bar = 0.0;          ///< last-entry time into the r-band (grid multiple)
    double y_inf = 0.0;
    bool degenerate_start = false; ///< |y(0) - y_inf| <= r
    bool hit_t_max = false;        ///< stopped at t_max instead of the certificate
    /// |y - y_inf| at the stopping point: the certified residual when the
    /// early stop fired, the honest end-of-run gap when t_max was hit
    double final_gap = 0.0;
};

/// Upper-transition time for one extremal start: the first grid time t with
/// |y(t) - y_inf| <= r such that the gap stays within r for every later
/// sample. The steady state comes from the fixed-point solver.
TBarResult measure_t_bar(const Graph& g, double tau, double r, StartMode mode,
                         const TBarOptions& opts = {});

/// First grid time at which every nodal probability changes by at most
/// h * r_star over one step. Throws if not reached by t_max.
double derivative_convergence_time(const Graph& g, double tau, double r_star,
                                   const StateVector& v0, double h = 0.01,
                                   double t_max = 1e4);

/// One decay pass from V(0) = u measuring the band-entry times for several
/// tolerances r and the derivative convergence times for several r_star in
/// a single integration. NaN entries mean "not reached by t_max".
struct DecayProfile {
    std::vector<double> t_bar;
    std::vector<double> t_star;
    double y_inf = 0.0;
    bool complete = true;   ///< false if t_max cut the pass short
    double final_gap = 0.0; ///< |y - y_inf| at the stopping point
};

DecayProfile measure_decay_profile(const Graph& g, double tau, std::span<const double> rs,
                                   std::span<const double> r_stars,
                                   const TBarOptions& opts = {});

// ---------------------------------------------------------------------------
// per-graph report

struct TransitionBounds {
    double u_d_envelope = 0.0;      ///< (1-r)/r
    double u_d_subcritical = 0.0;   ///< NaN if R0 >= 1
    double u_d = 0.0;               ///< piecewise decay bound actually in force
    double u_g = 0.0;               ///< growth bound, NaN if nothing supercritical
    double t_hat = 0.0;             ///< combined upper bound
    double l_g = 0.0;               ///< NaN if R0 <= 1
    double l_d = 0.0;
};

struct TransitionReport {
    std::string graph_id;
    RngSeed seed = 0;
    double r0 = 0.0;
    double y_inf = 0.0;
    double t_bar_decay = 0.0;
    double t_bar_growth = 0.0;
    double t_star = 0.0;
    TransitionBounds bounds;
    std::vector<std::string> flags;

    double t_bar() const { return std::max(t_bar_decay, t_bar_growth); }
    bool has_flag(const std::string& f) const;
    std::string flags_joined() const;
};

/// Full measurement + bounds for one graph: decay and growth transition
/// times, the derivative convergence time at r_star, and every analytic
/// bound. Adds diagnostic flags rather than failing on benign conditions
/// (subcritical, degenerate growth start, t_max hit, steady-state
/// cross-check discrepancy).
TransitionReport transition_report(const Graph& g, double tau, double r, double r_star,
                                   const TBarOptions& opts = {}, const std::string& graph_id = "",
                                   RngSeed seed = 0);

} // namespace netsis
