#pragma once

#include <span>
#include <string>
#include <vector>

#include "netsis/graph.hpp"
#include "netsis/transition.hpp"

namespace netsis {

enum class GraphType { er, ba, ws };

GraphType graph_type_from_string(const std::string& s);
std::string to_string(GraphType t);

/// Random graph with the parameter priors used in the ensemble comparison:
/// ER p ~ Unif(0,1); BA m0 ~ Unif{1,n}, m ~ Unif{1,m0};
/// WS K ~ Unif{1,floor((n-1)/2)}, beta_ws ~ Unif(0,1).
Graph random_sweep_graph(GraphType type, int n, RngSeed seed);

struct BoundOrderingCheck {
    bool lower_decay_ok = true;   ///< L_D <= t_bar_decay
    bool lower_growth_ok = true;  ///< L_G <= t_bar_growth (supercritical only)
    bool upper_ok = true;         ///< max(t_bar_decay, t_bar_growth) <= T_hat

    bool all_ok() const { return lower_decay_ok && lower_growth_ok && upper_ok; }
};

/// Checks the bound ordering chain with one grid step of slack for the
/// measured times.
BoundOrderingCheck check_bound_ordering(const TransitionReport& rep, double h);

/// One R0 bin of a decay sweep: how tightly R0 pins the transition time.
struct R0Bin {
    double r0_lo = 0.0;
    double r0_hi = 0.0;
    int count = 0;
    double mean_t_bar = 0.0;
    double range_t_bar = 0.0;  ///< max - min within the bin
    bool flagged = false;      ///< range exceeds 20% of the bin mean
};

/// Bins decay transition times by R0 (bin width 0.05) and flags bins whose
/// within-bin spread exceeds 20% of the bin mean. A tight across-bin trend
/// with small within-bin ranges is what "R0 determines the transition time"
/// looks like in data; flags concentrate around R0 = 1 where the asymptote
/// amplifies any spread.
std::vector<R0Bin> bin_by_r0(std::span<const TransitionReport> reports,
                             double bin_width = 0.05);

/// Spot check for mixed initial states: the reported transition time comes
/// from the two extremal starts (all-one and r-floor); this samples random
/// V(0) with entries uniform in [r,1] and counts how many converge later
/// than the reported time. Exceedances are reported, not fatal: the
/// extremal-start reduction is an assumption, not a theorem.
struct MixedStartCheck {
    int samples = 0;
    int exceedances = 0;
    double worst_excess = 0.0;  ///< largest measured - reported (when positive)
};

MixedStartCheck spot_check_mixed_starts(const Graph& g, double tau, double r,
                                        double t_bar_reported, int samples, RngSeed seed,
                                        const TBarOptions& opts = {});

} // namespace netsis
