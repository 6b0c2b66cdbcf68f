#pragma once

#include <cmath>
#include <vector>

#include "netsis/dynamics.hpp"
#include "netsis/graph.hpp"

namespace netsis {

/// Ordered graph sequence with update times t_0 < t_1 < ... < t_M.
/// graphs[m] is active on [update_times[m], update_times[m+1]).
struct TemporalNetwork {
    std::vector<Graph> graphs;
    std::vector<double> update_times;

    int node_count() const { return graphs.empty() ? 0 : graphs.front().node_count(); }
    int interval_count() const { return static_cast<int>(graphs.size()); }
    double start_time() const { return update_times.front(); }
    double end_time() const { return update_times.back(); }

    /// Throws if the sequence is malformed (count mismatch, unequal node
    /// counts, non-increasing update times).
    void validate() const;
};

/// Equal inter-update times: t_m = t0 + m * delta_t.
TemporalNetwork constant_interval_network(std::vector<Graph> graphs, double delta_t,
                                          double t0 = 0.0);

struct SnapInfo {
    double max_snap_error = 0.0;  ///< largest |t_m - snapped t_m|
};

/// Piecewise NIMFA integration over the sequence. Update times are snapped
/// to the nearest multiple of h (the snap error is reported); the state is
/// continuous across updates while the derivative may jump. Throws if two
/// update times snap to the same grid point.
Trajectory integrate_temporal(const TemporalNetwork& tn, const EpidemicParams& p,
                              const StateVector& v0, double h, SnapInfo* snap = nullptr);

/// Prediction of one interval from the predecessor's steady state.
struct IntervalPrediction {
    int interval = 0;          ///< index m into tn.graphs (m >= 1)
    bool die_out_floor = false;///< start replaced by r*u because y_inf(G_{m-1}) < r
    Trajectory trajectory;     ///< on the same grid as the actual trajectory
};

struct PredictionReport {
    Trajectory actual;
    std::vector<IntervalPrediction> predicted;
    /// Predicted prevalence and |y_pred - y_actual| aligned with
    /// actual.times; NaN over the first interval (no predecessor steady
    /// state to predict from).
    std::vector<double> pred_prevalence;
    std::vector<double> abs_error;
    std::size_t first_compared_sample = 0;

    double max_abs_error() const;
};

/// Quenched prediction: interval m >= 2 is predicted by the static process
/// on G_m started from the steady state of G_{m-1}; a sub-tolerance
/// predecessor (y_inf < r) is floored to r*u. Compared against the actual
/// temporal trajectory started from v0.
PredictionReport quenched_predict(const TemporalNetwork& tn, const EpidemicParams& p,
                                  double r, double h, const StateVector& v0);

} // namespace netsis
