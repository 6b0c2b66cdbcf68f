#include "netsis/temporal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace netsis {

void TemporalNetwork::validate() const {
    if (graphs.empty()) throw std::invalid_argument("temporal network: no graphs");
    if (update_times.size() != graphs.size() + 1)
        throw std::invalid_argument("temporal network: need one more update time than graphs");
    const int n = graphs.front().node_count();
    for (const Graph& g : graphs)
        if (g.node_count() != n)
            throw std::invalid_argument("temporal network: node counts differ between graphs");
    for (std::size_t m = 1; m < update_times.size(); ++m)
        if (!(update_times[m] > update_times[m - 1]))
            throw std::invalid_argument("temporal network: update times must increase");
}

TemporalNetwork constant_interval_network(std::vector<Graph> graphs, double delta_t, double t0) {
    if (delta_t <= 0.0) throw std::invalid_argument("constant_interval_network: delta_t must be > 0");
    TemporalNetwork tn;
    tn.update_times.resize(graphs.size() + 1);
    for (std::size_t m = 0; m < tn.update_times.size(); ++m)
        tn.update_times[m] = t0 + static_cast<double>(m) * delta_t;
    tn.graphs = std::move(graphs);
    tn.validate();
    return tn;
}

namespace {

// Snap update times onto the step grid; boundary m lands on step index
// round((t_m - t_0)/h).
std::vector<std::int64_t> snap_boundaries(const TemporalNetwork& tn, double h, SnapInfo* snap) {
    const double t0 = tn.update_times.front();
    std::vector<std::int64_t> idx(tn.update_times.size());
    double max_err = 0.0;
    for (std::size_t m = 0; m < tn.update_times.size(); ++m) {
        idx[m] = static_cast<std::int64_t>(std::llround((tn.update_times[m] - t0) / h));
        max_err = std::max(max_err,
                           std::abs(tn.update_times[m] - (t0 + static_cast<double>(idx[m]) * h)));
    }
    for (std::size_t m = 1; m < idx.size(); ++m)
        if (idx[m] <= idx[m - 1])
            throw std::invalid_argument(
                "integrate_temporal: update times collide on the step grid; lower h");
    if (snap) snap->max_snap_error = max_err;
    return idx;
}

} // namespace

Trajectory integrate_temporal(const TemporalNetwork& tn, const EpidemicParams& p,
                              const StateVector& v0, double h, SnapInfo* snap) {
    tn.validate();
    const auto idx = snap_boundaries(tn, h, snap);
    const std::int64_t total_steps = idx.back();

    NimfaIntegrator it(tn.graphs.front(), p, v0, h, tn.update_times.front());
    Trajectory traj;
    traj.times.reserve(total_steps + 1);
    traj.states.reserve(total_steps + 1);
    traj.prevalence.reserve(total_steps + 1);
    traj.times.push_back(it.time());
    traj.states.push_back(it.state());
    traj.prevalence.push_back(it.prevalence_now());

    std::size_t interval = 0;
    for (std::int64_t k = 0; k < total_steps; ++k) {
        while (interval + 1 < tn.graphs.size() && k >= idx[interval + 1]) {
            ++interval;
            it.set_graph(tn.graphs[interval]);
        }
        it.step();
        traj.times.push_back(it.time());
        traj.states.push_back(it.state());
        traj.prevalence.push_back(it.prevalence_now());
    }
    traj.max_clamp = it.max_clamp();
    return traj;
}

double PredictionReport::max_abs_error() const {
    double m = 0.0;
    for (double e : abs_error)
        if (!std::isnan(e)) m = std::max(m, e);
    return m;
}

PredictionReport quenched_predict(const TemporalNetwork& tn, const EpidemicParams& p,
                                  double r, double h, const StateVector& v0) {
    tn.validate();
    if (tn.interval_count() < 2)
        throw std::invalid_argument("quenched_predict: need at least two intervals");
    const double tau = p.beta / p.delta;

    PredictionReport report;
    SnapInfo snap;
    report.actual = integrate_temporal(tn, p, v0, h, &snap);
    const auto idx = snap_boundaries(tn, h, nullptr);
    report.pred_prevalence.assign(report.actual.times.size(),
                                  std::numeric_limits<double>::quiet_NaN());
    report.abs_error.assign(report.actual.times.size(),
                            std::numeric_limits<double>::quiet_NaN());
    report.first_compared_sample = static_cast<std::size_t>(idx[1]);

    const int n = tn.node_count();
    for (std::size_t m = 1; m < tn.graphs.size(); ++m) {
        IntervalPrediction pred;
        pred.interval = static_cast<int>(m);

        StateVector start = steady_state(tn.graphs[m - 1], tau);
        if (prevalence(start) < r) {
            start = uniform_state(n, r);
            pred.die_out_floor = true;
        }

        const std::int64_t k_begin = idx[m];
        const std::int64_t k_end = idx[m + 1];
        NimfaIntegrator it(tn.graphs[m], p, start, h,
                           tn.update_times.front() + static_cast<double>(k_begin) * h);
        pred.trajectory.times.push_back(it.time());
        pred.trajectory.states.push_back(it.state());
        pred.trajectory.prevalence.push_back(it.prevalence_now());
        for (std::int64_t k = k_begin; k < k_end; ++k) {
            it.step();
            pred.trajectory.times.push_back(it.time());
            pred.trajectory.states.push_back(it.state());
            pred.trajectory.prevalence.push_back(it.prevalence_now());
        }

        // fill errors on [t_m, t_{m+1}); the final boundary belongs to the
        // last interval so its endpoint is also compared
        const std::int64_t k_stop = (m + 1 == tn.graphs.size()) ? k_end : k_end - 1;
        for (std::int64_t k = k_begin; k <= k_stop; ++k) {
            const double y_pred =
                pred.trajectory.prevalence[static_cast<std::size_t>(k - k_begin)];
            report.pred_prevalence[static_cast<std::size_t>(k)] = y_pred;
            report.abs_error[static_cast<std::size_t>(k)] =
                std::abs(y_pred - report.actual.prevalence[static_cast<std::size_t>(k)]);
        }

        report.predicted.push_back(std::move(pred));
    }
    return report;
}

} // namespace netsis
