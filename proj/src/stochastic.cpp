#include "netsis/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "netsis/parallel.hpp"

namespace netsis {

namespace {

// Incrementally maintained S-I bookkeeping: inf_nbrs[i] counts infected
// neighbors of i under the active graph; total_si sums inf_nbrs over the
// susceptible nodes only.
struct SisBookkeeping {
    std::vector<std::uint8_t> infected;
    std::vector<int> inf_nbrs;
    long total_si = 0;
    int n_infected = 0;

    void rebuild(const Graph& g) {
        const int n = g.node_count();
        inf_nbrs.assign(n, 0);
        total_si = 0;
        n_infected = 0;
        for (int i = 0; i < n; ++i) {
            if (!infected[i]) continue;
            ++n_infected;
            for (int j : g.neighbors(i)) ++inf_nbrs[j];
        }
        for (int i = 0; i < n; ++i)
            if (!infected[i]) total_si += inf_nbrs[i];
    }

    void infect(const Graph& g, int i) {
        infected[i] = 1;
        ++n_infected;
        total_si -= inf_nbrs[i];
        for (int j : g.neighbors(i)) {
            ++inf_nbrs[j];
            if (!infected[j]) ++total_si;
        }
    }

    void cure(const Graph& g, int i) {
        infected[i] = 0;
        --n_infected;
        for (int j : g.neighbors(i)) {
            --inf_nbrs[j];
            if (!infected[j]) --total_si;
        }
        total_si += inf_nbrs[i];
    }

    long recount(const Graph& g) const {
        long si = 0;
        for (int i = 0; i < g.node_count(); ++i)
            if (!infected[i])
                for (int j : g.neighbors(i)) si += infected[j];
        return si;
    }
};

// Core event loop shared by the path recorder and the ensemble sampler.
// on_event(t, node, infection) is called for every state change.
template <typename EventSink>
double run_gillespie(const TemporalNetwork& tn, double beta, double delta,
                     const MarkovState& x0, double t_end, Rng& rng,
                     const GillespieOptions& opts, EventSink&& on_event) {
    const int n = tn.node_count();
    if (static_cast<int>(x0.infected.size()) != n)
        throw std::invalid_argument("gillespie_sis: initial state size mismatch");
    if (beta < 0.0 || delta <= 0.0)
        throw std::invalid_argument("gillespie_sis: need beta >= 0 and delta > 0");

    SisBookkeeping bk;
    bk.infected = x0.infected;
    std::size_t interval = 0;
    bk.rebuild(tn.graphs[interval]);

    double t = tn.update_times.front();
    const double horizon = std::min(t_end, tn.update_times.back());
    long events = 0;

    while (bk.n_infected > 0) {
        const Graph& g = tn.graphs[interval];
        const double rate_cure = delta * bk.n_infected;
        const double rate_inf = beta * static_cast<double>(bk.total_si);
        const double total = rate_cure + rate_inf;

        const double wait = rng.exponential(total);
        double t_next = t + wait;

        // graph update before the event fires: advance the clock, swap the
        // topology, redraw (exact by memorylessness of the exponential)
        const double t_update =
            interval + 1 < tn.graphs.size() ? tn.update_times[interval + 1] : horizon;
        if (t_next >= t_update) {
            t = t_update;
            if (t >= horizon) return std::numeric_limits<double>::infinity();
            ++interval;
            bk.rebuild(tn.graphs[interval]);
            continue;
        }
        if (t_next >= horizon) return std::numeric_limits<double>::infinity();
        t = t_next;

        if (rng.uniform() * total < rate_cure) {
            // cure: uniform among infected nodes
            std::uint64_t pick = rng.uniform_index(static_cast<std::uint64_t>(bk.n_infected));
            int node = -1;
            for (int i = 0; i < n; ++i) {
                if (bk.infected[i] && pick-- == 0) {
                    node = i;
                    break;
                }
            }
            bk.cure(g, node);
            on_event(t, node, false);
        } else {
            // infection: susceptible node chosen proportionally to its
            // infected-neighbor count (equivalently, a uniform S-I link)
            const double u = rng.uniform() * static_cast<double>(bk.total_si);
            double acc = 0.0;
            int node = -1;
            for (int i = 0; i < n; ++i) {
                if (bk.infected[i]) continue;
                acc += bk.inf_nbrs[i];
                if (u < acc) {
                    node = i;
                    break;
                }
            }
            if (node < 0) { // boundary rounding; take the last S node with links
                for (int i = n - 1; i >= 0; --i)
                    if (!bk.infected[i] && bk.inf_nbrs[i] > 0) {
                        node = i;
                        break;
                    }
            }
            bk.infect(g, node);
            on_event(t, node, true);
        }

        if (opts.recount_check && ++events % opts.recount_every == 0) {
            if (bk.recount(tn.graphs[interval]) != bk.total_si)
                throw std::logic_error("gillespie_sis: S-I link bookkeeping drifted");
        }
    }
    return t; // absorbed in the all-healthy state
}

} // namespace

EventPath gillespie_sis(const TemporalNetwork& tn, double beta, double delta,
                        const MarkovState& x0, double t_end, RngSeed seed,
                        const GillespieOptions& opts) {
    tn.validate();
    Rng rng(seed);
    EventPath path;
    path.t_end = t_end;
    path.extinction_time = run_gillespie(tn, beta, delta, x0, t_end, rng, opts,
                                         [&](double t, int node, bool infection) {
                                             path.events.push_back({t, node, infection});
                                         });
    return path;
}

EnsembleResult ensemble_prevalence(const TemporalNetwork& tn, double beta, double delta,
                                   const MarkovState& x0, double t_end, int runs,
                                   double sample_dt, RngSeed seed, int workers) {
    tn.validate();
    if (runs < 1) throw std::invalid_argument("ensemble_prevalence: runs must be >= 1");
    if (sample_dt <= 0.0) throw std::invalid_argument("ensemble_prevalence: sample_dt must be > 0");
    if (t_end > tn.update_times.back() + 1e-9)
        throw std::invalid_argument("ensemble_prevalence: t_end exceeds the network horizon");

    const int n = tn.node_count();
    const double t0 = tn.update_times.front();
    const auto grid_points =
        static_cast<std::size_t>(std::llround((t_end - t0) / sample_dt)) + 1;

    EnsembleResult res;
    res.runs = runs;
    res.times.resize(grid_points);
    for (std::size_t k = 0; k < grid_points; ++k)
        res.times[k] = t0 + static_cast<double>(k) * sample_dt;

    // per-run samples; NaN marks grid times at or past the run's extinction
    std::vector<std::vector<double>> samples(
        runs, std::vector<double>(grid_points, std::numeric_limits<double>::quiet_NaN()));

    parallel_for(runs, workers, [&](int run) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(run)));
        auto& row = samples[run];
        int n_inf = MarkovState{x0.infected}.count_infected();
        std::size_t next_grid = 0;
        auto emit_until = [&](double t_exclusive) {
            while (next_grid < grid_points && res.times[next_grid] < t_exclusive) {
                row[next_grid] = static_cast<double>(n_inf) / n;
                ++next_grid;
            }
        };
        const double extinction =
            run_gillespie(tn, beta, delta, x0, t_end, rng, {},
                          [&](double t, int, bool infection) {
                              emit_until(t);
                              n_inf += infection ? 1 : -1;
                          });
        if (std::isinf(extinction)) {
            emit_until(std::numeric_limits<double>::infinity());
        } else {
            // samples strictly before extinction count toward the mean
            emit_until(extinction);
        }
    });

    res.mean_y.assign(grid_points, std::numeric_limits<double>::quiet_NaN());
    res.stderr_y.assign(grid_points, std::numeric_limits<double>::quiet_NaN());
    res.survivors.assign(grid_points, 0);
    for (std::size_t k = 0; k < grid_points; ++k) {
        int count = 0;
        double sum = 0.0;
        for (int run = 0; run < runs; ++run) {
            const double y = samples[run][k];
            if (!std::isnan(y)) {
                ++count;
                sum += y;
            }
        }
        res.survivors[k] = count;
        if (count == 0) continue;
        const double mean = sum / count;
        res.mean_y[k] = mean;
        if (count >= 2) {
            double ss = 0.0;
            for (int run = 0; run < runs; ++run) {
                const double y = samples[run][k];
                if (!std::isnan(y)) ss += (y - mean) * (y - mean);
            }
            res.stderr_y[k] = std::sqrt(ss / (count - 1) / count);
        }
    }
    return res;
}

} // namespace netsis
