#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "netsis/rng.hpp"
#include "netsis/temporal.hpp"

namespace netsis {

/// Bernoulli infection state of every node.
struct MarkovState {
    std::vector<std::uint8_t> infected;

    static MarkovState all_infected(int n) { return {std::vector<std::uint8_t>(n, 1)}; }
    static MarkovState all_healthy(int n) { return {std::vector<std::uint8_t>(n, 0)}; }

    int count_infected() const {
        int c = 0;
        for (auto b : infected) c += b;
        return c;
    }
};

struct SisEvent {
    double time;
    int node;
    bool infection;  ///< true: node became infected, false: node cured
};

struct EventPath {
    std::vector<SisEvent> events;
    double extinction_time = std::numeric_limits<double>::infinity();
    double t_end = 0.0;
};

struct GillespieOptions {
    /// Recount the S-I link bookkeeping from scratch every N events and
    /// assert it matches the incrementally maintained count.
    bool recount_check = false;
    long recount_every = 10000;
};

/// Exact event-driven simulation of the Markovian SIS process on a graph
/// sequence. Total event rate is delta * (#infected) + beta * (#S-I links of
/// the active graph); waiting times are exponential; at an update time the
/// graph is swapped with the clock preserved (memorylessness makes the
/// redraw exact). The all-healthy state is absorbing.
EventPath gillespie_sis(const TemporalNetwork& tn, double beta, double delta,
                        const MarkovState& x0, double t_end, RngSeed seed,
                        const GillespieOptions& opts = {});

struct EnsembleResult {
    std::vector<double> times;
    std::vector<double> mean_y;    ///< conditional mean; NaN where no run survives
    std::vector<double> stderr_y;  ///< sample standard error; NaN where survivors < 2
    std::vector<int> survivors;    ///< runs alive (t < extinction time) at each grid time
    int runs = 0;
};

/// Independent runs with per-run seeds derived from the master seed by run
/// index, sampled on the uniform grid k * sample_dt. A run contributes to
/// the conditional mean only at grid times strictly before its extinction.
/// The reduction is done in run order, so the result does not depend on the
/// worker count.
EnsembleResult ensemble_prevalence(const TemporalNetwork& tn, double beta, double delta,
                                   const MarkovState& x0, double t_end, int runs,
                                   double sample_dt, RngSeed seed, int workers = 1);

} // namespace netsis
