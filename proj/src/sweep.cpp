#include "netsis/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace netsis {

GraphType graph_type_from_string(const std::string& s) {
    if (s == "er") return GraphType::er;
    if (s == "ba") return GraphType::ba;
    if (s == "ws") return GraphType::ws;
    throw std::invalid_argument("unknown graph type: " + s);
}

std::string to_string(GraphType t) {
    switch (t) {
        case GraphType::er: return "er";
        case GraphType::ba: return "ba";
        case GraphType::ws: return "ws";
    }
    return "?";
}

Graph random_sweep_graph(GraphType type, int n, RngSeed seed) {
    Rng rng(seed);
    switch (type) {
        case GraphType::er:
            return erdos_renyi(n, rng.uniform(), rng.next_u64());
        case GraphType::ba: {
            const int m0 = 1 + static_cast<int>(rng.uniform_index(n));
            const int m = 1 + static_cast<int>(rng.uniform_index(m0));
            return barabasi_albert(n, m0, m, rng.next_u64());
        }
        case GraphType::ws: {
            const int k_max = (n - 1) / 2;
            const int k = 1 + static_cast<int>(rng.uniform_index(k_max));
            return watts_strogatz(n, k, rng.uniform(), rng.next_u64());
        }
    }
    throw std::logic_error("unreachable");
}

BoundOrderingCheck check_bound_ordering(const TransitionReport& rep, double h) {
    BoundOrderingCheck chk;
    const double slack = h + 1e-9;
    chk.lower_decay_ok = rep.bounds.l_d <= rep.t_bar_decay + slack;
    if (rep.r0 > 1.0 && !std::isnan(rep.bounds.l_g))
        chk.lower_growth_ok = rep.bounds.l_g <= rep.t_bar_growth + slack;
    chk.upper_ok = rep.t_bar() <= rep.bounds.t_hat + slack;
    return chk;
}

MixedStartCheck spot_check_mixed_starts(const Graph& g, double tau, double r,
                                        double t_bar_reported, int samples, RngSeed seed,
                                        const TBarOptions& opts) {
    MixedStartCheck check;
    check.samples = samples;
    const StateVector v_inf = steady_state(g, tau);
    const double y_inf = prevalence(v_inf);
    const auto max_steps = static_cast<std::int64_t>(std::llround(opts.t_max / opts.h));

    for (int s = 0; s < samples; ++s) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(s)));
        StateVector v0(g.node_count());
        for (double& e : v0) e = r + (1.0 - r) * rng.uniform();

        NimfaIntegrator it(g, EpidemicParams{tau, 1.0}, std::move(v0), opts.h);
        double t_enter = std::abs(it.prevalence_now() - y_inf) <= r
                             ? 0.0
                             : std::numeric_limits<double>::quiet_NaN();
        double measured = std::numeric_limits<double>::quiet_NaN();
        for (std::int64_t k = 0;; ++k) {
            if (!std::isnan(t_enter)) {
                double dist = 0.0;
                for (std::size_t i = 0; i < v_inf.size(); ++i)
                    dist = std::max(dist, std::abs(it.state()[i] - v_inf[i]));
                if (dist <= opts.converge_eps) {
                    measured = t_enter;
                    break;
                }
            }
            if (k == max_steps) {
                measured = t_enter; // NaN when still outside the band
                break;
            }
            it.step();
            const double gap = std::abs(it.prevalence_now() - y_inf);
            if (gap <= r) {
                if (std::isnan(t_enter)) t_enter = it.time();
            } else {
                t_enter = std::numeric_limits<double>::quiet_NaN();
            }
        }
        if (std::isnan(measured)) {
            ++check.exceedances;
            check.worst_excess = std::max(check.worst_excess, opts.t_max - t_bar_reported);
        } else if (measured > t_bar_reported + opts.h + 1e-9) {
            ++check.exceedances;
            check.worst_excess = std::max(check.worst_excess, measured - t_bar_reported);
        }
    }
    return check;
}

std::vector<R0Bin> bin_by_r0(std::span<const TransitionReport> reports, double bin_width) {
    if (bin_width <= 0.0) throw std::invalid_argument("bin_by_r0: bin width must be positive");
    double r0_max = 0.0;
    for (const auto& rep : reports) r0_max = std::max(r0_max, rep.r0);
    const int n_bins = static_cast<int>(std::floor(r0_max / bin_width)) + 1;

    std::vector<R0Bin> bins(n_bins);
    std::vector<double> lo(n_bins, std::numeric_limits<double>::infinity());
    std::vector<double> hi(n_bins, -std::numeric_limits<double>::infinity());
    std::vector<double> sum(n_bins, 0.0);
    for (int b = 0; b < n_bins; ++b) {
        bins[b].r0_lo = b * bin_width;
        bins[b].r0_hi = (b + 1) * bin_width;
    }
    for (const auto& rep : reports) {
        const int b = std::min(n_bins - 1, static_cast<int>(rep.r0 / bin_width));
        ++bins[b].count;
        sum[b] += rep.t_bar_decay;
        lo[b] = std::min(lo[b], rep.t_bar_decay);
        hi[b] = std::max(hi[b], rep.t_bar_decay);
    }
    for (int b = 0; b < n_bins; ++b) {
        if (bins[b].count == 0) continue;
        bins[b].mean_t_bar = sum[b] / bins[b].count;
        bins[b].range_t_bar = hi[b] - lo[b];
        bins[b].flagged =
            bins[b].count >= 2 && bins[b].range_t_bar > 0.2 * bins[b].mean_t_bar;
    }
    return bins;
}

} // namespace netsis
