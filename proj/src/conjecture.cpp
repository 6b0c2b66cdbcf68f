#include "netsis/conjecture.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

namespace netsis {

DecayCheckResult check_decay_envelope(const Graph& g, double tau, double h, double t_end,
                                      const std::string& graph_id) {
    DecayCheckResult res;
    res.graph_id = graph_id;
    res.tau = tau;

    const double y_inf = prevalence(steady_state(g, tau));
    NimfaIntegrator it(g, EpidemicParams{tau, 1.0}, uniform_state(g.node_count(), 1.0), h);
    const auto steps = static_cast<std::int64_t>(std::llround(t_end / h));

    // The decay from u is entrywise non-increasing, so once the gap fits
    // under the envelope's final value it can never poke out again within
    // [0, t_end]; the scan may stop there.
    const double floor_gap = 1.0 / (1.0 + t_end);

    res.max_residual = -std::numeric_limits<double>::infinity();
    for (std::int64_t k = 0;; ++k) {
        const double t = it.time();
        const double gap = std::abs(it.prevalence_now() - y_inf);
        const double residual = gap - 1.0 / (1.0 + t);
        if (residual > res.max_residual) {
            res.max_residual = residual;
            res.argmax_time = t;
        }
        if (gap <= floor_gap || k == steps) break;
        it.step();
    }
    res.pass = res.max_residual <= kConjectureSlack;
    return res;
}

ProjectionCheckResult check_projection_inequalities(const Graph& g, double tau, double h,
                                                    double t_end, const std::string& graph_id) {
    if (!is_connected(g))
        throw std::invalid_argument("projection check requires a connected graph");

    ProjectionCheckResult res;
    res.graph_id = graph_id;
    res.tau = tau;
    res.regular = g.is_regular();

    const int n = g.node_count();
    const double dn = static_cast<double>(n);
    const std::vector<double>& x1 = g.spectral().x1;

    NimfaIntegrator it(g, EpidemicParams{tau, 1.0}, uniform_state(n, 1.0), h);

    auto project = [&](const StateVector& v, double& c, double& xi_norm) {
        c = 0.0;
        for (int i = 0; i < n; ++i) c += x1[i] * v[i];
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            const double e = v[i] - c * x1[i];
            s += e * e;
        }
        xi_norm = std::sqrt(s);
    };

    project(it.state(), res.c0, res.xi0_norm);

    const auto steps = static_cast<std::int64_t>(std::llround(t_end / h));
    // Early-stop level: when every entry of the (non-increasing) state is
    // below this, all four residuals are certainly negative from here to
    // t_end, because c <= sqrt(N)||V||_inf and ||xi|| <= 2 sqrt(N)||V||_inf.
    const double tail = 1.0 / (1.0 + t_end);
    double stop_level = tail / (4.0 * std::sqrt(dn)) *
                        std::min({1.0, res.c0, res.xi0_norm > 0.0 ? res.xi0_norm : 1.0});

    const double sqrt_n = std::sqrt(dn);
    for (std::int64_t k = 0;; ++k) {
        const double t = it.time();
        const double envelope = 1.0 / (1.0 + t);
        double c, xi_norm;
        project(it.state(), c, xi_norm);

        res.max_c_residual = std::max(res.max_c_residual, (c - res.c0 * envelope) / sqrt_n);
        res.max_xi_residual =
            std::max(res.max_xi_residual, (xi_norm - res.xi0_norm * envelope) / sqrt_n);
        const double middle = res.c0 * c + res.xi0_norm * xi_norm;
        res.max_mean_residual =
            std::max(res.max_mean_residual, it.prevalence_now() - middle / dn);
        res.max_chain_residual = std::max(res.max_chain_residual, middle / dn - envelope);
        res.max_xi_norm = std::max(res.max_xi_norm, xi_norm);

        if (k == steps) break;
        double sup = 0.0;
        for (double v : it.state()) sup = std::max(sup, v);
        if (sup <= stop_level) break;
        it.step();
    }

    res.pass = res.max_c_residual <= kConjectureSlack &&
               res.max_xi_residual <= kConjectureSlack &&
               res.max_mean_residual <= kConjectureSlack &&
               res.max_chain_residual <= kConjectureSlack &&
               (!res.regular || res.max_xi_norm <= 1e-10);
    return res;
}

void write_counterexample_bundle(const std::string& dir, const Graph& g,
                                 const std::string& params_json,
                                 const std::vector<std::string>& residual_csv_lines) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    write_edge_list_file(g, (fs::path(dir) / "graph.edges").string());
    {
        std::ofstream out(fs::path(dir) / "params.json");
        out << params_json << "\n";
    }
    {
        std::ofstream out(fs::path(dir) / "residuals.csv");
        for (const auto& line : residual_csv_lines) out << line << "\n";
    }
}

} // namespace netsis
