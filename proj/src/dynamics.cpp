#include "netsis/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace netsis {

RescaledParams rescale(const EpidemicParams& p) {
    if (p.delta <= 0.0) throw std::invalid_argument("rescale: delta must be positive");
    return {{p.beta / p.delta, 1.0}, p.delta};
}

StateVector uniform_state(int n, double value) {
    return StateVector(static_cast<std::size_t>(n), value);
}

double prevalence(const StateVector& v) {
    double s = 0.0;
    for (double e : v) s += e;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

StateVector nimfa_derivative(const Graph& g, const EpidemicParams& p, const StateVector& v) {
    if (static_cast<int>(v.size()) != g.node_count())
        throw std::invalid_argument("nimfa_derivative: state/graph dimension mismatch");
    StateVector out(v.size());
    for (int i = 0; i < g.node_count(); ++i) {
        double s = 0.0;
        for (int j : g.neighbors(i)) s += v[j];
        out[i] = -p.delta * v[i] + p.beta * (1.0 - v[i]) * s;
    }
    return out;
}

NimfaIntegrator::NimfaIntegrator(const Graph& g, const EpidemicParams& p, StateVector v0,
                                 double h, double t0)
    : g_(&g), beta_(p.beta), delta_(p.delta), h_(h), t0_(t0), v_(std::move(v0)) {
    if (h <= 0.0) throw std::invalid_argument("integrator: step size must be positive");
    if (static_cast<int>(v_.size()) != g.node_count())
        throw std::invalid_argument("integrator: state/graph dimension mismatch");
    for (double e : v_)
        if (!(e >= 0.0 && e <= 1.0))
            throw std::invalid_argument("integrator: initial state outside [0,1]");
    prev_ = v_;
    k1_.resize(v_.size());
    k2_.resize(v_.size());
    k3_.resize(v_.size());
    k4_.resize(v_.size());
    tmp_.resize(v_.size());
}

void NimfaIntegrator::set_graph(const Graph& g) {
    if (g.node_count() != static_cast<int>(v_.size()))
        throw std::invalid_argument("integrator: graph node count changed");
    g_ = &g;
}

void NimfaIntegrator::derivative(const StateVector& v, StateVector& out) const {
    const Graph& g = *g_;
    const int n = g.node_count();
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j : g.neighbors(i)) s += v[j];
        out[i] = -delta_ * v[i] + beta_ * (1.0 - v[i]) * s;
    }
}

void NimfaIntegrator::step() {
    const std::size_t n = v_.size();
    prev_ = v_;

    derivative(v_, k1_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = v_[i] + 0.5 * h_ * k1_[i];
    derivative(tmp_, k2_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = v_[i] + 0.5 * h_ * k2_[i];
    derivative(tmp_, k3_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = v_[i] + h_ * k3_[i];
    derivative(tmp_, k4_);

    double clamp = 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double x = v_[i] + h_ / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
        if (x < 0.0) {
            clamp = std::max(clamp, -x);
            x = 0.0;
        } else if (x > 1.0) {
            clamp = std::max(clamp, x - 1.0);
            x = 1.0;
        }
        v_[i] = x;
        sum += x;
    }
    ++k_;
    if (!std::isfinite(sum))
        throw NumericalError("integrator: non-finite state at t = " + std::to_string(time()), sum);
    if (clamp > kClampAbort)
        throw NumericalError("integrator: state left [0,1] by " + std::to_string(clamp) +
                                 " at t = " + std::to_string(time()),
                             clamp);
    max_clamp_ = std::max(max_clamp_, clamp);
}

double NimfaIntegrator::prevalence_now() const {
    return prevalence(v_);
}

double NimfaIntegrator::last_step_max_delta() const {
    double m = 0.0;
    for (std::size_t i = 0; i < v_.size(); ++i) m = std::max(m, std::abs(v_[i] - prev_[i]));
    return m;
}

Trajectory integrate(const Graph& g, const EpidemicParams& p, const StateVector& v0,
                     double t_end, double h) {
    if (t_end < 0.0) throw std::invalid_argument("integrate: t_end must be >= 0");
    const auto steps = static_cast<std::int64_t>(std::llround(t_end / h));
    NimfaIntegrator it(g, p, v0, h);
    Trajectory traj;
    traj.times.reserve(steps + 1);
    traj.states.reserve(steps + 1);
    traj.prevalence.reserve(steps + 1);
    traj.times.push_back(0.0);
    traj.states.push_back(it.state());
    traj.prevalence.push_back(it.prevalence_now());
    for (std::int64_t k = 0; k < steps; ++k) {
        it.step();
        traj.times.push_back(it.time());
        traj.states.push_back(it.state());
        traj.prevalence.push_back(it.prevalence_now());
    }
    traj.max_clamp = it.max_clamp();
    return traj;
}

StateVector integrate_final(const Graph& g, const EpidemicParams& p, const StateVector& v0,
                            double t_end, double h, double quiescence_eps) {
    const auto steps = static_cast<std::int64_t>(std::llround(t_end / h));
    NimfaIntegrator it(g, p, v0, h);
    for (std::int64_t k = 0; k < steps; ++k) {
        it.step();
        if (quiescence_eps > 0.0 && it.last_step_max_delta() <= quiescence_eps) break;
    }
    return it.state();
}

namespace {

// v <- tau s / (1 + tau s) applied until both the iterate change and the
// NIMFA residual are below tolerance. The residual comes for free via
// f_i(v) = (1 + tau s_i)(phi_i(v) - v_i).
StateVector fixed_point_steady_state(const Graph& g, double tau, double tol) {
    const int n = g.node_count();
    const long max_iter = 4000000;
    StateVector v(n, 1.0), next(n);
    double residual = 0.0;
    for (long iter = 0; iter < max_iter; ++iter) {
        double max_delta = 0.0;
        residual = 0.0;
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j : g.neighbors(i)) s += v[j];
            const double ts = tau * s;
            const double phi = ts / (1.0 + ts);
            max_delta = std::max(max_delta, std::abs(phi - v[i]));
            residual = std::max(residual, std::abs((1.0 + ts) * (phi - v[i])));
            next[i] = phi;
        }
        v.swap(next);
        if (max_delta < tol && residual < 5.0 * tol) return v;
    }
    throw NumericalError("steady_state: fixed point did not converge", residual);
}

} // namespace

StateVector steady_state(const Graph& g, double tau, SteadyStateMode mode, double tol) {
    if (tau < 0.0) throw std::invalid_argument("steady_state: tau must be >= 0");
    // Below (or numerically at) the threshold the only steady state is the
    // all-healthy vector; return it exactly rather than iterating toward it.
    const double r0 = basic_reproduction_number(g, tau);
    if (r0 <= 1.0 + 1e-9) return StateVector(g.node_count(), 0.0);

    if (mode == SteadyStateMode::fixed_point) return fixed_point_steady_state(g, tau, tol);
    return integrate_final(g, EpidemicParams{tau, 1.0}, uniform_state(g.node_count(), 1.0),
                           1e4, 0.01, 1e-14);
}

OrderingWitness monotone_coupling_check(const Graph& g, const EpidemicParams& p,
                                        const StateVector& v0_low, const StateVector& v0_high,
                                        double t_end, double h, double tol) {
    if (v0_low.size() != v0_high.size())
        throw std::invalid_argument("monotone_coupling_check: state sizes differ");
    for (std::size_t i = 0; i < v0_low.size(); ++i)
        if (v0_low[i] > v0_high[i])
            throw std::invalid_argument("monotone_coupling_check: v0_low must be <= v0_high");

    NimfaIntegrator lo(g, p, v0_low, h), hi(g, p, v0_high, h);
    const auto steps = static_cast<std::int64_t>(std::llround(t_end / h));
    OrderingWitness w;
    auto check = [&]() {
        for (std::size_t i = 0; i < v0_low.size(); ++i) {
            const double gap = lo.state()[i] - hi.state()[i];
            if (gap > tol) {
                w.ordered = false;
                w.t = lo.time();
                w.node = static_cast<int>(i);
                w.gap = gap;
                return false;
            }
        }
        return true;
    };
    if (!check()) return w;
    for (std::int64_t k = 0; k < steps; ++k) {
        lo.step();
        hi.step();
        if (!check()) return w;
    }
    return w;
}

} // namespace netsis
