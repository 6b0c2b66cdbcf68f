#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "netsis/graph.hpp"

namespace netsis {

/// Raised when an iteration fails to converge or the integrator detects a
/// non-finite or out-of-box state. Carries the last observed residual.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

struct EpidemicParams {
    double beta = 0.0;   ///< infection rate per link
    double delta = 1.0;  ///< curing rate
    double tau() const { return beta / delta; }
};

struct RescaledParams {
    EpidemicParams params;  ///< delta == 1, beta == tau
    double time_scale;      ///< original delta; rescaled time = delta * t
};

/// Rescale to curing rate 1; downstream times are then in units of 1/delta.
RescaledParams rescale(const EpidemicParams& p);

using StateVector = std::vector<double>;

StateVector uniform_state(int n, double value);

/// Mean of the infection probabilities.
double prevalence(const StateVector& v);

/// dv_i/dt = -delta v_i + beta (1 - v_i) sum_j a_ij v_j
StateVector nimfa_derivative(const Graph& g, const EpidemicParams& p, const StateVector& v);

struct Trajectory {
    std::vector<double> times;
    std::vector<StateVector> states;
    std::vector<double> prevalence;
    double max_clamp = 0.0;  ///< largest [0,1]-box violation the integrator clamped

    std::size_t size() const { return times.size(); }
};

/// Fixed-step classic Runge-Kutta stepper for the NIMFA equations. The state
/// is clamped to [0,1] after every step; clamp magnitudes above clamp_abort
/// abort the run (an excursion that large means the step size is wrong for
/// the problem, not a rounding artifact).
class NimfaIntegrator {
public:
    static constexpr double kClampAbort = 1e-9;

    NimfaIntegrator(const Graph& g, const EpidemicParams& p, StateVector v0,
                    double h, double t0 = 0.0);

    void set_graph(const Graph& g);
    void step();

    const StateVector& state() const { return v_; }
    const StateVector& previous_state() const { return prev_; }
    double time() const { return t0_ + static_cast<double>(k_) * h_; }
    std::int64_t step_index() const { return k_; }
    double step_size() const { return h_; }
    double prevalence_now() const;
    double max_clamp() const { return max_clamp_; }

    /// max_i |v_i(t) - v_i(t-h)| over the most recent step
    double last_step_max_delta() const;

private:
    void derivative(const StateVector& v, StateVector& out) const;

    const Graph* g_;
    double beta_, delta_, h_, t0_;
    std::int64_t k_ = 0;
    StateVector v_, prev_, k1_, k2_, k3_, k4_, tmp_;
    double max_clamp_ = 0.0;
};

/// Integrate over [0, t_end], sampling every step (t_end rounded to the grid).
Trajectory integrate(const Graph& g, const EpidemicParams& p, const StateVector& v0,
                     double t_end, double h);

/// Final state only; stops early once the per-step sup-norm change drops
/// below quiescence_eps (the trajectory is pinned at a fixed point and
/// cannot move again by more than the accumulated rounding).
StateVector integrate_final(const Graph& g, const EpidemicParams& p, const StateVector& v0,
                            double t_end, double h, double quiescence_eps = 0.0);

enum class SteadyStateMode { fixed_point, long_integration };

/// Steady state of the rescaled (delta = 1) NIMFA system at effective
/// infection rate tau. Returns the exact zero vector for R0 <= 1.
/// fixed_point iterates v_i <- tau s_i / (1 + tau s_i) from the all-one
/// vector; long_integration integrates from the all-one vector to t = 1e4.
StateVector steady_state(const Graph& g, double tau,
                         SteadyStateMode mode = SteadyStateMode::fixed_point,
                         double tol = 1e-12);

struct OrderingWitness {
    bool ordered = true;
    double t = 0.0;      ///< first violating sample time (if any)
    int node = -1;       ///< first violating node (if any)
    double gap = 0.0;    ///< v_low - v_high at the violation
};

/// Integrates both initial states and checks v_low(t) <= v_high(t) + tol
/// entrywise at every sample. Requires v0_low <= v0_high entrywise.
OrderingWitness monotone_coupling_check(const Graph& g, const EpidemicParams& p,
                                        const StateVector& v0_low, const StateVector& v0_high,
                                        double t_end, double h, double tol = 1e-9);

} // namespace netsis
