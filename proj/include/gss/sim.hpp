// Numerical integration of the physical and dimensionless models, fault
// scenario execution, and ground-truth convergence classification.
//
// The integrator is an adaptive Dormand-Prince 5(4) embedded pair with
// the standard 4th-order dense-output interpolant; output samples come
// from the interpolant, so the step sequence is independent of the
// requested sampling density.
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gss/lyapunov.hpp"
#include "gss/model.hpp"

namespace gss {

enum class Frame { Physical, Dimensionless };

struct TrajectorySample {
    double t = 0.0;
    double delta = 0.0;
    double x = 0.0;  // dimensionless x or physical x_int, per frame
};

struct TrajectoryEvent {
    double t = 0.0;
    std::string label;
};

enum class IntegrationStatus { Completed, StoppedByPredicate, Diverged };

struct Trajectory {
    Frame frame = Frame::Dimensionless;
    std::vector<TrajectorySample> samples;  // strictly increasing t
    std::vector<TrajectoryEvent> events;
    IntegrationStatus status = IntegrationStatus::Completed;

    const TrajectorySample& back() const { return samples.back(); }
    double duration() const { return samples.back().t - samples.front().t; }
};

using Vec2 = std::array<double, 2>;
using Field2 = std::function<Vec2(double, const Vec2&)>;
// Early-stop hook, checked at every accepted step.
using StopPredicate = std::function<bool(double, const Vec2&)>;

struct IntegrateOptions {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    double sample_dt = 0.0;   // > 0: dense output spacing; 0: natural steps
    double initial_step = 0.0;  // 0: automatic
    double max_step = 0.0;      // 0: span-limited only
    std::uint64_t max_steps = 20'000'000;
    StopPredicate stop;
};

// Integrates the field over [t0, t1]. Returns the trajectory including
// both endpoints. A non-finite state ends integration with status
// Diverged and the last finite sample retained; a stop predicate match
// ends it with StoppedByPredicate. Step-size underflow and step-budget
// exhaustion throw NumericalError.
Trajectory integrate(const Field2& field, Frame frame, const Vec2& y0, double t0,
                     double t1, const IntegrateOptions& options = {});

// Convenience wrappers binding the two models.
Trajectory integrate_dimless(const DimlessParams& dp, const State& s0, double tau0,
                             double tau1, const IntegrateOptions& options = {});
Trajectory integrate_physical(const PhysicalParams& p, const PhysState& s0, double t0,
                              double t1, const IntegrateOptions& options = {});

struct FaultScenario {
    double pre_u_g_pu = 1.0;
    double fault_u_g_pu = 0.2;
    double fct = 0.0;        // fault clearing time, seconds
    double post_u_g_pu = 1.0;
    double t_end = 2.0;      // post-fault observation horizon, seconds

    void validate() const;  // throws ScenarioError
};

enum class Convergence { Stable, Unstable, Inconclusive };

const char* to_string(Convergence c);

// Ground-truth labeling of a dimensionless trajectory against a target SEP.
//   Stable:   final state within tol of the target (no 2*pi wrap: landing
//             on delta_sep + 2*pi*k, k != 0, is Unstable for this target)
//   Unstable: |delta - delta_sep| exceeded 4*pi at any sample, the state
//             diverged, or it converged to a wrapped replica of the SEP
//   Inconclusive: anything else (caller extends the horizon)
Convergence classify_converged(const Trajectory& traj, const State& target_sep,
                               double tol = 1e-4);

struct ScenarioResult {
    Trajectory trajectory;         // physical frame, fault-on at t = 0
    PhysState clearing_state;      // state at t = fct
    State clearing_state_dimless;  // converted with post-fault scaling
    double v_at_clearing = 0.0;
    Verdict verdict_lf;
    Verdict verdict_eac;
    Convergence verdict_sim = Convergence::Inconclusive;
    double t_end_used = 0.0;       // horizon after any extension
};

struct ScenarioOptions {
    IntegrateOptions integ;       // sample_dt defaults to 0.1 ms if unset
    int max_horizon_doublings = 6;
    bool stop_when_settled = true;  // end the post-fault run once converged
};

// Runs a grid-voltage-dip scenario: starts at the exact pre-fault SEP,
// integrates the physical model with u_g switched at t = 0 and t = fct,
// evaluates V at the clearing instant in post-fault dimensionless
// coordinates, and classifies ground truth by continued simulation
// (doubling the horizon while the outcome is inconclusive).
// Throws ScenarioError when the pre-fault SEP does not exist.
ScenarioResult run_fault_scenario(const PhysicalParams& p, const FaultScenario& fs,
                                  const ScenarioOptions& options = {});

// Converts a physical trajectory to dimensionless coordinates:
// tau = time_scale(p) * (t - t_origin), x = x_int / sqrt(k_in * u_g).
Trajectory to_dimless_trajectory(const PhysicalParams& p, const Trajectory& phys,
                                 double t_origin);

}  // namespace gss
