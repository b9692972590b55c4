#include "gss/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gss {

namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double kC2 = 1.0 / 5.0, kC3 = 3.0 / 10.0, kC4 = 4.0 / 5.0, kC5 = 8.0 / 9.0;
constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0,
                 kA53 = 64448.0 / 6561.0, kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0,
                 kA63 = 46732.0 / 5247.0, kA64 = 49.0 / 176.0,
                 kA65 = -5103.0 / 18656.0;
constexpr double kA71 = 35.0 / 384.0, kA73 = 500.0 / 1113.0, kA74 = 125.0 / 192.0,
                 kA75 = -2187.0 / 6784.0, kA76 = 11.0 / 84.0;
// 5th-order minus 4th-order weights (error estimate).
constexpr double kE1 = 71.0 / 57600.0, kE3 = -71.0 / 16695.0, kE4 = 71.0 / 1920.0,
                 kE5 = -17253.0 / 339200.0, kE6 = 22.0 / 525.0, kE7 = -1.0 / 40.0;
// Dense-output coefficients.
constexpr double kD1 = -12715105075.0 / 11282082432.0;
constexpr double kD3 = 87487479700.0 / 32700410799.0;
constexpr double kD4 = -10690763975.0 / 1880347072.0;
constexpr double kD5 = 701980252875.0 / 199316789632.0;
constexpr double kD6 = -1453857185.0 / 822651844.0;
constexpr double kD7 = 69997945.0 / 29380423.0;

constexpr double kEps = std::numeric_limits<double>::epsilon();

bool finite(const Vec2& y) { return std::isfinite(y[0]) && std::isfinite(y[1]); }

struct DenseCoeffs {
    Vec2 r1, r2, r3, r4, r5;

    Vec2 eval(double theta) const {
        const double theta1 = 1.0 - theta;
        Vec2 y;
        for (int i = 0; i < 2; ++i) {
            y[i] = r1[i] +
                   theta * (r2[i] + theta1 * (r3[i] + theta * (r4[i] + theta1 * r5[i])));
        }
        return y;
    }
};

double error_norm(const Vec2& err, const Vec2& y0, const Vec2& y1, double rtol,
                  double atol) {
    double sum = 0.0;
    for (int i = 0; i < 2; ++i) {
        const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        const double e = err[i] / sc;
        sum += e * e;
    }
    return std::sqrt(0.5 * sum);
}

double rms_scaled(const Vec2& v, const Vec2& sc) {
    const double a = v[0] / sc[0];
    const double b = v[1] / sc[1];
    return std::sqrt(0.5 * (a * a + b * b));
}

// Hairer-style automatic initial step selection.
double initial_step_guess(const Field2& field, double t0, const Vec2& y0,
                          const Vec2& f0, double span, double rtol, double atol) {
    const Vec2 sc{atol + rtol * std::abs(y0[0]), atol + rtol * std::abs(y0[1])};
    const double d0 = rms_scaled(y0, sc);
    const double d1 = rms_scaled(f0, sc);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * (d0 / d1);
    h0 = std::min(h0, span);

    const Vec2 y1{y0[0] + h0 * f0[0], y0[1] + h0 * f0[1]};
    const Vec2 f1 = field(t0 + h0, y1);
    if (!finite(f1)) return std::min(span, 1e-6);
    const Vec2 df{f1[0] - f0[0], f1[1] - f0[1]};
    const double d2 = rms_scaled(df, sc) / h0;

    const double dmax = std::max(d1, d2);
    const double h1 =
        dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
    return std::min({100.0 * h0, h1, span});
}

}  // namespace

Trajectory integrate(const Field2& field, Frame frame, const Vec2& y0, double t0,
                     double t1, const IntegrateOptions& options) {
    if (!(t1 >= t0)) {
        throw NumericalError("integrate: t1 must be >= t0");
    }
    if (!finite(y0)) {
        throw NumericalError("integrate: initial state is not finite");
    }

    Trajectory traj;
    traj.frame = frame;
    traj.samples.push_back({t0, y0[0], y0[1]});
    if (t1 == t0) return traj;

    const double span = t1 - t0;
    const double h_min = 64.0 * kEps * std::max({std::abs(t0), std::abs(t1), 1.0});

    Vec2 y = y0;
    double t = t0;
    Vec2 k1 = field(t, y);
    if (!finite(k1)) {
        traj.status = IntegrationStatus::Diverged;
        return traj;
    }

    double h = options.initial_step > 0.0
                   ? std::min(options.initial_step, span)
                   : initial_step_guess(field, t0, y, k1, span, options.rel_tol,
                                        options.abs_tol);
    if (options.max_step > 0.0) h = std::min(h, options.max_step);

    std::uint64_t samples_emitted = 0;  // dense samples after the initial one
    bool rejected_last = false;

    for (std::uint64_t step = 0; step < options.max_steps; ++step) {
        if (t >= t1) break;
        h = std::min(h, t1 - t);
        if (h < h_min) {
            throw NumericalError("integrate: step size underflow at t = " +
                                 std::to_string(t) + " (stiffness)");
        }

        Vec2 k2, k3, k4, k5, k6, k7, y1;
        {
            Vec2 w;
            w = {y[0] + h * kA21 * k1[0], y[1] + h * kA21 * k1[1]};
            k2 = field(t + kC2 * h, w);
            w = {y[0] + h * (kA31 * k1[0] + kA32 * k2[0]),
                 y[1] + h * (kA31 * k1[1] + kA32 * k2[1])};
            k3 = field(t + kC3 * h, w);
            w = {y[0] + h * (kA41 * k1[0] + kA42 * k2[0] + kA43 * k3[0]),
                 y[1] + h * (kA41 * k1[1] + kA42 * k2[1] + kA43 * k3[1])};
            k4 = field(t + kC4 * h, w);
            w = {y[0] + h * (kA51 * k1[0] + kA52 * k2[0] + kA53 * k3[0] + kA54 * k4[0]),
                 y[1] + h * (kA51 * k1[1] + kA52 * k2[1] + kA53 * k3[1] + kA54 * k4[1])};
            k5 = field(t + kC5 * h, w);
            w = {y[0] + h * (kA61 * k1[0] + kA62 * k2[0] + kA63 * k3[0] + kA64 * k4[0] +
                             kA65 * k5[0]),
                 y[1] + h * (kA61 * k1[1] + kA62 * k2[1] + kA63 * k3[1] + kA64 * k4[1] +
                             kA65 * k5[1])};
            k6 = field(t + h, w);
            y1 = {y[0] + h * (kA71 * k1[0] + kA73 * k3[0] + kA74 * k4[0] +
                              kA75 * k5[0] + kA76 * k6[0]),
                  y[1] + h * (kA71 * k1[1] + kA73 * k3[1] + kA74 * k4[1] +
                              kA75 * k5[1] + kA76 * k6[1])};
            k7 = field(t + h, y1);
        }

        bool bad = !finite(y1) || !finite(k7);
        double err = 0.0;
        if (!bad) {
            const Vec2 errv{
                h * (kE1 * k1[0] + kE3 * k3[0] + kE4 * k4[0] + kE5 * k5[0] +
                     kE6 * k6[0] + kE7 * k7[0]),
                h * (kE1 * k1[1] + kE3 * k3[1] + kE4 * k4[1] + kE5 * k5[1] +
                     kE6 * k6[1] + kE7 * k7[1])};
            err = error_norm(errv, y, y1, options.rel_tol, options.abs_tol);
            bad = !std::isfinite(err);
        }

        if (bad) {
            // Non-finite evaluation: shrink hard; below the floor the state
            // is genuinely running away, report divergence.
            h *= 0.25;
            rejected_last = true;
            if (h < h_min) {
                traj.status = IntegrationStatus::Diverged;
                return traj;
            }
            continue;
        }

        if (err > 1.0) {
            const double fac = std::max(0.2, 0.9 * std::pow(err, -0.2));
            h *= fac;
            rejected_last = true;
            continue;
        }

        // Accepted.
        const double t_new = t + h;
        if (options.sample_dt > 0.0) {
            DenseCoeffs dense;
            for (int i = 0; i < 2; ++i) {
                const double ydiff = y1[i] - y[i];
                const double bspl = h * k1[i] - ydiff;
                dense.r1[i] = y[i];
                dense.r2[i] = ydiff;
                dense.r3[i] = bspl;
                dense.r4[i] = ydiff - h * k7[i] - bspl;
                dense.r5[i] = h * (kD1 * k1[i] + kD3 * k3[i] + kD4 * k4[i] +
                                   kD5 * k5[i] + kD6 * k6[i] + kD7 * k7[i]);
            }
            while (true) {
                const double ts =
                    t0 + static_cast<double>(samples_emitted + 1) * options.sample_dt;
                if (ts > t_new + 1e-12 * std::max(1.0, std::abs(t_new)) || ts > t1) break;
                const Vec2 ys = dense.eval((ts - t) / h);
                if (ts > traj.samples.back().t) {
                    traj.samples.push_back({ts, ys[0], ys[1]});
                }
                ++samples_emitted;
            }
        } else {
            traj.samples.push_back({t_new, y1[0], y1[1]});
        }

        t = t_new;
        y = y1;
        k1 = k7;  // FSAL

        if (options.stop && options.stop(t, y)) {
            if (traj.samples.back().t < t) {
                traj.samples.push_back({t, y[0], y[1]});
            }
            traj.status = IntegrationStatus::StoppedByPredicate;
            return traj;
        }

        const double facmax = rejected_last ? 1.0 : 6.0;
        rejected_last = false;
        const double fac =
            err < 1e-30 ? facmax
                        : std::clamp(0.9 * std::pow(err, -0.2), 0.2, facmax);
        h *= fac;
        if (options.max_step > 0.0) h = std::min(h, options.max_step);
    }

    if (t < t1) {
        throw NumericalError("integrate: step budget exhausted at t = " +
                             std::to_string(t));
    }
    if (traj.samples.back().t < t1) {
        traj.samples.push_back({t1, y[0], y[1]});
    }
    return traj;
}

Trajectory integrate_dimless(const DimlessParams& dp, const State& s0, double tau0,
                             double tau1, const IntegrateOptions& options) {
    const Field2 field = [dp](double, const Vec2& y) -> Vec2 {
        const State ds = vector_field_dimless(dp, State{y[0], y[1]});
        return {ds.delta, ds.x};
    };
    return integrate(field, Frame::Dimensionless, {s0.delta, s0.x}, tau0, tau1, options);
}

Trajectory integrate_physical(const PhysicalParams& p, const PhysState& s0, double t0,
                              double t1, const IntegrateOptions& options) {
    const Field2 field = [p](double, const Vec2& y) -> Vec2 {
        const PhysState ds = vector_field_physical(p, PhysState{y[0], y[1]});
        return {ds.delta, ds.x_int};
    };
    return integrate(field, Frame::Physical, {s0.delta, s0.x_int}, t0, t1, options);
}

void FaultScenario::validate() const {
    if (!(fct >= 0.0)) throw ScenarioError("fct must be >= 0");
    if (!(pre_u_g_pu >= 0.0) || !(fault_u_g_pu >= 0.0) || !(post_u_g_pu >= 0.0)) {
        throw ScenarioError("grid voltages must be >= 0");
    }
    if (!(t_end > fct)) throw ScenarioError("t_end must exceed fct");
}

const char* to_string(Convergence c) {
    switch (c) {
        case Convergence::Stable: return "Stable";
        case Convergence::Unstable: return "Unstable";
        case Convergence::Inconclusive: return "Inconclusive";
    }
    return "?";
}

Convergence classify_converged(const Trajectory& traj, const State& target_sep,
                               double tol) {
    if (traj.frame != Frame::Dimensionless) {
        throw NumericalError("classify_converged expects a dimensionless trajectory");
    }
    if (traj.status == IntegrationStatus::Diverged) return Convergence::Unstable;

    constexpr double kFarBound = 4.0 * M_PI;
    for (const auto& s : traj.samples) {
        if (std::abs(s.delta - target_sep.delta) > kFarBound) {
            return Convergence::Unstable;
        }
    }

    const TrajectorySample& last = traj.samples.back();
    const double dd = last.delta - target_sep.delta;
    const double dx = last.x - target_sep.x;
    if (std::hypot(dd, dx) <= tol) return Convergence::Stable;

    // Settled onto a 2*pi-shifted replica of the SEP: pole slip, unstable
    // with respect to the target.
    const double k = std::round(dd / (2.0 * M_PI));
    if (k != 0.0 && std::hypot(dd - 2.0 * M_PI * k, dx) <= tol) {
        return Convergence::Unstable;
    }
    return Convergence::Inconclusive;
}

Trajectory to_dimless_trajectory(const PhysicalParams& p, const Trajectory& phys,
                                 double t_origin) {
    if (phys.frame != Frame::Physical) {
        throw NumericalError("to_dimless_trajectory expects a physical trajectory");
    }
    const double sigma = time_scale(p);
    const double scale = std::sqrt(p.k_in * p.u_g_pu);

    Trajectory out;
    out.frame = Frame::Dimensionless;
    out.status = phys.status;
    out.samples.reserve(phys.samples.size());
    for (const auto& s : phys.samples) {
        out.samples.push_back({sigma * (s.t - t_origin), s.delta, s.x / scale});
    }
    for (const auto& e : phys.events) {
        out.events.push_back({sigma * (e.t - t_origin), e.label});
    }
    return out;
}

ScenarioResult run_fault_scenario(const PhysicalParams& p, const FaultScenario& fs,
                                  const ScenarioOptions& options) {
    fs.validate();

    const PhysicalParams p_pre = p.with_grid_voltage(fs.pre_u_g_pu);
    const DimlessParams dp_pre = derive_dimless(p_pre);
    if (!dp_pre.has_sep()) {
        throw ScenarioError("pre-fault SEP does not exist (m = " +
                            std::to_string(dp_pre.m) + ", h = " +
                            std::to_string(dp_pre.h) + ")");
    }
    const PhysicalParams p_fault = p.with_grid_voltage(fs.fault_u_g_pu);
    const PhysicalParams p_post = p.with_grid_voltage(fs.post_u_g_pu);
    const DimlessParams dp_post = derive_dimless(p_post);
    if (!dp_post.has_sep()) {
        throw ScenarioError("post-fault SEP does not exist; the LF criterion "
                            "cannot be evaluated");
    }
    const LyapunovContext lf = make_lyapunov_context(dp_post);
    const EacContext eac = make_eac_context(dp_post);
    const State sep_post{lf.delta_sep, 0.0};

    IntegrateOptions integ = options.integ;
    if (integ.sample_dt <= 0.0) integ.sample_dt = 1e-4;

    // The system sits at the exact pre-fault SEP when the fault hits.
    const PhysState s0{*dp_pre.delta_sep, 0.0};

    ScenarioResult res;
    res.trajectory.frame = Frame::Physical;
    res.trajectory.events.push_back({0.0, "fault_on"});
    res.trajectory.events.push_back({fs.fct, "fault_cleared"});

    PhysState clearing = s0;
    if (fs.fct > 0.0) {
        const Trajectory fault_leg =
            integrate_physical(p_fault, s0, 0.0, fs.fct, integ);
        if (fault_leg.status == IntegrationStatus::Diverged) {
            throw NumericalError("state became non-finite during the fault segment");
        }
        clearing = PhysState{fault_leg.back().delta, fault_leg.back().x};
        res.trajectory.samples = fault_leg.samples;
    } else {
        res.trajectory.samples.push_back({0.0, s0.delta, s0.x_int});
    }

    res.clearing_state = clearing;
    res.clearing_state_dimless = to_dimless_state(p_post, clearing);
    res.v_at_clearing = lf.value(res.clearing_state_dimless);
    res.verdict_lf = lf.assess(res.clearing_state_dimless);
    res.verdict_eac = eac.assess(res.clearing_state_dimless);

    // Ground truth: keep integrating the post-fault system, doubling the
    // horizon while the outcome is inconclusive.
    IntegrateOptions post_integ = integ;
    const double x_scale = std::sqrt(p_post.k_in * p_post.u_g_pu);
    if (options.stop_when_settled) {
        const double target_delta = sep_post.delta;
        post_integ.stop = [target_delta, x_scale](double, const Vec2& y) {
            const double dd = y[0] - target_delta;
            if (std::abs(dd) > 4.0 * M_PI) return true;
            return std::hypot(dd, y[1] / x_scale) <= 1e-7;
        };
    }

    Trajectory post_dimless;
    post_dimless.frame = Frame::Dimensionless;
    PhysState from = clearing;
    double t_from = fs.fct;
    double extension = fs.t_end - fs.fct;
    res.verdict_sim = Convergence::Inconclusive;
    for (int attempt = 0; attempt <= options.max_horizon_doublings; ++attempt) {
        const double t_to = t_from + extension;
        const Trajectory leg =
            integrate_physical(p_post, from, t_from, t_to, post_integ);

        const std::size_t skip =
            (!res.trajectory.samples.empty() &&
             !leg.samples.empty() &&
             leg.samples.front().t <= res.trajectory.samples.back().t)
                ? 1
                : 0;
        res.trajectory.samples.insert(res.trajectory.samples.end(),
                                      leg.samples.begin() + skip, leg.samples.end());
        res.trajectory.status = leg.status;

        const Trajectory leg_dimless = to_dimless_trajectory(p_post, leg, fs.fct);
        post_dimless.status = leg_dimless.status;
        post_dimless.samples.insert(post_dimless.samples.end(),
                                    leg_dimless.samples.begin() + skip,
                                    leg_dimless.samples.end());

        res.t_end_used = res.trajectory.samples.back().t;
        res.verdict_sim = classify_converged(post_dimless, sep_post);
        if (res.verdict_sim != Convergence::Inconclusive ||
            leg.status != IntegrationStatus::Completed) {
            break;
        }
        from = PhysState{leg.back().delta, leg.back().x};
        t_from = leg.back().t;
        extension *= 2.0;
    }
    return res;
}

}  // namespace gss
