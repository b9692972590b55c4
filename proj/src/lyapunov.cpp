#include "gss/lyapunov.hpp"

#include <cmath>
#include <string>

#include "gss/rootfind.hpp"

namespace gss {

namespace {

constexpr double kScanStep = M_PI / 100.0;  // bracket-seeding resolution
constexpr double kRootTol = 1e-12;

double g_drive(const DimlessParams& dp, double delta) {
    return dp.gamma * (dp.m - std::sin(delta));
}

double g_coupled(const DimlessParams& dp, double delta_sep, double delta) {
    return dp.gamma * (dp.m - std::sin(delta)) + dp.h * (delta - delta_sep);
}

struct AdjacentZeros {
    double left;   // nearest nontrivial zero below delta_sep
    double right;  // nearest nontrivial zero above delta_sep

    // Closest by |zero - delta_sep| on the real line; ties go right.
    double closest(double delta_sep) const {
        return (right - delta_sep <= delta_sep - left) ? right : left;
    }
};

// Nearest nontrivial zeros of g_coupled on each side of delta_sep, found by
// a directed scan (the factor vanishes at delta_sep itself, so the scan
// starts one step out) followed by bisection.
AdjacentZeros adjacent_coupled_zeros(const DimlessParams& dp, double delta_sep) {
    const auto g = [&](double d) { return g_coupled(dp, delta_sep, d); };

    const auto directed = [&](double dir) -> double {
        double a = delta_sep + dir * 1e-9;
        double fa = g(a);
        for (int i = 1; i <= 200 + 1; ++i) {
            const double b = delta_sep + dir * static_cast<double>(i) * kScanStep;
            const double fb = g(b);
            if (fb == 0.0) return b;
            if (std::signbit(fa) != std::signbit(fb)) {
                return dir > 0 ? bisect(g, a, b, kRootTol) : bisect(g, b, a, kRootTol);
            }
            a = b;
            fa = fb;
        }
        throw NumericalError(
            "no zero of the coupled derivative factor within 2*pi " +
            std::string(dir > 0 ? "above" : "below") + " delta_s = " +
            std::to_string(delta_sep) + " (m=" + std::to_string(dp.m) +
            ", gamma=" + std::to_string(dp.gamma) + ", h=" + std::to_string(dp.h) +
            "); endpoint g = " + std::to_string(fa));
    };

    return AdjacentZeros{directed(-1.0), directed(+1.0)};
}

// Zeros of g_drive adjacent to delta_sep are the neighbouring branch points
// of sin delta = m; they are analytic.
AdjacentZeros adjacent_drive_zeros(double delta_sep) {
    return AdjacentZeros{-M_PI - delta_sep, M_PI - delta_sep};
}

}  // namespace

const char* to_string(Verdict::Label label) {
    return label == Verdict::Label::GuaranteedStable ? "GuaranteedStable"
                                                     : "NotGuaranteed";
}

double LyapunovContext::value(const State& s) const {
    const double q = s.x - params.h * (s.delta - delta_sep);
    return v0 + 0.5 * q * q -
           (1.0 - params.gamma_h) * (params.m * s.delta + std::cos(s.delta));
}

double LyapunovContext::derivative(const State& s) const {
    return -((1.0 - params.gamma_h) / params.gamma) * g_drive(params, s.delta) *
           g_coupled(params, delta_sep, s.delta);
}

Verdict LyapunovContext::assess(const State& s) const {
    Verdict verdict;
    verdict.v_value = value(s);
    verdict.v_cr = v_cr;
    verdict.in_window = window.contains(s.delta);
    verdict.label = (verdict.in_window && verdict.v_value <= v_cr)
                        ? Verdict::Label::GuaranteedStable
                        : Verdict::Label::NotGuaranteed;
    return verdict;
}

LyapunovContext make_lyapunov_context(const DimlessParams& dp) {
    if (!(dp.gamma > 0.0)) {
        throw ModelValidityError("the stability criterion requires gamma > 0");
    }
    const EquilibriumPoint ep = sep(dp);  // throws NoSepError with the failed clause

    LyapunovContext ctx;
    ctx.params = dp;
    ctx.delta_sep = ep.location.delta;
    ctx.v0 = (1.0 - dp.gamma_h) *
             (dp.m * ctx.delta_sep + std::cos(ctx.delta_sep));

    const double hc = h_critical(dp);
    const AdjacentZeros drive = adjacent_drive_zeros(ctx.delta_sep);
    const bool indefinite = dp.h > 0.0 && dp.h < hc;
    const bool need_coupled = indefinite || dp.m < 0.0;
    const AdjacentZeros coupled = need_coupled
                                      ? adjacent_coupled_zeros(dp, ctx.delta_sep)
                                      : drive;

    double tangent_delta;
    if (indefinite) {
        ctx.dissipative = DeltaInterval{coupled.left, coupled.right};
        tangent_delta = coupled.closest(ctx.delta_sep);
    } else {
        ctx.dissipative = DeltaInterval{drive.left, drive.right};
        tangent_delta = drive.closest(ctx.delta_sep);
    }
    ctx.tangent = State{tangent_delta, dp.h * (tangent_delta - ctx.delta_sep)};
    ctx.v_cr = ctx.v0 - (1.0 - dp.gamma_h) *
                            (dp.m * tangent_delta + std::cos(tangent_delta));
    if (!(ctx.v_cr > 0.0)) {
        throw NumericalError("critical level V_cr = " + std::to_string(ctx.v_cr) +
                             " is not positive; parameter set is degenerate");
    }

    ctx.window = dp.m >= 0.0 ? DeltaInterval{drive.left, drive.right}
                             : DeltaInterval{coupled.left, coupled.right};
    ctx.window_within_dissipative = ctx.dissipative.lo <= ctx.window.lo &&
                                    ctx.window.hi <= ctx.dissipative.hi;
    return ctx;
}

double energy_function(const DimlessParams& dp, const State& s) {
    return 0.5 * s.x * s.x - dp.m * s.delta - std::cos(s.delta);
}

double energy_dot(const DimlessParams& dp, const State& s) {
    const double drive = dp.m - std::sin(s.delta);
    return dp.h * s.x * s.x - dp.gamma * drive * drive;
}

double EacContext::energy(const State& s) const {
    const double speed = params.gamma * (params.m - std::sin(s.delta)) + s.x;
    return 0.5 * speed * speed - params.m * s.delta - std::cos(s.delta);
}

Verdict EacContext::assess(const State& s) const {
    Verdict verdict;
    verdict.v_value = energy(s);
    verdict.v_cr = e_cr;
    verdict.in_window = saddle_lo <= s.delta && s.delta <= saddle_hi;
    verdict.label = (verdict.in_window && verdict.v_value <= e_cr)
                        ? Verdict::Label::GuaranteedStable
                        : Verdict::Label::NotGuaranteed;
    return verdict;
}

EacContext make_eac_context(const DimlessParams& dp) {
    if (!(std::abs(dp.m) < 1.0)) {
        throw NoSepError(NoSepError::Clause::MExceedsOne,
                         "EAC baseline inapplicable: |m| = " +
                             std::to_string(std::abs(dp.m)) + " >= 1, no saddle pair");
    }
    EacContext ctx;
    ctx.params = dp;
    ctx.delta_ref = std::asin(dp.m);
    ctx.saddle_lo = -M_PI - ctx.delta_ref;
    ctx.saddle_hi = M_PI - ctx.delta_ref;
    ctx.nearest_saddle = (ctx.saddle_hi - ctx.delta_ref <= ctx.delta_ref - ctx.saddle_lo)
                             ? ctx.saddle_hi
                             : ctx.saddle_lo;
    ctx.e_cr = -dp.m * ctx.nearest_saddle - std::cos(ctx.nearest_saddle);
    return ctx;
}

Verdict eac_assess(const DimlessParams& dp, const State& s) {
    return make_eac_context(dp).assess(s);
}

LfCoefficients lf_coefficients(double gamma, double h) {
    if (!(std::abs(gamma * h) < 1.0)) {
        throw ModelValidityError("lf_coefficients requires |gamma*h| < 1");
    }
    LfCoefficients c;
    c.a = -h;
    c.p = 1.0;
    c.epsilon = 1.0 - gamma * h;
    c.residuals[0] = (1.0 + c.a * gamma) - c.epsilon;  // x * (m - sin delta) coupling
    c.residuals[1] = c.a * h + c.p * (c.a * c.a);      // x * (delta - delta_s) coupling
    c.residuals[2] = h + c.a;                          // x^2 coefficient (must be <= 0)
    return c;
}

}  // namespace gss
