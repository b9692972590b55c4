// The analytically constructed Lyapunov function for the dimensionless
// model, its critical level set and the resulting large-signal stability
// criterion, plus the classical energy-function / equal-area baseline it
// is compared against.
//
//   V(delta, x) = V0 + 1/2 [x - h (delta - delta_s)]^2
//                 - (1 - gamma h)(m delta + cos delta)
//
// dV/dtau factorizes as -((1 - gamma h)/gamma) * g_drive * g_coupled with
//   g_drive(delta)   = gamma (m - sin delta)
//   g_coupled(delta) = gamma (m - sin delta) + h (delta - delta_s),
// which defines the dissipative region (dV/dtau <= 0) between the
// nontrivial zeros of the relevant factor.
#pragma once

#include <array>

#include "gss/equilibria.hpp"
#include "gss/model.hpp"

namespace gss {

struct DeltaInterval {
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
    bool contains(double delta) const { return lo <= delta && delta <= hi; }
};

struct Verdict {
    enum class Label { GuaranteedStable, NotGuaranteed };

    Label label = Label::NotGuaranteed;
    double v_value = 0.0;  // function value at the assessed state
    double v_cr = 0.0;     // critical level it was compared against
    bool in_window = false;

    bool guaranteed() const { return label == Label::GuaranteedStable; }
};

const char* to_string(Verdict::Label label);

// Immutable bundle of everything derived from one parameter set: the SEP,
// the level offset V0, the dissipative interval, the tangent point of the
// critical level set, V_cr and the criterion window. Construction does the
// root finding once; evaluation is pure and thread-safe.
struct LyapunovContext {
    DimlessParams params;
    double delta_sep = 0.0;
    double v0 = 0.0;
    DeltaInterval dissipative;  // dV/dtau <= 0 for delta inside
    State tangent;              // where the critical level set touches it
    double v_cr = 0.0;
    DeltaInterval window;  // admissible delta range of the criterion
    // The printed criterion takes the window from g_drive zeros for m >= 0
    // even when the dissipative interval comes from g_coupled; this flag
    // surfaces whether the window is contained in the dissipative interval.
    bool window_within_dissipative = false;

    double value(const State& s) const;
    // Closed-form dV/dtau (a function of delta only).
    double derivative(const State& s) const;
    Verdict assess(const State& s) const;
};

// Throws NoSepError when Eq.-style SEP conditions fail, ModelValidityError
// for gamma <= 0, NumericalError when zero bracketing fails.
LyapunovContext make_lyapunov_context(const DimlessParams& dp);

// Classical swing energy E = x^2/2 - m delta - cos delta and its time
// derivative along the dimensionless flow, dE/dtau = h x^2 - gamma (m - sin delta)^2.
double energy_function(const DimlessParams& dp, const State& s);
double energy_dot(const DimlessParams& dp, const State& s);

// Equal-area / energy-function baseline, reconstructed the way the prior
// art applies it: the damping terms of the second-order angle equation are
// ignored, so the kinetic variable is the angle speed
// d(delta)/dtau = gamma (m - sin delta) + x rather than x, and the critical
// level is the energy of the nearest adjacent saddle.
struct EacContext {
    DimlessParams params;
    double delta_ref = 0.0;     // arcsin m
    double saddle_lo = 0.0;     // adjacent saddle below delta_ref
    double saddle_hi = 0.0;     // adjacent saddle above delta_ref
    double nearest_saddle = 0.0;
    double e_cr = 0.0;

    double energy(const State& s) const;
    Verdict assess(const State& s) const;
};

// Throws NoSepError when |m| >= 1 (no saddle pair exists).
EacContext make_eac_context(const DimlessParams& dp);

// Convenience one-shot form.
Verdict eac_assess(const DimlessParams& dp, const State& s);

// Coefficients (a, p, epsilon) of the quadratic-form ansatz behind V,
// with the three constraint residuals (all exactly zero for the unique
// solution a = -h, p = 1, epsilon = 1 - gamma h).
struct LfCoefficients {
    double a = 0.0;
    double p = 0.0;
    double epsilon = 0.0;
    std::array<double, 3> residuals{};  // 1 + a*gamma - eps, a*h + p*a^2, h + a
};

LfCoefficients lf_coefficients(double gamma, double h);

}  // namespace gss
