#include "gss/model.hpp"

#include <cmath>
#include <string>

namespace gss {

namespace {

std::string num(double v) { return std::to_string(v); }

}  // namespace

void PhysicalParams::validate() const {
    if (!(k_pn > 0.0) || !(k_in > 0.0)) {
        throw ParameterError("PI gains must be positive: k_pn=" + num(k_pn) +
                             ", k_in=" + num(k_in));
    }
    if (!(omega_g > 0.0)) {
        throw ParameterError("omega_g must be positive: " + num(omega_g));
    }
    if (!(x_g_pu > 0.0)) {
        throw ParameterError("x_g_pu must be positive: " + num(x_g_pu));
    }
    if (!(u_g_pu >= 0.0)) {
        throw ParameterError("u_g_pu must be non-negative: " + num(u_g_pu));
    }
    if (!std::isfinite(u_g_pu) || !std::isfinite(x_g_pu) || !std::isfinite(r_g_pu) ||
        !std::isfinite(i_sd_pu) || !std::isfinite(i_sq_pu) || !std::isfinite(k_pn) ||
        !std::isfinite(k_in) || !std::isfinite(omega_g)) {
        throw ParameterError("all physical parameters must be finite");
    }
}

PhysicalParams PhysicalParams::with_grid_voltage(double u_g) const {
    PhysicalParams q = *this;
    q.u_g_pu = u_g;
    return q;
}

DimlessParams derive_dimless(const PhysicalParams& p) {
    p.validate();
    if (!(p.u_g_pu > 0.0)) {
        throw ParameterError("u_g_pu must be positive for the dimensionless reduction");
    }
    const double sqrt_ug = std::sqrt(p.u_g_pu);
    const double sqrt_kin = std::sqrt(p.k_in);

    DimlessParams dp;
    dp.m = (p.x_g_pu * p.i_sd_pu + p.r_g_pu * p.i_sq_pu) / p.u_g_pu;
    dp.gamma = p.k_pn * sqrt_ug / sqrt_kin;
    dp.h = (sqrt_kin / p.omega_g) * (p.x_g_pu * p.i_sd_pu / sqrt_ug);
    dp.gamma_h = dp.gamma * dp.h;
    if (dp.gamma_h >= 1.0) {
        throw ModelValidityError(
            "gamma*h = " + num(dp.gamma_h) +
            " >= 1: the nondimensionalization degenerates (needs k_pn*Xg*Isd/omega_g < 1)");
    }
    if (std::abs(dp.m) < 1.0 && dp.h < dp.gamma * std::sqrt(1.0 - dp.m * dp.m)) {
        dp.delta_sep = std::asin(dp.m);
    }
    return dp;
}

DimlessParams make_dimless(double m, double gamma, double h) {
    if (!(gamma >= 0.0)) {
        throw ModelValidityError("gamma must be non-negative: " + num(gamma));
    }
    DimlessParams dp;
    dp.m = m;
    dp.gamma = gamma;
    dp.h = h;
    dp.gamma_h = gamma * h;
    if (std::abs(dp.gamma_h) >= 1.0) {
        throw ModelValidityError("|gamma*h| = " + num(std::abs(dp.gamma_h)) + " >= 1");
    }
    if (std::abs(m) < 1.0 && h < gamma * std::sqrt(1.0 - m * m)) {
        dp.delta_sep = std::asin(m);
    }
    return dp;
}

State vector_field_dimless(const DimlessParams& dp, const State& s) {
    const double drive = dp.m - std::sin(s.delta);
    return State{dp.gamma * drive + s.x, drive + dp.h * s.x};
}

PhysState vector_field_physical(const PhysicalParams& p, const PhysState& s) {
    const double denom = 1.0 - p.k_pn * (p.x_g_pu / p.omega_g) * p.i_sd_pu;
    if (!(denom > 0.0)) {
        throw ModelValidityError("1 - gamma*h = " + num(denom) + " must be positive");
    }
    // u_q0 is the q-axis voltage with the frequency-coupling term already
    // folded into the denominator.
    const double u_q0 =
        p.x_g_pu * p.i_sd_pu + p.r_g_pu * p.i_sq_pu - p.u_g_pu * std::sin(s.delta);
    const double d_delta = (p.k_pn * u_q0 + s.x_int) / denom;
    const double d_xint =
        p.k_in * (u_q0 + (p.x_g_pu / p.omega_g) * p.i_sd_pu * s.x_int) / denom;
    return PhysState{d_delta, d_xint};
}

State to_dimless_state(const PhysicalParams& p, const PhysState& s) {
    if (!(p.u_g_pu > 0.0)) {
        throw ParameterError("u_g_pu must be positive to scale the integrator state");
    }
    return State{s.delta, s.x_int / std::sqrt(p.k_in * p.u_g_pu)};
}

PhysState to_phys_state(const PhysicalParams& p, const State& s) {
    if (!(p.u_g_pu > 0.0)) {
        throw ParameterError("u_g_pu must be positive to scale the integrator state");
    }
    return PhysState{s.delta, s.x * std::sqrt(p.k_in * p.u_g_pu)};
}

double time_scale(const PhysicalParams& p) {
    if (!(p.u_g_pu > 0.0)) {
        throw ParameterError("u_g_pu must be positive for the time scale");
    }
    const double gh = p.k_pn * (p.x_g_pu / p.omega_g) * p.i_sd_pu;
    if (gh >= 1.0) {
        throw ModelValidityError("gamma*h = " + num(gh) + " >= 1: time scale undefined");
    }
    return std::sqrt(p.k_in * p.u_g_pu) / (1.0 - gh);
}

}  // namespace gss
