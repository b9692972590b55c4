// Physical and dimensionless models of the PLL-synchronized grid-tied
// converter, parameter reduction and coordinate/time conversions.
//
// The physical model tracks the PLL angle error delta and the PI
// integrator output x_int in per-unit electrical quantities. The
// dimensionless reduction compresses all parameters into the triple
// (m, gamma, h):
//
//   d(delta)/dtau = gamma*(m - sin delta) + x
//   d(x)/dtau     =       (m - sin delta) + h*x
//
// All functions here are pure; values are immutable after construction.
#pragma once

#include <optional>

#include "gss/errors.hpp"

namespace gss {

struct PhysicalParams {
    double u_g_pu = 1.0;    // grid voltage magnitude (pu)
    double x_g_pu = 0.5;    // grid reactance at nominal frequency (pu)
    double r_g_pu = 0.0;    // grid resistance (pu)
    double i_sd_pu = 1.0;   // injected d-axis current (pu)
    double i_sq_pu = 0.0;   // injected q-axis current (pu)
    double k_pn = 20.0;     // normalized PLL proportional gain
    double k_in = 200.0;    // normalized PLL integral gain
    double omega_g = 314.15926535897931;  // nominal grid angular frequency (rad/s)

    // Throws ParameterError if an invariant is violated
    // (k_pn, k_in, omega_g, x_g_pu > 0; u_g_pu >= 0).
    void validate() const;

    // Same parameter set with the grid voltage replaced (fault variants).
    PhysicalParams with_grid_voltage(double u_g) const;
};

struct DimlessParams {
    double m = 0.0;        // driving-term ratio
    double gamma = 0.0;    // proportional-path damping
    double h = 0.0;        // integrator-path coupling
    double gamma_h = 0.0;  // cached product gamma*h
    std::optional<double> delta_sep;  // SEP angle, present iff the SEP exists

    bool has_sep() const { return delta_sep.has_value(); }
};

// Point on the dimensionless phase plane.
struct State {
    double delta = 0.0;
    double x = 0.0;
};

// Point in physical coordinates.
struct PhysState {
    double delta = 0.0;
    double x_int = 0.0;
};

// Parameter reduction: m = (Xg*Isd + Rg*Isq)/Ug, gamma = k_pn*sqrt(Ug)/sqrt(k_in),
// h = (sqrt(k_in)/omega_g)*(Xg*Isd/sqrt(Ug)). delta_sep is populated iff the
// SEP condition |m| < 1, h < gamma*sqrt(1-m^2) holds.
// Throws ParameterError for u_g_pu <= 0, ModelValidityError for gamma*h >= 1.
DimlessParams derive_dimless(const PhysicalParams& p);

// Direct construction from the dimensionless triple. gamma >= 0 is accepted:
// gamma = 0 is the undamped swing limit used by baseline analyses even though
// physical gains always give gamma > 0. Throws ModelValidityError for
// |gamma*h| >= 1 or gamma < 0.
DimlessParams make_dimless(double m, double gamma, double h);

// Right-hand side of the dimensionless model. Total on finite inputs;
// the returned State carries (d delta/d tau, d x/d tau) componentwise.
State vector_field_dimless(const DimlessParams& dp, const State& s);

// Right-hand side of the physical model in per-unit form. The common
// denominator is 1 - gamma*h; throws ModelValidityError if it is not
// positive.
PhysState vector_field_physical(const PhysicalParams& p, const PhysState& s);

// x = x_int / sqrt(k_in * Ug); delta unchanged. Throws ParameterError
// for u_g_pu <= 0.
State to_dimless_state(const PhysicalParams& p, const PhysState& s);

// Inverse of to_dimless_state.
PhysState to_phys_state(const PhysicalParams& p, const State& s);

// tau = sigma * t with sigma = sqrt(k_in * Ug) / (1 - gamma*h) > 0.
// Throws ModelValidityError when gamma*h >= 1.
double time_scale(const PhysicalParams& p);

}  // namespace gss
