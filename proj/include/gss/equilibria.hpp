// Equilibrium points of the dimensionless system: location, small-signal
// classification and the SEP existence condition h < h_c = gamma*sqrt(1-m^2).
#pragma once

#include <array>
#include <complex>
#include <vector>

#include "gss/model.hpp"

namespace gss {

enum class EquilibriumKind { Sep, Saddle, UnstableNodeFocus };

const char* to_string(EquilibriumKind kind);

// 2x2 Jacobian of the dimensionless field, row-major.
struct Jacobian {
    double a11, a12, a21, a22;

    double trace() const { return a11 + a22; }
    double det() const { return a11 * a22 - a12 * a21; }

    // Eigenvalues ordered by real part ascending, then imaginary part
    // ascending (fixed convention for reproducible output).
    std::array<std::complex<double>, 2> eigenvalues() const;
};

struct EquilibriumPoint {
    State location;          // x is always 0 at equilibria
    EquilibriumKind kind;
    std::array<std::complex<double>, 2> eigenvalues;
};

// All equilibria with delta in [delta_lo, delta_hi], ascending in delta.
// Empty for |m| > 1 (loss of equilibrium, the fault-on case).
std::vector<EquilibriumPoint> equilibria_in_range(const DimlessParams& dp,
                                                  double delta_lo, double delta_hi);

// The SEP (arcsin m, 0). Throws NoSepError with the violated clause when
// |m| >= 1 or h >= h_c (strict inequalities; boundary cases are rejected).
EquilibriumPoint sep(const DimlessParams& dp);

// Jacobian of the dimensionless field at any state:
// [[-gamma cos delta, 1], [-cos delta, h]].
Jacobian jacobian(const DimlessParams& dp, const State& s);

// h_c = gamma*sqrt(1 - m^2). Throws ParameterError for |m| > 1.
double h_critical(const DimlessParams& dp);

}  // namespace gss
