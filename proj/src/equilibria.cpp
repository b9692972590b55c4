#include "gss/equilibria.hpp"

#include <algorithm>
#include <cmath>

namespace gss {

const char* to_string(EquilibriumKind kind) {
    switch (kind) {
        case EquilibriumKind::Sep: return "SEP";
        case EquilibriumKind::Saddle: return "Saddle";
        case EquilibriumKind::UnstableNodeFocus: return "UnstableNodeFocus";
    }
    return "?";
}

std::array<std::complex<double>, 2> Jacobian::eigenvalues() const {
    const double tr = trace();
    const double disc = tr * tr - 4.0 * det();
    std::array<std::complex<double>, 2> eig;
    if (disc >= 0.0) {
        const double root = std::sqrt(disc);
        eig[0] = {0.5 * (tr - root), 0.0};
        eig[1] = {0.5 * (tr + root), 0.0};
    } else {
        const double root = std::sqrt(-disc);
        eig[0] = {0.5 * tr, -0.5 * root};
        eig[1] = {0.5 * tr, 0.5 * root};
    }
    return eig;
}

Jacobian jacobian(const DimlessParams& dp, const State& s) {
    const double c = std::cos(s.delta);
    return Jacobian{-dp.gamma * c, 1.0, -c, dp.h};
}

double h_critical(const DimlessParams& dp) {
    if (std::abs(dp.m) > 1.0) {
        throw ParameterError("h_critical requires |m| <= 1, got m = " +
                             std::to_string(dp.m));
    }
    return dp.gamma * std::sqrt(1.0 - dp.m * dp.m);
}

namespace {

EquilibriumPoint classify(const DimlessParams& dp, double delta) {
    EquilibriumPoint ep;
    ep.location = State{delta, 0.0};
    const Jacobian jac = jacobian(dp, ep.location);
    ep.eigenvalues = jac.eigenvalues();
    if (jac.det() < 0.0) {
        ep.kind = EquilibriumKind::Saddle;
    } else if (jac.det() > 0.0 && jac.trace() < 0.0) {
        ep.kind = EquilibriumKind::Sep;
    } else {
        ep.kind = EquilibriumKind::UnstableNodeFocus;
    }
    return ep;
}

}  // namespace

std::vector<EquilibriumPoint> equilibria_in_range(const DimlessParams& dp,
                                                  double delta_lo, double delta_hi) {
    std::vector<EquilibriumPoint> out;
    if (std::abs(dp.m) > 1.0 || delta_hi < delta_lo) return out;

    const double base = std::asin(dp.m);
    constexpr double two_pi = 2.0 * M_PI;

    // Both solution branches of sin delta = m, shifted by multiples of 2*pi.
    std::vector<double> deltas;
    for (const double branch : {base, M_PI - base}) {
        const double k_lo = std::ceil((delta_lo - branch) / two_pi);
        for (double k = k_lo; branch + k * two_pi <= delta_hi; k += 1.0) {
            deltas.push_back(branch + k * two_pi);
        }
    }
    std::sort(deltas.begin(), deltas.end());
    // The branches coincide at |m| = 1; drop duplicates.
    deltas.erase(std::unique(deltas.begin(), deltas.end(),
                             [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                 deltas.end());

    out.reserve(deltas.size());
    for (const double d : deltas) out.push_back(classify(dp, d));
    return out;
}

EquilibriumPoint sep(const DimlessParams& dp) {
    if (!(std::abs(dp.m) < 1.0)) {
        throw NoSepError(NoSepError::Clause::MExceedsOne,
                         "no SEP: |m| = " + std::to_string(std::abs(dp.m)) +
                             " >= 1 (no equilibrium solves sin delta = m)");
    }
    const double hc = h_critical(dp);
    if (!(dp.h < hc)) {
        throw NoSepError(NoSepError::Clause::HExceedsCritical,
                         "no SEP: h = " + std::to_string(dp.h) +
                             " >= h_c = " + std::to_string(hc));
    }
    return classify(dp, std::asin(dp.m));
}

}  // namespace gss
