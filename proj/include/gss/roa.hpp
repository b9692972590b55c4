// Region-of-attraction machinery: ground-truth boundary via stable
// manifolds of the adjacent saddles, a brute-force classification grid,
// level-set extraction for the LF and EAC estimates, and containment
// diagnostics between them.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "gss/lyapunov.hpp"
#include "gss/model.hpp"
#include "gss/sim.hpp"

namespace gss {

struct Window {
    double delta_lo = -4.5;
    double delta_hi = 3.5;
    double x_lo = -1.5;
    double x_hi = 1.5;

    bool contains(const State& s) const {
        return delta_lo <= s.delta && s.delta <= delta_hi && x_lo <= s.x &&
               s.x <= x_hi;
    }
};

enum class BoundaryLabel { RealRoa, LfEstimate, EacEstimate };

const char* to_string(BoundaryLabel label);

using Polyline = std::vector<State>;

struct Boundary {
    BoundaryLabel label = BoundaryLabel::RealRoa;
    // Level-set estimates hold a single closed polygon (stored without a
    // repeated end point). The real-ROA boundary holds one open polyline
    // per saddle, each running through its seed saddle.
    std::vector<Polyline> segments;
    bool closed = false;
    std::optional<double> critical_value;
    std::vector<State> seeds;  // saddle points, for the real-ROA boundary

    const Polyline& polygon() const;  // requires closed with one segment
};

// Shoelace area of a closed polyline.
double polygon_area(const Polyline& poly);

// Winding-number membership; points on (or numerically coincident with)
// an edge count as inside.
bool point_in_polygon(const Polyline& poly, const State& pt);

struct ManifoldOptions {
    double seed_offset = 1e-6;   // along the unit stable eigenvector
    double arc_length_cap = 100.0;
    double time_cap = 500.0;     // reversed-time span per branch
    double sample_dt = 0.0;      // 0: natural integrator steps
    IntegrateOptions integ;
};

// Stable manifolds of the two saddles adjacent to the (would-be) SEP,
// traced in reversed time from +-seed_offset along the stable eigenvector
// until the trajectory leaves the window or hits the arc-length cap.
// Throws NoSepError when |m| >= 1 (no saddles).
Boundary real_roa_boundary(const DimlessParams& dp, const Window& window,
                           const ManifoldOptions& options = {});

enum class CellLabel : std::uint8_t { Stable, Unstable, Inconclusive };

const char* to_string(CellLabel label);

struct ClassificationGrid {
    Window window;
    int n_delta = 0;
    int n_x = 0;
    std::vector<CellLabel> labels;  // index = i * n_x + j

    double delta_at(int i) const;
    double x_at(int j) const;
    CellLabel at(int i, int j) const { return labels[static_cast<std::size_t>(i) * n_x + j]; }
};

struct OracleOptions {
    double horizon = 300.0;        // dimensionless time per first attempt
    double tol = 1e-4;             // convergence tolerance to the SEP
    double settle_tol = 1e-7;      // early-stop distance
    double retry_factor = 4.0;     // horizon multiplier for inconclusive cells
    unsigned threads = 0;          // 0: hardware concurrency
    IntegrateOptions integ;
};

// Forward-simulates every grid point and labels it against the SEP.
// Embarrassingly parallel; the output is deterministic regardless of the
// thread count. Throws NoSepError when the SEP does not exist.
ClassificationGrid grid_oracle(const DimlessParams& dp, const Window& window,
                               int resolution, const OracleOptions& options = {});

using ScalarField = std::function<double(const State&)>;

struct LevelSetOptions {
    int resolution = 801;  // corner samples per axis
    // Restrict the region to delta inside this interval (folded into the
    // sampled field), selecting the SEP's component and resolving saddle
    // pinch points on the level set.
    std::optional<DeltaInterval> delta_clamp;
};

// Extracts the contour evaluator == critical_value by marching squares
// with linear interpolation, refines every vertex onto the level set by
// bisection along its grid edge, closes contours that exit the window
// along the window frame, and returns the closed component containing
// inside_point. Throws NumericalError when no such component exists.
Boundary level_set_boundary(const ScalarField& evaluator, double critical_value,
                            const Window& window, const State& inside_point,
                            BoundaryLabel label, const LevelSetOptions& options = {});

// The proposed-LF estimate: {V <= V_cr} restricted to the criterion window.
Boundary lf_estimate_boundary(const LyapunovContext& ctx, const Window& window,
                              const LevelSetOptions& options = {});

// The EAC/EF baseline estimate: {E_eac <= E_cr} between the adjacent saddles.
Boundary eac_estimate_boundary(const EacContext& ctx, const Window& window,
                               const LevelSetOptions& options = {});

struct ContainmentReport {
    std::vector<State> violations;  // oracle-Unstable points inside the boundary
    double fraction_contained = 0.0;  // stable share of the enclosed points
    long n_inside = 0;
    long n_stable_inside = 0;
    long n_unstable_inside = 0;
    long n_inconclusive_inside = 0;
};

// Point-in-polygon test of every oracle point against a closed estimate
// boundary; violations are the enclosed points the oracle calls Unstable.
ContainmentReport containment_report(const Boundary& inner,
                                     const ClassificationGrid& oracle);

}  // namespace gss
