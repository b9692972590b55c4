#include "gss/roa.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>

#include "gss/equilibria.hpp"

namespace gss {

const char* to_string(BoundaryLabel label) {
    switch (label) {
        case BoundaryLabel::RealRoa: return "RealROA";
        case BoundaryLabel::LfEstimate: return "LFEstimate";
        case BoundaryLabel::EacEstimate: return "EACEstimate";
    }
    return "?";
}

const char* to_string(CellLabel label) {
    switch (label) {
        case CellLabel::Stable: return "Stable";
        case CellLabel::Unstable: return "Unstable";
        case CellLabel::Inconclusive: return "Inconclusive";
    }
    return "?";
}

const Polyline& Boundary::polygon() const {
    if (!closed || segments.size() != 1) {
        throw NumericalError("boundary is not a single closed polygon");
    }
    return segments.front();
}

double polygon_area(const Polyline& poly) {
    double twice = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const State& a = poly[i];
        const State& b = poly[(i + 1) % n];
        twice += a.delta * b.x - b.delta * a.x;
    }
    return 0.5 * std::abs(twice);
}

bool point_in_polygon(const Polyline& poly, const State& pt) {
    int winding = 0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const State& a = poly[i];
        const State& b = poly[(i + 1) % n];
        const double cross =
            (b.delta - a.delta) * (pt.x - a.x) - (pt.delta - a.delta) * (b.x - a.x);
        // Treat points numerically on an edge as contained.
        if (std::abs(cross) < 1e-12) {
            const double dot = (pt.delta - a.delta) * (b.delta - a.delta) +
                               (pt.x - a.x) * (b.x - a.x);
            const double len2 = (b.delta - a.delta) * (b.delta - a.delta) +
                                (b.x - a.x) * (b.x - a.x);
            if (len2 > 0.0 && dot >= 0.0 && dot <= len2) return true;
        }
        if (a.x <= pt.x) {
            if (b.x > pt.x && cross > 0.0) ++winding;
        } else {
            if (b.x <= pt.x && cross < 0.0) --winding;
        }
    }
    return winding != 0;
}

// ---------------------------------------------------------------------------
// Real ROA boundary: reversed-time tracing of stable manifolds.
// ---------------------------------------------------------------------------

namespace {

State stable_eigenvector(const Jacobian& jac) {
    const auto eig = jac.eigenvalues();
    // det < 0 at a saddle: both eigenvalues real, the smaller is negative.
    const double lambda = eig[0].real();
    // (J - lambda I) v = 0; pick the better conditioned row.
    State v1{jac.a12, lambda - jac.a11};
    State v2{lambda - jac.a22, jac.a21};
    const double n1 = std::hypot(v1.delta, v1.x);
    const double n2 = std::hypot(v2.delta, v2.x);
    State v = n1 >= n2 ? v1 : v2;
    const double n = std::hypot(v.delta, v.x);
    v = State{v.delta / n, v.x / n};
    if (v.delta < 0.0 || (v.delta == 0.0 && v.x < 0.0)) {
        v = State{-v.delta, -v.x};
    }
    return v;
}

Polyline trace_branch(const DimlessParams& dp, const State& saddle, const State& dir,
                      const Window& window, const ManifoldOptions& options) {
    const State seed{saddle.delta + options.seed_offset * dir.delta,
                     saddle.x + options.seed_offset * dir.x};
    if (!window.contains(seed)) return Polyline{};

    const Field2 reversed = [dp](double, const Vec2& y) -> Vec2 {
        const State f = vector_field_dimless(dp, State{y[0], y[1]});
        return {-f.delta, -f.x};
    };

    IntegrateOptions integ = options.integ;
    integ.sample_dt = options.sample_dt;
    double arc = 0.0;
    Vec2 prev{seed.delta, seed.x};
    const double arc_cap = options.arc_length_cap;
    integ.stop = [&arc, prev, &window, arc_cap](double, const Vec2& y) mutable {
        arc += std::hypot(y[0] - prev[0], y[1] - prev[1]);
        prev = y;
        if (arc > arc_cap) return true;
        return !window.contains(State{y[0], y[1]});
    };

    const Trajectory traj = integrate(reversed, Frame::Dimensionless,
                                      {seed.delta, seed.x}, 0.0, options.time_cap, integ);
    Polyline poly;
    poly.reserve(traj.samples.size() + 1);
    poly.push_back(saddle);
    for (const auto& s : traj.samples) poly.push_back(State{s.delta, s.x});
    return poly;
}

}  // namespace

Boundary real_roa_boundary(const DimlessParams& dp, const Window& window,
                           const ManifoldOptions& options) {
    if (!(std::abs(dp.m) < 1.0)) {
        throw NoSepError(NoSepError::Clause::MExceedsOne,
                         "real ROA boundary inapplicable: |m| >= 1, no saddles");
    }
    const double delta_ref = std::asin(dp.m);

    Boundary boundary;
    boundary.label = BoundaryLabel::RealRoa;
    boundary.closed = false;

    for (const double saddle_delta : {-M_PI - delta_ref, M_PI - delta_ref}) {
        const State saddle{saddle_delta, 0.0};
        const Jacobian jac = jacobian(dp, saddle);
        if (!(jac.det() < 0.0)) {
            throw NumericalError("expected a saddle at delta = " +
                                 std::to_string(saddle_delta));
        }
        const State v = stable_eigenvector(jac);

        // Both branches, joined through the saddle into one polyline.
        Polyline minus = trace_branch(dp, saddle, State{-v.delta, -v.x}, window, options);
        const Polyline plus = trace_branch(dp, saddle, v, window, options);
        Polyline joined;
        joined.reserve(minus.size() + plus.size());
        std::reverse(minus.begin(), minus.end());
        joined.insert(joined.end(), minus.begin(), minus.end());
        if (!joined.empty() && !plus.empty()) {
            // Both start at the saddle; keep one copy.
            joined.insert(joined.end(), plus.begin() + 1, plus.end());
        } else {
            joined.insert(joined.end(), plus.begin(), plus.end());
        }
        if (joined.size() < 2) {
            throw NumericalError(
                "stable manifold of the saddle at delta = " +
                std::to_string(saddle_delta) +
                " escaped the window immediately; seeds lie outside the window");
        }
        boundary.segments.push_back(std::move(joined));
        boundary.seeds.push_back(saddle);
    }
    return boundary;
}

// ---------------------------------------------------------------------------
// Brute-force classification grid.
// ---------------------------------------------------------------------------

double ClassificationGrid::delta_at(int i) const {
    return window.delta_lo +
           (window.delta_hi - window.delta_lo) * static_cast<double>(i) /
               static_cast<double>(n_delta - 1);
}

double ClassificationGrid::x_at(int j) const {
    return window.x_lo + (window.x_hi - window.x_lo) * static_cast<double>(j) /
                             static_cast<double>(n_x - 1);
}

namespace {

CellLabel classify_cell(const DimlessParams& dp, const State& sep_state,
                        const State& s0, const OracleOptions& options) {
    constexpr double kFarBound = 4.0 * M_PI;
    const double target = sep_state.delta;
    const double settle = options.settle_tol;

    IntegrateOptions integ = options.integ;
    integ.sample_dt = 0.0;
    integ.stop = [target, settle](double, const Vec2& y) {
        const double dd = y[0] - target;
        if (std::abs(dd) > kFarBound) return true;
        return std::hypot(dd, y[1]) <= settle;
    };

    State from = s0;
    double horizon = options.horizon;
    for (int attempt = 0; attempt < 2; ++attempt) {
        Trajectory traj;
        // Record only endpoints; the stop predicate watches every step.
        integ.sample_dt = horizon * 2.0;
        traj = integrate_dimless(dp, from, 0.0, horizon, integ);

        if (traj.status == IntegrationStatus::Diverged) return CellLabel::Unstable;
        const TrajectorySample last = traj.back();
        const double dd = last.delta - target;
        if (std::abs(dd) > kFarBound) return CellLabel::Unstable;
        if (std::hypot(dd, last.x) <= options.tol) return CellLabel::Stable;
        const double k = std::round(dd / (2.0 * M_PI));
        if (k != 0.0 && std::hypot(dd - 2.0 * M_PI * k, last.x) <= options.tol) {
            return CellLabel::Unstable;
        }
        // Inconclusive: continue from where we stopped, with a longer leg.
        from = State{last.delta, last.x};
        horizon *= options.retry_factor;
    }
    return CellLabel::Inconclusive;
}

}  // namespace

ClassificationGrid grid_oracle(const DimlessParams& dp, const Window& window,
                               int resolution, const OracleOptions& options) {
    if (resolution < 2) {
        throw ParameterError("grid resolution must be >= 2 per axis");
    }
    const EquilibriumPoint ep = sep(dp);  // throws if the SEP does not exist
    const State sep_state = ep.location;

    ClassificationGrid grid;
    grid.window = window;
    grid.n_delta = resolution;
    grid.n_x = resolution;
    grid.labels.assign(static_cast<std::size_t>(resolution) * resolution,
                       CellLabel::Inconclusive);

    unsigned n_threads = options.threads;
    if (n_threads == 0) {
        n_threads = std::max(1u, std::thread::hardware_concurrency());
    }
    n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(resolution));

    const auto work = [&](int i_begin, int i_end) {
        for (int i = i_begin; i < i_end; ++i) {
            for (int j = 0; j < resolution; ++j) {
                const State s0{grid.delta_at(i), grid.x_at(j)};
                grid.labels[static_cast<std::size_t>(i) * resolution + j] =
                    classify_cell(dp, sep_state, s0, options);
            }
        }
    };

    if (n_threads <= 1) {
        work(0, resolution);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        const int chunk = (resolution + static_cast<int>(n_threads) - 1) /
                          static_cast<int>(n_threads);
        for (unsigned t = 0; t < n_threads; ++t) {
            const int b = static_cast<int>(t) * chunk;
            const int e = std::min(resolution, b + chunk);
            if (b >= e) break;
            pool.emplace_back(work, b, e);
        }
        for (auto& th : pool) th.join();
    }
    return grid;
}

// ---------------------------------------------------------------------------
// Level-set extraction: marching squares with on-level refinement and
// window-frame closure.
// ---------------------------------------------------------------------------

namespace {

struct MarchGrid {
    int n;
    Window window;

    double delta_at(int i) const {
        return window.delta_lo + (window.delta_hi - window.delta_lo) *
                                     static_cast<double>(i) / static_cast<double>(n - 1);
    }
    double x_at(int j) const {
        return window.x_lo +
               (window.x_hi - window.x_lo) * static_cast<double>(j) /
                   static_cast<double>(n - 1);
    }

    // Edge ids: horizontal edge H(i,j) joins (i,j)-(i+1,j); vertical edge
    // V(i,j) joins (i,j)-(i,j+1).
    std::int64_t h_edge(int i, int j) const {
        return static_cast<std::int64_t>(j) * (n - 1) + i;
    }
    std::int64_t v_edge(int i, int j) const {
        return static_cast<std::int64_t>(n) * (n - 1) +
               static_cast<std::int64_t>(j) * n + i;
    }
    bool is_h(std::int64_t id) const {
        return id < static_cast<std::int64_t>(n) * (n - 1);
    }
    void h_coords(std::int64_t id, int& i, int& j) const {
        i = static_cast<int>(id % (n - 1));
        j = static_cast<int>(id / (n - 1));
    }
    void v_coords(std::int64_t id, int& i, int& j) const {
        const std::int64_t base = id - static_cast<std::int64_t>(n) * (n - 1);
        i = static_cast<int>(base % n);
        j = static_cast<int>(base / n);
    }
};

struct ContourSegment {
    std::int64_t e1, e2;
};

// Refined crossing on a grid edge: bisection of the clamped field along
// the edge, seeded by the sign change between the stored corner values.
State refine_crossing(const MarchGrid& g, const ScalarField& field,
                      const std::vector<double>& values, std::int64_t edge) {
    int i, j;
    State a, b;
    double fa, fb;
    if (g.is_h(edge)) {
        g.h_coords(edge, i, j);
        a = State{g.delta_at(i), g.x_at(j)};
        b = State{g.delta_at(i + 1), g.x_at(j)};
        fa = values[static_cast<std::size_t>(j) * g.n + i];
        fb = values[static_cast<std::size_t>(j) * g.n + i + 1];
    } else {
        g.v_coords(edge, i, j);
        a = State{g.delta_at(i), g.x_at(j)};
        b = State{g.delta_at(i), g.x_at(j + 1)};
        fa = values[static_cast<std::size_t>(j) * g.n + i];
        fb = values[static_cast<std::size_t>(j + 1) * g.n + i];
    }
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    double lo = 0.0, hi = 1.0;
    const auto at = [&](double s) {
        return State{a.delta + s * (b.delta - a.delta), a.x + s * (b.x - a.x)};
    };
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = field(at(mid));
        if (std::abs(fm) <= 1e-13 || mid == lo || mid == hi) {
            return at(mid);
        }
        if (std::signbit(fm) == std::signbit(fa)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return at(0.5 * (lo + hi));
}

// Window border of a boundary-row/column edge, for frame stitching.
enum class Border { Bottom, Right, Top, Left, None };

Border border_of(const MarchGrid& g, std::int64_t edge) {
    int i, j;
    if (g.is_h(edge)) {
        g.h_coords(edge, i, j);
        if (j == 0) return Border::Bottom;
        if (j == g.n - 1) return Border::Top;
    } else {
        g.v_coords(edge, i, j);
        if (i == 0) return Border::Left;
        if (i == g.n - 1) return Border::Right;
    }
    return Border::None;
}

// Perimeter coordinate, counterclockwise from (delta_lo, x_lo).
double perimeter_s(const Window& w, Border border, const State& p) {
    const double width = w.delta_hi - w.delta_lo;
    const double height = w.x_hi - w.x_lo;
    switch (border) {
        case Border::Bottom: return p.delta - w.delta_lo;
        case Border::Right: return width + (p.x - w.x_lo);
        case Border::Top: return width + height + (w.delta_hi - p.delta);
        case Border::Left: return 2.0 * width + height + (w.x_hi - p.x);
        case Border::None: break;
    }
    throw NumericalError("open contour endpoint is not on the window frame");
}

State perimeter_point(const Window& w, double s) {
    const double width = w.delta_hi - w.delta_lo;
    const double height = w.x_hi - w.x_lo;
    double r = std::fmod(s, 2.0 * (width + height));
    if (r < 0.0) r += 2.0 * (width + height);
    if (r <= width) return State{w.delta_lo + r, w.x_lo};
    r -= width;
    if (r <= height) return State{w.delta_hi, w.x_lo + r};
    r -= height;
    if (r <= width) return State{w.delta_hi - r, w.x_hi};
    r -= width;
    return State{w.delta_lo, w.x_hi - r};
}

}  // namespace

Boundary level_set_boundary(const ScalarField& evaluator, double critical_value,
                            const Window& window, const State& inside_point,
                            BoundaryLabel label, const LevelSetOptions& options) {
    if (options.resolution < 2) {
        throw ParameterError("level-set resolution must be >= 2 per axis");
    }
    const MarchGrid g{options.resolution, window};
    const int n = g.n;

    // Clamped field: negative inside the region.
    const auto clamp = options.delta_clamp;
    const ScalarField field = [&evaluator, critical_value, clamp](const State& s) {
        double v = evaluator(s) - critical_value;
        if (clamp) {
            v = std::max(v, s.delta - clamp->hi);
            v = std::max(v, clamp->lo - s.delta);
        }
        return v;
    };

    std::vector<double> values(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            values[static_cast<std::size_t>(j) * n + i] =
                field(State{g.delta_at(i), g.x_at(j)});
        }
    }
    const auto inside = [&](int i, int j) {
        return values[static_cast<std::size_t>(j) * n + i] <= 0.0;
    };

    // Marching squares cases; corners: bit0 = (i,j), bit1 = (i+1,j),
    // bit2 = (i+1,j+1), bit3 = (i,j+1).
    std::vector<ContourSegment> segments;
    for (int j = 0; j + 1 < n; ++j) {
        for (int i = 0; i + 1 < n; ++i) {
            const int code = (inside(i, j) ? 1 : 0) | (inside(i + 1, j) ? 2 : 0) |
                             (inside(i + 1, j + 1) ? 4 : 0) | (inside(i, j + 1) ? 8 : 0);
            if (code == 0 || code == 15) continue;
            const std::int64_t bottom = g.h_edge(i, j);
            const std::int64_t top = g.h_edge(i, j + 1);
            const std::int64_t left = g.v_edge(i, j);
            const std::int64_t right = g.v_edge(i + 1, j);
            switch (code) {
                case 1: case 14: segments.push_back({left, bottom}); break;
                case 2: case 13: segments.push_back({bottom, right}); break;
                case 3: case 12: segments.push_back({left, right}); break;
                case 4: case 11: segments.push_back({top, right}); break;
                case 6: case 9: segments.push_back({bottom, top}); break;
                case 7: case 8: segments.push_back({left, top}); break;
                case 5: case 10: {
                    const bool center_inside =
                        field(State{0.5 * (g.delta_at(i) + g.delta_at(i + 1)),
                                    0.5 * (g.x_at(j) + g.x_at(j + 1))}) <= 0.0;
                    const bool diag_bl = code == 5;  // inside corners on the BL-TR diagonal
                    if (center_inside == diag_bl) {
                        segments.push_back({bottom, right});
                        segments.push_back({left, top});
                    } else {
                        segments.push_back({left, bottom});
                        segments.push_back({top, right});
                    }
                    break;
                }
                default: break;
            }
        }
    }
    if (segments.empty()) {
        throw NumericalError("empty contour: no level crossing inside the window "
                             "(window too small or level out of range)");
    }

    // Adjacency edge -> segment indices.
    std::map<std::int64_t, std::vector<int>> adjacency;
    for (int s = 0; s < static_cast<int>(segments.size()); ++s) {
        adjacency[segments[s].e1].push_back(s);
        adjacency[segments[s].e2].push_back(s);
    }

    // Cached refined crossings.
    std::map<std::int64_t, State> crossings;
    const auto crossing = [&](std::int64_t edge) -> const State& {
        auto it = crossings.find(edge);
        if (it == crossings.end()) {
            it = crossings.emplace(edge, refine_crossing(g, field, values, edge)).first;
        }
        return it->second;
    };

    // Walk chains. Open chains start at frame edges (degree 1).
    std::vector<bool> used(segments.size(), false);
    struct Chain {
        std::vector<std::int64_t> edges;
        bool closed = false;
    };
    std::vector<Chain> chains;

    const auto walk = [&](std::int64_t start_edge, int start_seg) {
        Chain chain;
        chain.edges.push_back(start_edge);
        std::int64_t edge = start_edge;
        int seg = start_seg;
        while (true) {
            used[seg] = true;
            const std::int64_t next_edge =
                segments[seg].e1 == edge ? segments[seg].e2 : segments[seg].e1;
            chain.edges.push_back(next_edge);
            if (next_edge == start_edge) {
                chain.closed = true;
                chain.edges.pop_back();
                break;
            }
            const auto& cands = adjacency[next_edge];
            int next_seg = -1;
            for (int c : cands) {
                if (!used[c]) {
                    next_seg = c;
                    break;
                }
            }
            if (next_seg < 0) break;
            edge = next_edge;
            seg = next_seg;
        }
        chains.push_back(std::move(chain));
    };

    for (const auto& [edge, segs] : adjacency) {
        if (segs.size() == 1 && !used[segs.front()]) walk(edge, segs.front());
    }
    for (int s = 0; s < static_cast<int>(segments.size()); ++s) {
        if (!used[s]) walk(segments[s].e1, s);
    }

    // Assemble candidate polygons: closed chains directly, open chains
    // stitched along the window frame.
    std::vector<Polyline> polygons;
    for (const auto& chain : chains) {
        if (!chain.closed) continue;
        Polyline poly;
        poly.reserve(chain.edges.size());
        for (std::int64_t e : chain.edges) poly.push_back(crossing(e));
        polygons.push_back(std::move(poly));
    }

    struct FrameEnd {
        double s;       // perimeter coordinate
        int chain;
        bool at_front;  // endpoint is chain.edges.front()
    };
    std::vector<FrameEnd> ends;
    std::vector<const Chain*> open_chains;
    for (const auto& chain : chains) {
        if (chain.closed) continue;
        open_chains.push_back(&chain);
        const int idx = static_cast<int>(open_chains.size()) - 1;
        const std::int64_t e_front = chain.edges.front();
        const std::int64_t e_back = chain.edges.back();
        ends.push_back(
            {perimeter_s(window, border_of(g, e_front), crossing(e_front)), idx, true});
        ends.push_back(
            {perimeter_s(window, border_of(g, e_back), crossing(e_back)), idx, false});
    }
    if (!ends.empty()) {
        std::sort(ends.begin(), ends.end(),
                  [](const FrameEnd& a, const FrameEnd& b) { return a.s < b.s; });
        const double perim =
            2.0 * ((window.delta_hi - window.delta_lo) + (window.x_hi - window.x_lo));

        // Arc k spans ends[k] -> ends[k+1]; inside iff the field is
        // non-positive at its midpoint.
        const int m_ends = static_cast<int>(ends.size());
        std::vector<bool> arc_inside(m_ends);
        for (int k = 0; k < m_ends; ++k) {
            const double s0 = ends[k].s;
            double s1 = ends[(k + 1) % m_ends].s;
            if (s1 <= s0) s1 += perim;
            arc_inside[k] = field(perimeter_point(window, 0.5 * (s0 + s1))) <= 0.0;
        }

        // Frame corners, for inserting into arc paths.
        const double width = window.delta_hi - window.delta_lo;
        const double height = window.x_hi - window.x_lo;
        const std::array<double, 4> corner_s{width, width + height,
                                             2.0 * width + height, perim};

        std::vector<bool> chain_done(open_chains.size(), false);
        for (std::size_t start = 0; start < open_chains.size(); ++start) {
            if (chain_done[start]) continue;
            Polyline poly;
            int chain_idx = static_cast<int>(start);
            bool enter_front = true;
            while (true) {
                chain_done[chain_idx] = true;
                const Chain& chain = *open_chains[chain_idx];
                if (enter_front) {
                    for (std::int64_t e : chain.edges) poly.push_back(crossing(e));
                } else {
                    for (auto it = chain.edges.rbegin(); it != chain.edges.rend(); ++it) {
                        poly.push_back(crossing(*it));
                    }
                }
                // Locate the exit endpoint in the sorted list.
                const bool exit_front = !enter_front;
                int k_exit = -1;
                for (int k = 0; k < m_ends; ++k) {
                    if (ends[k].chain == chain_idx && ends[k].at_front == exit_front) {
                        k_exit = k;
                        break;
                    }
                }
                if (k_exit < 0) {
                    throw NumericalError("frame stitching failed to locate an endpoint");
                }
                // Follow the inside frame arc adjacent to the exit; exactly
                // one of the two should be inside.
                const int arc_fwd = k_exit;
                const int arc_bwd = (k_exit + m_ends - 1) % m_ends;
                int arc;
                if (arc_inside[arc_fwd] && !arc_inside[arc_bwd]) {
                    arc = arc_fwd;
                } else if (!arc_inside[arc_fwd] && arc_inside[arc_bwd]) {
                    arc = arc_bwd;
                } else {
                    throw NumericalError("frame stitching: ambiguous inside arc");
                }
                const int k_next = arc == arc_fwd ? (arc + 1) % m_ends : arc;
                // Corner points along the arc keep the frame geometry.
                {
                    double s0 = ends[arc].s;
                    double s1 = ends[(arc + 1) % m_ends].s;
                    if (s1 <= s0) s1 += perim;
                    std::vector<double> cs_list;
                    for (double cs : corner_s) {
                        for (double shift : {0.0, perim}) {
                            const double c = cs + shift;
                            if (c > s0 + 1e-12 && c < s1 - 1e-12) cs_list.push_back(c);
                        }
                    }
                    std::sort(cs_list.begin(), cs_list.end());
                    if (arc != arc_fwd) {
                        std::reverse(cs_list.begin(), cs_list.end());
                    }
                    for (double c : cs_list) {
                        poly.push_back(perimeter_point(window, c));
                    }
                }
                const int next_chain = ends[k_next].chain;
                if (chain_done[next_chain]) {
                    // Back at an already-consumed chain: the loop is closed.
                    break;
                }
                chain_idx = next_chain;
                enter_front = ends[k_next].at_front;
            }
            polygons.push_back(std::move(poly));
        }
    }

    // Pick the polygon enclosing the inside point (smallest such).
    const Polyline* best = nullptr;
    double best_area = 0.0;
    for (const auto& poly : polygons) {
        if (poly.size() < 3) continue;
        if (point_in_polygon(poly, inside_point)) {
            const double area = polygon_area(poly);
            if (best == nullptr || area < best_area) {
                best = &poly;
                best_area = area;
            }
        }
    }
    if (best == nullptr) {
        throw NumericalError(
            "no closed level-set component encloses the reference point "
            "(window too small?)");
    }

    Boundary boundary;
    boundary.label = label;
    boundary.closed = true;
    boundary.critical_value = critical_value;
    boundary.segments.push_back(*best);
    return boundary;
}

Boundary lf_estimate_boundary(const LyapunovContext& ctx, const Window& window,
                              const LevelSetOptions& options) {
    LevelSetOptions opts = options;
    if (!opts.delta_clamp) opts.delta_clamp = ctx.window;
    const ScalarField f = [&ctx](const State& s) { return ctx.value(s); };
    return level_set_boundary(f, ctx.v_cr, window, State{ctx.delta_sep, 0.0},
                              BoundaryLabel::LfEstimate, opts);
}

Boundary eac_estimate_boundary(const EacContext& ctx, const Window& window,
                               const LevelSetOptions& options) {
    LevelSetOptions opts = options;
    if (!opts.delta_clamp) {
        opts.delta_clamp = DeltaInterval{ctx.saddle_lo, ctx.saddle_hi};
    }
    const ScalarField f = [&ctx](const State& s) { return ctx.energy(s); };
    return level_set_boundary(f, ctx.e_cr, window, State{ctx.delta_ref, 0.0},
                              BoundaryLabel::EacEstimate, opts);
}

ContainmentReport containment_report(const Boundary& inner,
                                     const ClassificationGrid& oracle) {
    const Polyline& poly = inner.polygon();
    ContainmentReport report;
    for (int i = 0; i < oracle.n_delta; ++i) {
        for (int j = 0; j < oracle.n_x; ++j) {
            const State pt{oracle.delta_at(i), oracle.x_at(j)};
            if (!point_in_polygon(poly, pt)) continue;
            ++report.n_inside;
            switch (oracle.at(i, j)) {
                case CellLabel::Stable: ++report.n_stable_inside; break;
                case CellLabel::Unstable:
                    ++report.n_unstable_inside;
                    report.violations.push_back(pt);
                    break;
                case CellLabel::Inconclusive: ++report.n_inconclusive_inside; break;
            }
        }
    }
    report.fraction_contained =
        report.n_inside == 0 ? 0.0
                             : static_cast<double>(report.n_stable_inside) /
                                   static_cast<double>(report.n_inside);
    return report;
}

}  // namespace gss
