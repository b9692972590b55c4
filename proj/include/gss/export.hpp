// Deterministic artifact serialization: CSV writers for trajectories,
// boundaries and classification grids, and the combined JSON bundle.
// All numeric output goes through one formatter so repeated runs are
// byte-identical.
#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "gss/roa.hpp"
#include "gss/sim.hpp"

namespace gss {

struct Precision {
    bool full = false;  // full: shortest round-trip representation
    int sig = 6;        // significant digits otherwise
};

std::string format_double(double v, const Precision& prec);

// Rounds to the precision's significant digits so raw doubles placed in
// JSON documents honor the output precision policy.
double round_for_output(double v, const Precision& prec);

// Header `t,delta,x` (dimensionless) or `t,delta,x_int` (physical);
// events as leading comment lines `# event,<t>,<label>`.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj,
                          const Precision& prec);

// Header `label,delta,x`; segment breaks as `# segment,<k>` comments.
void write_boundary_csv(std::ostream& out, const Boundary& boundary,
                        const Precision& prec);

// Header `delta,x,label`, row-major over delta then x.
void write_grid_csv(std::ostream& out, const ClassificationGrid& grid,
                    const Precision& prec);

nlohmann::json boundary_to_json(const Boundary& boundary, const Precision& prec);
nlohmann::json trajectory_to_json(const Trajectory& traj, const Precision& prec,
                                  std::size_t max_points = 2000);
nlohmann::json containment_to_json(const ContainmentReport& report,
                                   const Precision& prec);
nlohmann::json verdict_to_json(const Verdict& verdict, const Precision& prec);

// Writes a string to a file, creating parent directories; the content is
// written atomically enough for our purposes (single write).
void write_file(const std::string& path, const std::string& content);

}  // namespace gss
