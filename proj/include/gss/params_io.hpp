// JSON parameter ingestion for the physical model.
//
// Schema (version 1):
//   {
//     "schema": 1,
//     "u_g_pu": 1.0,            // optional, default 1.0
//     "scr": 2.0,               // exactly one of scr / x_g_pu (x_g_pu = 1/scr)
//     "x_g_pu": 0.5,
//     "r_g_pu": 0.0,            // optional, default 0.0
//     "i_sd_pu": 1.0,           // required
//     "i_sq_pu": 0.0,           // optional, default 0.0
//     "k_pn": 20.0,             // required
//     "k_in": 200.0,            // required
//     "f_g_hz": 50.0            // optional, default 50.0
//   }
// Unknown keys are rejected.
#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "gss/model.hpp"

namespace gss {

PhysicalParams params_from_json(const nlohmann::json& doc);

// Parses the file as JSON and applies params_from_json. I/O and parse
// failures surface as ParameterError.
PhysicalParams load_params_file(const std::string& path);

nlohmann::json params_to_json(const PhysicalParams& p);

}  // namespace gss
