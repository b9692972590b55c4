#include "gss/params_io.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

namespace gss {

namespace {

double require_number(const nlohmann::json& doc, const std::string& key) {
    if (!doc.contains(key)) {
        throw ParameterError("missing required key \"" + key + "\"");
    }
    if (!doc[key].is_number()) {
        throw ParameterError("key \"" + key + "\" must be a number");
    }
    return doc[key].get<double>();
}

double number_or(const nlohmann::json& doc, const std::string& key, double fallback) {
    if (!doc.contains(key)) return fallback;
    if (!doc[key].is_number()) {
        throw ParameterError("key \"" + key + "\" must be a number");
    }
    return doc[key].get<double>();
}

}  // namespace

PhysicalParams params_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) {
        throw ParameterError("parameter document must be a JSON object");
    }
    static const std::set<std::string> known{
        "schema", "u_g_pu", "scr", "x_g_pu", "r_g_pu",
        "i_sd_pu", "i_sq_pu", "k_pn", "k_in", "f_g_hz"};
    for (const auto& item : doc.items()) {
        if (known.count(item.key()) == 0) {
            throw ParameterError("unknown key \"" + item.key() + "\" in parameter file");
        }
    }
    if (!doc.contains("schema") || !doc["schema"].is_number_integer() ||
        doc["schema"].get<int>() != 1) {
        throw ParameterError("parameter file must declare \"schema\": 1");
    }

    const bool has_scr = doc.contains("scr");
    const bool has_xg = doc.contains("x_g_pu");
    if (has_scr == has_xg) {
        throw ParameterError("exactly one of \"scr\" or \"x_g_pu\" must be given");
    }

    PhysicalParams p;
    if (has_scr) {
        const double scr = require_number(doc, "scr");
        if (!(scr > 0.0)) throw ParameterError("scr must be positive");
        p.x_g_pu = 1.0 / scr;
    } else {
        p.x_g_pu = require_number(doc, "x_g_pu");
    }
    p.u_g_pu = number_or(doc, "u_g_pu", 1.0);
    p.r_g_pu = number_or(doc, "r_g_pu", 0.0);
    p.i_sd_pu = require_number(doc, "i_sd_pu");
    p.i_sq_pu = number_or(doc, "i_sq_pu", 0.0);
    p.k_pn = require_number(doc, "k_pn");
    p.k_in = require_number(doc, "k_in");
    p.omega_g = 2.0 * M_PI * number_or(doc, "f_g_hz", 50.0);
    p.validate();
    return p;
}

PhysicalParams load_params_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParameterError("cannot open parameter file: " + path);
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParameterError("invalid JSON in " + path + ": " + e.what());
    }
    return params_from_json(doc);
}

nlohmann::json params_to_json(const PhysicalParams& p) {
    return nlohmann::json{{"schema", 1},
                          {"u_g_pu", p.u_g_pu},
                          {"x_g_pu", p.x_g_pu},
                          {"r_g_pu", p.r_g_pu},
                          {"i_sd_pu", p.i_sd_pu},
                          {"i_sq_pu", p.i_sq_pu},
                          {"k_pn", p.k_pn},
                          {"k_in", p.k_in},
                          {"f_g_hz", p.omega_g / (2.0 * M_PI)}};
}

}  // namespace gss
