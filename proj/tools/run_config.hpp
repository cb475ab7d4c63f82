// Copyright (c) the meyerslab authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace meyerslab::cli {

/// Fully typed run configuration; every flag of every subcommand lives here
/// so a run can be serialized, validated, and replayed.
struct RunConfig {
    std::string command;

    std::string field = "example";
    bool mu_given = false;
    double mu = 0.5;

    int rings = 8;
    int sectors = 32;
    double grading = 1.0;
    int refine = 0;

    std::string rhs = "zero"; // zero | const:<fx>,<fy> | manufactured
    std::string bc = "zero";  // zero | oracle
    double tol = 1e-10;
    int quad = 3;

    int grid_n = 21;
    int radii_min_exp = 6;
    int bmo_quad = 64;

    double p_min = 2.0;
    double p_max = 8.0;
    double p_step = 0.25;

    std::string mode = "lp";              // threshold: lp | holder
    std::string case_name = "manufactured"; // convergence: manufactured | oracle
    int levels = 3;

    std::uint64_t seed = 0;
    bool json_output = false;

    std::string out;
    std::string mesh_out;
    std::string csv;
    std::string out_dir = "reproduce-out";

    nlohmann::json to_json() const;
    static RunConfig from_json(const nlohmann::json& j);

    /// Returns human-readable problems; empty means the config is runnable.
    std::vector<std::string> validate() const;

    /// Parses "const:<fx>,<fy>"; returns false on malformed input.
    bool rhs_components(double* fx, double* fy) const;
};

inline nlohmann::json RunConfig::to_json() const {
    return nlohmann::json{
        {"command", command},
        {"field", field},
        {"mu_given", mu_given},
        {"mu", mu},
        {"rings", rings},
        {"sectors", sectors},
        {"grading", grading},
        {"refine", refine},
        {"rhs", rhs},
        {"bc", bc},
        {"tol", tol},
        {"quad", quad},
        {"grid_n", grid_n},
        {"radii_min_exp", radii_min_exp},
        {"bmo_quad", bmo_quad},
        {"p_min", p_min},
        {"p_max", p_max},
        {"p_step", p_step},
        {"mode", mode},
        {"case", case_name},
        {"levels", levels},
        {"seed", seed},
        {"json_output", json_output},
        {"out", out},
        {"mesh_out", mesh_out},
        {"csv", csv},
        {"out_dir", out_dir},
    };
}

inline RunConfig RunConfig::from_json(const nlohmann::json& j) {
    RunConfig c;
    c.command = j.at("command").get<std::string>();
    c.field = j.at("field").get<std::string>();
    c.mu_given = j.at("mu_given").get<bool>();
    c.mu = j.at("mu").get<double>();
    c.rings = j.at("rings").get<int>();
    c.sectors = j.at("sectors").get<int>();
    c.grading = j.at("grading").get<double>();
    c.refine = j.at("refine").get<int>();
    c.rhs = j.at("rhs").get<std::string>();
    c.bc = j.at("bc").get<std::string>();
    c.tol = j.at("tol").get<double>();
    c.quad = j.at("quad").get<int>();
    c.grid_n = j.at("grid_n").get<int>();
    c.radii_min_exp = j.at("radii_min_exp").get<int>();
    c.bmo_quad = j.at("bmo_quad").get<int>();
    c.p_min = j.at("p_min").get<double>();
    c.p_max = j.at("p_max").get<double>();
    c.p_step = j.at("p_step").get<double>();
    c.mode = j.at("mode").get<std::string>();
    c.case_name = j.at("case").get<std::string>();
    c.levels = j.at("levels").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.json_output = j.at("json_output").get<bool>();
    c.out = j.at("out").get<std::string>();
    c.mesh_out = j.at("mesh_out").get<std::string>();
    c.csv = j.at("csv").get<std::string>();
    c.out_dir = j.at("out_dir").get<std::string>();
    return c;
}

inline bool RunConfig::rhs_components(double* fx, double* fy) const {
    if (rhs.rfind("const:", 0) != 0) return false;
    const std::string body = rhs.substr(6);
    const auto comma = body.find(',');
    if (comma == std::string::npos) return false;
    try {
        std::size_t used = 0;
        *fx = std::stod(body.substr(0, comma), &used);
        if (used != comma) return false;
        *fy = std::stod(body.substr(comma + 1), &used);
        if (used != body.size() - comma - 1) return false;
    } catch (...) {
        return false;
    }
    return true;
}

inline std::vector<std::string> RunConfig::validate() const {
    std::vector<std::string> errors;
    const std::vector<std::string> commands = {
        "solve", "verify-oracle", "scan-meyers", "bmo",
        "threshold", "convergence", "reproduce"};
    bool known = false;
    for (const auto& c : commands) known |= (c == command);
    if (!known) errors.push_back("unknown command '" + command + "'");

    if (field != "identity" && field != "example")
        errors.push_back("--field must be 'identity' or 'example'");
    if (field == "example" && (mu <= 0.0 || mu >= 1.0))
        errors.push_back("--mu must lie in (0,1)");
    if (rings < 2) errors.push_back("--rings must be >= 2");
    if (sectors < 8 || sectors % 4 != 0)
        errors.push_back("--sectors must be >= 8 and divisible by 4");
    if (grading < 1.0) errors.push_back("--grading must be >= 1");
    if (refine < 0 || refine > 10) errors.push_back("--refine must lie in [0,10]");
    if (tol <= 0.0) errors.push_back("--tol must be positive");
    if (quad != 1 && quad != 3 && quad != 6)
        errors.push_back("--quad must be one of 1, 3, 6");

    if (rhs != "zero" && rhs != "manufactured") {
        double fx = 0.0, fy = 0.0;
        if (!rhs_components(&fx, &fy))
            errors.push_back("--rhs must be zero, manufactured, or const:<fx>,<fy>");
    }
    if (bc != "zero" && bc != "oracle")
        errors.push_back("--bc must be 'zero' or 'oracle'");
    if (bc == "oracle" && field == "example" && !mu_given)
        errors.push_back("--bc oracle requires --mu");

    if (command == "threshold" && mode != "lp" && mode != "holder")
        errors.push_back("--mode must be 'lp' or 'holder'");
    if ((command == "threshold" || command == "bmo" || command == "verify-oracle" ||
         command == "scan-meyers") &&
        field == "example" && !mu_given)
        errors.push_back("command '" + command + "' requires --mu");
    if (command == "convergence" && case_name != "manufactured" &&
        case_name != "oracle")
        errors.push_back("--case must be 'manufactured' or 'oracle'");
    if (levels < 1 || levels > 8) errors.push_back("--levels must lie in [1,8]");

    if (grid_n < 2) errors.push_back("--grid must be >= 2");
    if (radii_min_exp < 0) errors.push_back("--radii-min-exp must be >= 0");
    if (bmo_quad < 64) errors.push_back("--quad (bmo) must be >= 64");
    if (!(p_min >= 1.0) || !(p_max > p_min) || !(p_step > 0.0))
        errors.push_back("p grid flags must satisfy 1 <= p-min < p-max, p-step > 0");
    return errors;
}

} // namespace meyerslab::cli
