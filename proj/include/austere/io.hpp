#pragma once

#include <json.hpp>
#include <ostream>
#include <string>

#include "austere/checks.hpp"
#include "austere/surface.hpp"

namespace austere {

inline constexpr const char* kVersion = "1.0.0";

// Configuration / schema violation; carries the JSON field path (exit 2).
struct ConfigError : std::runtime_error {
    std::string path;
    ConfigError(const std::string& p, const std::string& msg)
        : std::runtime_error(p + ": " + msg), path(p) {}
};

// Isotropic-seed constraint violation (exit 3).
struct SeedConstraintError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    nlohmann::json surface_spec;  // echo of the "surface" object
    SamplingSpec sampling;
    ToleranceSet tol;
    Expectations expect;
    std::vector<std::string> checks;  // defaults to known_checks()
};

RunConfig parse_run_config(const nlohmann::json& j);

// Builds the surface described by a "surface" spec object (preset, chain, or
// holomorphic curve). Throws ConfigError / SeedConstraintError.
Surface build_surface_from_spec(const nlohmann::json& spec);

std::uint64_t fnv1a_hash(const std::string& data);
std::string config_hash_hex(const nlohmann::json& j);

nlohmann::json surface_to_json(const Surface& s);
Surface surface_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const std::vector<CheckResult>& results,
                              const nlohmann::json& config_echo, std::uint64_t seed);

// Residual table; see docs/csv_schema.md. Deterministic formatting.
void write_csv(std::ostream& os, const std::vector<CheckResult>& results);

struct SliceSpec {
    std::vector<std::string> free_params;  // "u","v" and optionally "t1".."tk"
    std::vector<int> grid;
    Eigen::VectorXd t_fixed;
    Eigen::Vector2d s_fixed{0.0, 0.0};
    std::array<int, 3> axes{0, 1, 2};
    double u_min = -0.8, u_max = 0.8, v_min = -0.8, v_max = 0.8;
    double t_span = 1.0;  // range for a free t parameter
};

SliceSpec parse_slice_spec(const nlohmann::json& j, int n);

// Tessellated OBJ of the chosen projection with provenance comments.
void export_mesh(std::ostream& os, const Surface& s, const std::string& what,
                 const SliceSpec& slice, const std::string& hash);

}  // namespace austere
