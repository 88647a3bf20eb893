#pragma once

#include <optional>
#include <string>
#include <vector>

#include "austere/sampling.hpp"
#include "austere/surface.hpp"

namespace austere {

struct ToleranceSet {
    double exact = 1e-8;       // circle tolerance for exact-jet quantities
    double fd = 1e-5;          // finite-difference-limited residuals
    double eigen_zero = 1e-6;  // zero-eigenvalue threshold (relative)
    double fd_step = 2e-3;     // frame-field differencing step
    double conformal = 1e-12;
    double minimal = 1e-10;
    double circle = 1e-9;
    double pair_eig = 1e-6;    // eigenvalue pair residual, relative to max
    double symplectic = 1e-8;
    double lagrangian_mc = 1e-4;
    double nullity = 1e-7;
    double projector = 1e-10;
    double distinguish = 1e-2;  // floor for negative controls
};

// Expected verdicts for a config; unset fields make the corresponding
// checks record-only.
struct Expectations {
    std::optional<int> isotropy;
    std::optional<bool> austere;
    std::optional<bool> kaehler;
};

struct SamplingSpec {
    SampleBox box;
    int surface_samples = 200;
    int immersion_samples = 50;
    int directions = 16;
    int kaehler_samples = 6;
    int lagrangian_samples = 4;
    int connection_samples = 10;
    int pair_samples = 20;
    std::uint64_t seed = 1;
};

struct CheckRow {
    std::string metric;
    int sample = 0;
    double u = 0, v = 0, t_norm = 0;
    double value = 0;
    double threshold = 0;
    bool pass = true;
};

struct CheckResult {
    std::string name;
    bool pass = true;
    bool evaluated = true;  // false: recorded without an expectation
    double worst = 0;
    int degenerate_count = 0;
    std::string note;
    std::vector<CheckRow> rows;
};

// Raised when a sweep finds no usable samples (CLI exit code 4).
struct AllSamplesDegenerate : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> known_checks();

CheckResult run_check(const std::string& name, const Surface& s, const SamplingSpec& spec,
                      const ToleranceSet& tol, const Expectations& expect);

Expectations preset_expectations(const std::string& preset);

// Bounded worker pool helper; worker count from AUSTERE_WORKERS (default:
// hardware concurrency). Results are written by index, so aggregation is
// deterministic.
void parallel_for(int count, const std::function<void(int)>& fn);

}  // namespace austere
