#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hllg/dynamics.hpp"

namespace hllg {

struct InitialDataSpec {
    std::string kind = "perturbation";  // constant | perturbation | great_circle
    std::vector<double> Q{0.0, 0.0, 1.0};
    double amplitude = 0.05;
    int kmax = 8;
    std::uint64_t seed = 1;
    // great_circle profiles: sine (amplitude), winding (degree), concentrated
    // (degree-1 arctan profile at the given scale).
    std::string profile = "sine";
    int degree = 1;
    double scale = 1.0;

    bool operator==(const InitialDataSpec&) const = default;
};

struct OutputSpec {
    std::string dir = "out";
    std::string prefix = "run";
    std::string snapshots = "final";  // none | final | every:<k>

    bool operator==(const OutputSpec&) const = default;
};

struct ChecksSpec {
    bool energy_identity = false;
    std::vector<int> monotone;  // k values to check
    bool decay = false;
    double decay_threshold = 1e-3;
    bool l2_growth = false;
    double stability = -1.0;  // delta0 for the two-trajectory check; < 0 disables

    bool operator==(const ChecksSpec&) const = default;
};

struct Config {
    SpectralGrid grid;
    SimParams params;
    InitialDataSpec initial;
    OutputSpec output;
    ChecksSpec checks;

    bool operator==(const Config&) const = default;
};

struct ParseIssue {
    int line = 0;
    std::string message;
};

struct ParseResult {
    std::optional<Config> config;
    std::vector<ParseIssue> issues;  // non-empty iff config is absent
};

// Plain-text key-value document with [grid], [params], [initial_data],
// [output], [checks] sections. Unknown keys are rejected; physical values are
// validated against the module invariants at parse time, each error carrying
// its line number.
ParseResult parse_config(const std::string& text);
std::string serialize_config(const Config& cfg);

// Builds the initial data a config describes.
SphereField build_initial_data(const Config& cfg);

}  // namespace hllg
