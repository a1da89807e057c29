#pragma once

#include <string>
#include <vector>

#include "hllg/analysis.hpp"
#include "hllg/config.hpp"

namespace hllg {

// Scripted multi-run study description: base configuration plus one swept
// parameter. Everything is reproducible bit-exactly from this spec + seed.
struct SweepSpec {
    std::string experiment;      // small_data | epsilon | conservative | threshold | uniqueness
    std::vector<double> values;  // swept values (meaning depends on the experiment)
    Config base;
    std::vector<std::string> checks;  // per-run analysis checks (small_data)
    std::string output_key = "sweep";

    void validate() const;
};

struct ExperimentSummary {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    bool ok = true;
    std::vector<std::string> notes;

    std::string to_csv() const;
    std::string to_text() const;
};

// Theorem-style small-data study: per amplitude, monotone estimates for
// k = 1..n+1, decay and L2-growth checks; failures above the smallness
// threshold are reported as outside-hypothesis rather than failures.
ExperimentSummary exp_small_data(const Config& base, const std::vector<double>& amplitudes,
                                 int threads = 1, const std::string& out_dir = "");

// eps-continuation toward the unregularized flow: pairwise sup_t H^(n/2)
// differences down a decreasing eps list (0 = the hllg limit candidate).
ExperimentSummary exp_epsilon_sweep(const Config& base, const std::vector<double>& eps_list,
                                    const std::string& out_dir = "");

// Conservative half-wave run: relative energy drift and its dt order.
ExperimentSummary exp_conservative(const Config& base, const std::vector<double>& dt_list,
                                   const std::string& out_dir = "");

// Amplitude sweep of great-circle data across the E = pi threshold; reports
// per-energy classification {decayed, concentrating, inconclusive} with a
// refinement-agreement requirement.
ExperimentSummary exp_threshold_probe(const Config& base, const std::vector<double>& energies,
                                      const std::string& out_dir = "");

// Two-trajectory uniqueness/stability study over a delta0 list, plus the
// ETDRK2-vs-RK4 cross-integrator order check.
ExperimentSummary exp_uniqueness(const Config& base, const std::vector<double>& delta0_list,
                                 int threads = 1, const std::string& out_dir = "");

// Dispatch from a sweep spec (the CLI entry point).
ExperimentSummary run_sweep(const SweepSpec& spec, int threads, const std::string& out_dir);

// Sweep-spec file: the config sections plus a [sweep] section with
// experiment, values, checks and output_key keys.
ParseResult parse_sweep_spec(const std::string& text, SweepSpec& out);

}  // namespace hllg
