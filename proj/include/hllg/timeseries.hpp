#pragma once

#include <string>
#include <vector>

#include "hllg/diagnostics.hpp"

namespace hllg {

// Fixed-schema CSV: t,E,E_eps,Hs_{s...},dist_L2,dist_Linf,dissipation,drift,
// grad_seminorm. Floats are printed with 17 significant digits so the bytes
// round-trip the doubles exactly.
std::string timeseries_csv(const std::vector<DiagnosticsRow>& rows);
void write_timeseries(const std::vector<DiagnosticsRow>& rows, const std::string& path);
std::vector<DiagnosticsRow> read_timeseries(const std::string& path);

// FNV-1a 64 content hash, hex encoded (artifact references in summaries).
std::string content_hash(const std::string& bytes);
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& bytes);

}  // namespace hllg
