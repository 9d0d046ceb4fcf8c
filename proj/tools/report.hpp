#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "checks.hpp"

namespace msk::cli {

inline constexpr const char* version = "0.1.0";

nlohmann::json report_json(const RunConfig& config, const RunResult& result);

/// Compact JSON with every number written to 17 significant digits.
/// Object keys keep nlohmann's sorted order, so the text is deterministic.
std::string dump_json(const nlohmann::json& doc);

/// One row per check (RFC 4180, CRLF line ends).
void write_report_csv(std::ostream& out, const RunResult& result);

/// Per-point field table: s, t, x, y, z, lambda1, lambda2, K, H, pairing,
/// blaschke_ratio (empty where h is degenerate).
void write_fields_csv(std::ostream& out, const RunResult& result);

std::string format_number(double v);

}  // namespace msk::cli
