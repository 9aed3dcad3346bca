#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "sweepdescent/verification.hpp"

namespace sweepdescent {

inline constexpr std::string_view kVersion = "0.1.0";

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view data);

/// Shortest round-trip decimal representation, '.' separator, "inf"/"-inf"/"nan".
std::string format_double(double v);

/// "# sweepdescent <version> config=<16 hex digits> seed=<seed>".
std::string header_comment(std::uint64_t config_hash, std::uint64_t seed);

/// CSV with header step,t,level,x0..x{d-1},f,speed,dist_to_boundary, preceded
/// by `comment` when it is not empty. speed is |x_j - x_{j-1}| / |t_j - t_{j-1}|
/// (0 on the first row).
void write_trajectory_csv(std::ostream& os, const Trajectory& tr, const std::string& comment);

nlohmann::json to_json(const Point& p);
nlohmann::json to_json(const CheckRecord& c);

/// Report document: {"_header": {...}, "checks": [...], "config": ..., "constants": {...},
/// "notes": [...], "seed": ...}. Keys are sorted, so output is deterministic.
nlohmann::json report_to_json(const DiagnosticsReport& r, const nlohmann::json& config,
                              std::uint64_t config_hash, std::uint64_t seed);

}  // namespace sweepdescent
