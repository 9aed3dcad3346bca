#include "sweepdescent/io.hpp"

#include <cmath>

#include <fmt/format.h>

namespace sweepdescent {

std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{}", v);
}

std::string header_comment(std::uint64_t config_hash, std::uint64_t seed) {
  return fmt::format("# sweepdescent {} config={:016x} seed={}", kVersion, config_hash, seed);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& tr, const std::string& comment) {
  if (!comment.empty()) os << comment << '\n';
  const Eigen::Index d = tr.samples.empty() ? 0 : tr.samples.front().x.size();
  os << "step,t,level";
  for (Eigen::Index i = 0; i < d; ++i) os << ",x" << i;
  os << ",f,speed,dist_to_boundary\n";
  for (std::size_t j = 0; j < tr.samples.size(); ++j) {
    const auto& s = tr.samples[j];
    double speed = 0.0;
    if (j > 0) {
      const double dt = std::abs(s.t - tr.samples[j - 1].t);
      speed = dt > 0.0 ? (s.x - tr.samples[j - 1].x).norm() / dt : 0.0;
    }
    os << j << ',' << format_double(s.t) << ',' << format_double(s.level);
    for (Eigen::Index i = 0; i < d; ++i) os << ',' << format_double(s.x[i]);
    os << ',' << format_double(s.f) << ',' << format_double(speed) << ','
       << format_double(s.dist_to_boundary) << '\n';
  }
}

nlohmann::json to_json(const Point& p) {
  nlohmann::json a = nlohmann::json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) a.push_back(p[i]);
  return a;
}

nlohmann::json to_json(const CheckRecord& c) {
  nlohmann::json j;
  j["name"] = c.name;
  j["property"] = c.anchor;
  j["status"] = to_string(c.status);
  j["margin"] = std::isfinite(c.margin) ? nlohmann::json(c.margin) : nlohmann::json(format_double(c.margin));
  j["detail"] = c.detail;
  nlohmann::json w = nlohmann::json::array();
  for (const Point& p : c.witness) w.push_back(to_json(p));
  j["witness"] = w;
  return j;
}

nlohmann::json report_to_json(const DiagnosticsReport& r, const nlohmann::json& config,
                              std::uint64_t config_hash, std::uint64_t seed) {
  nlohmann::json j;
  j["_header"] = {{"tool", "sweepdescent"},
                  {"version", std::string(kVersion)},
                  {"config_hash", fmt::format("{:016x}", config_hash)},
                  {"seed", seed}};
  auto opt = [](const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  j["constants"] = {{"ell_hat", opt(r.constants.ell_hat)},
                    {"K_hat", opt(r.constants.K_hat)},
                    {"r_hat", opt(r.constants.r_hat)},
                    {"L_hat", opt(r.constants.L_hat)}};
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  j["checks"] = checks;
  j["notes"] = r.notes;
  j["config"] = config;
  j["seed"] = seed;
  j["passed"] = !r.any_failed();
  return j;
}

}  // namespace sweepdescent
