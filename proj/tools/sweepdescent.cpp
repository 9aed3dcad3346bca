// sweepdescent: descent curves of quasiconvex functions by sublevel sweeping.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "sweepdescent/errors.hpp"
#include "sweepdescent/geometry.hpp"
#include "sweepdescent/io.hpp"
#include "sweepdescent/verification.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace sweepdescent;

namespace {

constexpr int kOk = 0;
constexpr int kChecksFailed = 1;
constexpr int kConfigError = 2;
constexpr int kNumericalFailure = 3;

struct Options {
  std::string function = "norm";
  int dim = 2;
  std::optional<double> epsilon;
  double alpha2 = 2.0;
  double T = 1.0;
  int k = 1000;
  std::string x0;
  std::uint64_t seed = 0;
  std::string output_dir = ".";
  bool reverse = false;
  std::optional<double> r_hat;
  std::optional<double> k_hat;
  std::string window = "0.5:1.5";
  std::string levels;
  double min_radius = 0.1;
  int grid = 16;
  std::string grid_center;
  std::string grid_arc;
  std::string points;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse " + what + " from '" + s + "'");
  }
}

Point parse_point(const std::string& s, int dim, const std::string& what) {
  const auto parts = split(s, ',');
  if (static_cast<int>(parts.size()) != dim)
    throw ConfigError(fmt::format("{} needs {} comma-separated coordinates, got '{}'", what, dim, s));
  Point p(dim);
  for (int i = 0; i < dim; ++i) p[i] = to_double(parts[static_cast<std::size_t>(i)], what);
  return p;
}

std::pair<double, double> parse_range(const std::string& s, const std::string& what) {
  const auto parts = split(s, ':');
  if (parts.size() != 2) throw ConfigError(what + " must look like a:b");
  return {to_double(parts[0], what), to_double(parts[1], what)};
}

// Options given on the command line win; the rest come from the config file.
void register_common(CLI::App* app, Options& o, std::string& config_path) {
  app->add_option("--config", config_path, "JSON config file (flags override it)");
  app->add_option("--function", o.function, "gallery function name");
  app->add_option("--dim", o.dim, "dimension for norm/constant");
  app->add_option("--epsilon", o.epsilon, "regularization radius");
  app->add_option("--alpha2", o.alpha2, "starting level");
  app->add_option("--T", o.T, "level drop (horizon)");
  app->add_option("--k", o.k, "number of steps");
  app->add_option("--seed", o.seed, "random seed");
  app->add_option("--output-dir", o.output_dir, "directory for output files");
}

json echo(const Options& o) {
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  return json{{"function", o.function},   {"dim", o.dim},
              {"epsilon", opt(o.epsilon)}, {"alpha2", o.alpha2},
              {"T", o.T},                 {"k", o.k},
              {"x0", o.x0},               {"seed", o.seed},
              {"output_dir", o.output_dir}, {"reverse", o.reverse},
              {"r_hat", opt(o.r_hat)},     {"k_hat", opt(o.k_hat)},
              {"window", o.window},       {"levels", o.levels},
              {"min_radius", o.min_radius}, {"grid", o.grid},
              {"grid_center", o.grid_center}, {"grid_arc", o.grid_arc},
              {"points", o.points}};
}

// Fills options that were not given as flags from the config file.
void apply_config(const std::string& path, CLI::App* app, Options& o) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!cfg.is_object()) throw ConfigError("config must be a JSON object");
  const json known = echo(Options{});
  for (auto it = cfg.begin(); it != cfg.end(); ++it)
    if (!known.contains(it.key())) throw ConfigError("unknown config key '" + it.key() + "'");

  auto given = [&](const std::string& flag) {
    try {
      return app->get_option(flag)->count() > 0;
    } catch (const CLI::OptionNotFound&) {
      return false;
    }
  };
  auto take = [&](const char* key, const std::string& flag, auto& field) {
    if (!cfg.contains(key) || given(flag)) return;
    try {
      using T = std::decay_t<decltype(field)>;
      if constexpr (std::is_same_v<T, std::optional<double>>) {
        if (cfg[key].is_null()) field.reset(); else field = cfg[key].template get<double>();
      } else {
        field = cfg[key].template get<T>();
      }
    } catch (const json::exception&) {
      throw ConfigError(std::string("config key '") + key + "' has the wrong type");
    }
  };
  take("function", "--function", o.function);
  take("dim", "--dim", o.dim);
  take("epsilon", "--epsilon", o.epsilon);
  take("alpha2", "--alpha2", o.alpha2);
  take("T", "--T", o.T);
  take("k", "--k", o.k);
  take("x0", "--x0", o.x0);
  take("seed", "--seed", o.seed);
  take("output_dir", "--output-dir", o.output_dir);
  take("reverse", "--reverse", o.reverse);
  take("r_hat", "--r-hat", o.r_hat);
  take("k_hat", "--k-hat", o.k_hat);
  take("window", "--window", o.window);
  take("levels", "--levels", o.levels);
  take("min_radius", "--min-radius", o.min_radius);
  take("grid", "--grid", o.grid);
  take("grid_center", "--grid-center", o.grid_center);
  take("grid_arc", "--grid-arc", o.grid_arc);
  take("points", "--points", o.points);
}

FunctionPtr build_function(const Options& o) {
  FunctionPtr f = make_function(o.function, o.dim);
  if (o.epsilon) {
    if (!(*o.epsilon > 0.0)) throw ConfigError("--epsilon must be positive");
    f = regularize(f, *o.epsilon);
  }
  return f;
}

struct Output {
  fs::path dir;
  std::string comment;
  json config;

  void write(const std::string& name, const std::string& content) const {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + (dir / name).string());
    out << content;
  }
};

// The output directory does not change any result, so it is left out of the hash.
std::uint64_t config_hash(const json& config) {
  json h = config;
  h.erase("output_dir");
  return fnv1a(h.dump());
}

Output prepare_output(const Options& o) {
  Output out;
  out.dir = o.output_dir;
  std::error_code ec;
  fs::create_directories(out.dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + o.output_dir + "'");
  out.config = echo(o);
  out.comment = header_comment(config_hash(out.config), o.seed);
  out.write("config.json", out.config.dump(2) + "\n");
  return out;
}

std::string csv(const Trajectory& tr, const std::string& comment) {
  std::ostringstream os;
  write_trajectory_csv(os, tr, comment);
  return os.str();
}

double moving_map_constant(const QuasiconvexFunction& f, const Options& o) {
  if (o.k_hat) return *o.k_hat;
  const double a1 = o.alpha2 - o.T;
  const SlopeBound sb = annulus_slope_bound(f, a1, o.alpha2, 3, 0.05);
  if (!sb.pass) throw ConfigError("slope lower bound on the level window is not positive; pass --k-hat");
  return 1.0 / sb.ell_hat;
}

int cmd_descend(const Options& o) {
  const FunctionPtr f = build_function(o);
  if (o.x0.empty()) throw ConfigError("descend needs --x0");
  const Point x0 = parse_point(o.x0, f->dim(), "--x0");
  if (o.reverse && !o.epsilon && !o.r_hat)
    throw Unsupported(
        "reverse sweeping needs the complement of every sublevel set to be prox-regular; "
        "regularize the function (--epsilon) or supply a validated radius (--r-hat)");
  const Output out = prepare_output(o);
  SweepingConfig cfg;
  cfg.alpha2 = o.alpha2;
  cfg.T = o.T;
  cfg.k = o.k;
  cfg.seed = o.seed;
  cfg.r_hat = o.r_hat;
  const Trajectory fw = forward_catching_up(*f, x0, cfg);
  out.write("forward.csv", csv(fw, out.comment));

  double residual = 0.0, max_speed = 0.0;
  for (std::size_t j = 1; j < fw.samples.size(); ++j) {
    const auto& s = fw.samples[j];
    if (static_cast<int>(j) > fw.waiting_steps) residual = std::max(residual, std::abs(s.f - s.level));
    max_speed = std::max(max_speed, (s.x - fw.samples[j - 1].x).norm() / cfg.step());
  }
  auto show = [](const Point& p) {
    std::string s;
    for (Eigen::Index i = 0; i < p.size(); ++i) s += (i ? "," : "") + format_double(p[i]);
    return s;
  };
  std::cout << "forward endpoint: " << show(fw.end()) << "\n"
            << "value-decay residual: " << format_double(residual) << "\n"
            << "max speed: " << format_double(max_speed) << "\n"
            << "waiting steps: " << fw.waiting_steps << "\n";

  if (o.reverse && o.T > 0.0) {
    cfg.K_hat = moving_map_constant(*f, o);
    const Trajectory bw = reverse_catching_up(*f, fw.end(), o.T, cfg);
    out.write("reverse.csv", csv(bw, out.comment));
    std::cout << "reverse endpoint: " << show(bw.end()) << "\n"
              << "round-trip error: " << format_double((bw.end() - x0).norm()) << "\n";
  }
  return kOk;
}

int cmd_verify(const Options& o) {
  const FunctionPtr f = build_function(o);
  SuiteConfig sc;
  sc.f = f;
  sc.seed = o.seed;
  sc.k = std::min(o.k, 400);
  if (!o.levels.empty()) {
    const auto parts = split(o.levels, ':');
    if (parts.size() != 3) throw ConfigError("--levels must look like a:b:n");
    sc.alpha1 = to_double(parts[0], "--levels");
    sc.alpha2 = to_double(parts[1], "--levels");
    sc.hypotheses.n_levels = static_cast<int>(to_double(parts[2], "--levels"));
    if (sc.hypotheses.n_levels < 2) throw ConfigError("--levels needs n >= 2");
  } else {
    std::tie(sc.alpha1, sc.alpha2) = parse_range(o.window, "--window");
  }
  sc.hypotheses.min_radius = o.min_radius;
  const Output out = prepare_output(o);
  const DiagnosticsReport report = run_suite(sc);
  const json doc = report_to_json(report, out.config, config_hash(out.config), o.seed);
  out.write("report.json", doc.dump(2) + "\n");
  for (const auto& c : report.checks)
    std::cout << fmt::format("{:<28} {:<8} {}\n", c.name, to_string(c.status), c.detail);
  auto show = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string("n/a"); };
  std::cout << "constants: ell_hat=" << show(report.constants.ell_hat)
            << " K_hat=" << show(report.constants.K_hat) << " r_hat=" << show(report.constants.r_hat)
            << " L_hat=" << show(report.constants.L_hat) << "\n";
  return report.any_failed() ? kChecksFailed : kOk;
}

int cmd_foliate(const Options& o) {
  const FunctionPtr f = build_function(o);
  if (!o.epsilon) throw ConfigError("foliate needs a regularized function (--epsilon)");
  if (o.grid < 1) throw ConfigError("--grid must be >= 1");
  const SetPtr M = f->sublevel(o.alpha2);
  const int d = f->dim();
  if (d != 2) throw ConfigError("foliate grids are only defined in the plane");
  const Point c = o.grid_center.empty() ? M->interior_point() : parse_point(o.grid_center, d, "--grid-center");
  if (!M->contains(c)) throw ConfigError("--grid-center must lie inside [f <= alpha2]");
  double a0 = 0.0, a1 = 2.0 * std::numbers::pi;
  bool closed = true;
  if (!o.grid_arc.empty()) {
    std::tie(a0, a1) = parse_range(o.grid_arc, "--grid-arc");
    closed = false;
  }
  std::vector<Point> grid;
  for (int i = 0; i < o.grid; ++i) {
    const double frac = closed ? static_cast<double>(i) / o.grid
                               : (o.grid == 1 ? 0.5 : static_cast<double>(i) / (o.grid - 1));
    const double th = a0 + (a1 - a0) * frac;
    const Point v = make_point({std::cos(th), std::sin(th)});
    grid.push_back(c + ray_exit(*M, c, v) * v);
  }
  const Output out = prepare_output(o);
  SweepingConfig cfg;
  cfg.alpha2 = o.alpha2;
  cfg.T = o.T;
  cfg.k = o.k;
  cfg.seed = o.seed;
  const FlowMap fm = flow_map(*f, grid, cfg);

  json index;
  index["_header"] = {{"tool", "sweepdescent"},
                      {"version", std::string(kVersion)},
                      {"config_hash", fmt::format("{:016x}", config_hash(out.config))},
                      {"seed", o.seed}};
  index["config"] = out.config;
  json entries = json::array();
  std::vector<Point> ends;
  int failures = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    json e{{"index", i}, {"m", to_json(grid[i])}};
    if (fm.trajectories[i]) {
      const std::string name = fmt::format("trajectory_{:04d}.csv", i);
      out.write(name, csv(*fm.trajectories[i], out.comment));
      e["file"] = name;
      e["endpoint"] = to_json(fm.trajectories[i]->end());
      ends.push_back(fm.trajectories[i]->end());
    } else {
      e["error"] = fm.errors[i];
      ++failures;
    }
    entries.push_back(e);
  }
  double min_sep = kInf;
  for (std::size_t i = 0; i < ends.size(); ++i)
    for (std::size_t j = i + 1; j < ends.size(); ++j) min_sep = std::min(min_sep, (ends[i] - ends[j]).norm());
  index["trajectories"] = entries;
  index["grid"] = {{"size", grid.size()}, {"center", to_json(c)}, {"arc", {a0, a1}}};
  index["min_endpoint_separation"] = std::isfinite(min_sep) ? json(min_sep) : json(nullptr);
  index["endpoints_distinct"] = !(min_sep <= 0.0);
  out.write("index.json", index.dump(2) + "\n");  // written last
  std::cout << grid.size() - static_cast<std::size_t>(failures) << " trajectories written to "
            << out.dir.string() << "\n"
            << "min endpoint separation: " << (std::isfinite(min_sep) ? format_double(min_sep) : "n/a")
            << "\n";
  return failures > 0 ? kNumericalFailure : kOk;
}

int cmd_gallery() {
  for (const auto& e : gallery())
    std::cout << e.name << "\n  parameters: " << e.parameters << "\n  " << e.description << "\n";
  return kOk;
}

int cmd_regularize(const Options& o) {
  if (!o.epsilon) throw ConfigError("regularize needs --epsilon");
  const FunctionPtr f = make_function(o.function, o.dim);
  const auto fe = regularize(f, *o.epsilon);
  if (o.points.empty()) throw ConfigError("regularize needs --points x,y;x,y;...");
  std::vector<Point> pts;
  for (const auto& s : split(o.points, ';'))
    if (!s.empty()) pts.push_back(parse_point(s, f->dim(), "--points"));
  const Output out = prepare_output(o);
  std::ostringstream os;
  os << out.comment << "\n";
  for (int i = 0; i < f->dim(); ++i) os << (i ? "," : "") << "x" << i;
  os << ",f,f_eps";
  for (int i = 0; i < f->dim(); ++i) os << ",z" << i;
  os << "\n";
  for (const Point& x : pts) {
    for (Eigen::Index i = 0; i < x.size(); ++i) os << (i ? "," : "") << format_double(x[i]);
    const double v = fe->eval(x);
    os << ',' << format_double(f->eval(x)) << ',' << format_double(v);
    if (std::isfinite(v)) {
      const Point z = base_point(*fe, x);
      for (Eigen::Index i = 0; i < z.size(); ++i) os << ',' << format_double(z[i]);
    } else {
      for (int i = 0; i < f->dim(); ++i) os << ",nan";
    }
    os << "\n";
  }
  out.write("regularize.csv", os.str());
  std::cout << os.str();
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Descent curves of quasiconvex functions by sublevel sweeping"};
  app.require_subcommand(1);
  Options o;
  std::string config_path;

  auto* descend = app.add_subcommand("descend", "forward (and reverse) catching-up run");
  register_common(descend, o, config_path);
  descend->add_option("--x0", o.x0, "start point, comma-separated");
  descend->add_flag("--reverse", o.reverse, "run the reverse process back from the endpoint");
  descend->add_option("--r-hat", o.r_hat, "validated prox-regularity radius");
  descend->add_option("--k-hat", o.k_hat, "moving-map Lipschitz constant");

  auto* verify = app.add_subcommand("verify", "run the verification suite");
  register_common(verify, o, config_path);
  verify->add_option("--window", o.window, "level window a:b");
  verify->add_option("--levels", o.levels, "levels a:b:n (overrides --window)");
  verify->add_option("--min-radius", o.min_radius, "required prox-regularity radius");

  auto* foliate = app.add_subcommand("foliate", "flow map from a boundary grid");
  register_common(foliate, o, config_path);
  foliate->add_option("--grid", o.grid, "number of grid points");
  foliate->add_option("--grid-center", o.grid_center, "center of the angular grid");
  foliate->add_option("--grid-arc", o.grid_arc, "angle range a:b in radians");

  auto* gal = app.add_subcommand("gallery", "list gallery functions");

  auto* reg = app.add_subcommand("regularize", "evaluate f_eps at points");
  register_common(reg, o, config_path);
  reg->add_option("--points", o.points, "points x,y;x,y;...");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    if (!config_path.empty()) apply_config(config_path, sub, o);
    if (sub == gal) return cmd_gallery();
    if (sub == descend) return cmd_descend(o);
    if (sub == verify) return cmd_verify(o);
    if (sub == foliate) return cmd_foliate(o);
    if (sub == reg) return cmd_regularize(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const Unsupported& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const ThetaGuard& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const LevelUnderflow& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  }
  return kConfigError;
}
