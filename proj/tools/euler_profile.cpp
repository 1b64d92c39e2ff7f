// euler_profile: solve, sweep and inspect minimal-resistance profiles.
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "euler_profile.hpp"

namespace ep = euler_profile;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitRegime = 3;
constexpr int kExitIo = 4;

struct UsageError : ep::Error {
  using ep::Error::Error;
};

struct RunConfig {
  std::string command;
  std::optional<double> a, h, L;
  int samples = 512;
  int grid = 200;
  std::optional<double> l_min, l_max;
  std::optional<int> steps;
  std::optional<int> n;
  std::uint64_t seed = 0;
  std::string out_path;
  std::string format;
  std::string curve_path;
};

// Values from --config fill whatever the command line left unset.
void merge_config(RunConfig& cfg, const json& file, const CLI::App& app) {
  auto unset = [&](const char* flag) { return app.count(flag) == 0; };
  auto take = [&](const char* key, const char* flag, auto& field) {
    if (!file.contains(key) || !unset(flag)) return;
    try {
      field = file[key].get<std::remove_reference_t<decltype(field)>>();
    } catch (const json::exception&) {
      throw UsageError(std::string("config: bad value for '") + key + "'");
    }
  };
  auto take_opt = [&](const char* key, const char* flag, auto& field) {
    if (!file.contains(key) || !unset(flag)) return;
    try {
      field = file[key].get<typename std::remove_reference_t<decltype(field)>::value_type>();
    } catch (const json::exception&) {
      throw UsageError(std::string("config: bad value for '") + key + "'");
    }
  };
  take_opt("a", "--a", cfg.a);
  take_opt("h", "--h", cfg.h);
  take_opt("L", "--L", cfg.L);
  take("samples", "--samples", cfg.samples);
  take("grid", "--grid", cfg.grid);
  take_opt("l_min", "--l-min", cfg.l_min);
  take_opt("l_max", "--l-max", cfg.l_max);
  take_opt("steps", "--steps", cfg.steps);
  take_opt("n", "--n", cfg.n);
  take("seed", "--seed", cfg.seed);
  take("out_path", "--out-path", cfg.out_path);
  take("format", "--format", cfg.format);
}

double need(const std::optional<double>& v, const char* flag) {
  if (!v) throw UsageError(std::string("missing required option ") + flag);
  return *v;
}

ep::Params params_of(const RunConfig& cfg) { return ep::Params(need(cfg.a, "--a"), need(cfg.h, "--h"), need(cfg.L, "--L")); }

std::string format_or(const RunConfig& cfg, const char* fallback) {
  const std::string f = cfg.format.empty() ? fallback : cfg.format;
  if (f != "csv" && f != "json" && f != "svg") throw UsageError("--format must be csv, json or svg");
  return f;
}

// The artifact goes to --out-path (summary on stdout) or to stdout (summary
// on stderr), so piping the artifact stays clean.
void emit(const RunConfig& cfg, const std::string& artifact, const std::string& summary) {
  if (cfg.out_path.empty()) {
    std::fputs(artifact.c_str(), stdout);
    if (!summary.empty()) std::fputs(summary.c_str(), stderr);
  } else {
    ep::io::write_file(cfg.out_path, artifact);
    std::fputs(summary.c_str(), stdout);
  }
}

std::string curve_artifact(const std::string& fmt, const ep::Polyline& c, const ep::Params& p, const json& extra = {}) {
  if (fmt == "csv") return ep::io::polyline_csv(c);
  if (fmt == "svg") return ep::io::profile_svg(c, p);
  json doc = ep::io::polyline_json(c, p);
  for (auto it = extra.begin(); it != extra.end(); ++it) doc[it.key()] = it.value();
  return ep::io::dump(doc);
}

int cmd_solve(const RunConfig& cfg) {
  const ep::Params p = params_of(cfg);
  if (cfg.samples < 2) throw UsageError("--samples must be at least 2");
  const std::string fmt = format_or(cfg, "csv");
  const ep::OptimalProfile prof = ep::assemble_solution(p, cfg.samples);
  const json meta = ep::io::profile_metadata(prof);
  emit(cfg, curve_artifact(fmt, prof.curve, p, json{{"metadata", meta}}), ep::io::dump(meta));
  return 0;
}

unsigned sweep_threads() {
  const char* env = std::getenv("EULER_PROFILE_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) throw UsageError("EULER_PROFILE_THREADS must be a positive integer");
  return static_cast<unsigned>(v);
}

int cmd_sweep(const RunConfig& cfg) {
  const double a = need(cfg.a, "--a");
  const double h = need(cfg.h, "--h");
  if (!(a > 0.0 && h > 0.0)) throw UsageError("--a and --h must be positive");
  const int steps = cfg.steps.value_or(61);
  if (steps < 1) throw UsageError("--steps must be at least 1");
  std::vector<double> grid;
  if (cfg.l_min || cfg.l_max) {
    const double lo = need(cfg.l_min, "--l-min");
    const double hi = need(cfg.l_max, "--l-max");
    if (steps == 1) {
      grid.push_back(lo);
    } else {
      for (int i = 0; i < steps; ++i) grid.push_back(lo + (hi - lo) * i / (steps - 1));
    }
  } else {
    grid = ep::interior_grid(a, h, steps);
  }
  const ep::SweepResult res = ep::fmin_sweep(a, h, grid, sweep_threads());
  std::string notes;
  for (const auto& [L, why] : res.rejected) notes += "rejected L=" + ep::io::num(L) + ": " + why + "\n";
  if (res.rows.empty()) throw UsageError("no valid L in the sweep grid\n" + notes);

  const std::string fmt = format_or(cfg, "csv");
  std::string artifact;
  if (fmt == "csv") {
    artifact = ep::io::sweep_csv(res.rows);
  } else if (fmt == "json") {
    json rows = json::array();
    for (const ep::SweepRow& r : res.rows) rows.push_back({{"L", r.L}, {"F_min", r.f_min}, {"regime", ep::to_string(r.regime)}});
    artifact = ep::io::dump(json{{"a", a}, {"h", h}, {"rows", rows}});
  } else {
    std::vector<ep::Point> pts;
    for (const ep::SweepRow& r : res.rows) pts.push_back({r.L, r.f_min});
    artifact = ep::io::polyline_svg(pts, a * h, h);
  }
  std::fputs(notes.c_str(), stderr);
  emit(cfg, artifact, "");
  return 0;
}

int cmd_eval(const RunConfig& cfg) {
  if (cfg.curve_path.empty()) throw UsageError("eval needs a curve file");
  ep::io::PolylineDocument doc = ep::io::load_polyline(cfg.curve_path);
  std::optional<ep::Params> p = doc.params;
  if (cfg.a || cfg.h || cfg.L) {
    // Flags override the file's parameters one by one.
    const double a = cfg.a ? *cfg.a : (p ? p->a : need(cfg.a, "--a"));
    const double h = cfg.h ? *cfg.h : (p ? p->h : need(cfg.h, "--h"));
    const double L = cfg.L ? *cfg.L : (p ? p->L : need(cfg.L, "--L"));
    p = ep::Params(a, h, L);
  }
  json out{{"F", ep::resistance(doc.curve)}, {"vertices", doc.curve.size()}};
  if (p) {
    const ep::AdmissibilityReport r = ep::check_admissible(doc.curve, *p, 1e-9);
    out["area_below"] = r.area_below;
    out["area_error"] = r.area_error;
    out["endpoints_ok"] = r.endpoints_ok;
    out["in_box"] = r.in_box;
    out["x_monotone"] = r.x_monotone;
    out["y_monotone"] = r.y_monotone;
    out["F_min"] = ep::solve_fmin(*p);
  }
  emit(cfg, ep::io::dump(out), "");
  return 0;
}

int cmd_oracle(const RunConfig& cfg) {
  const ep::Params p = params_of(cfg);
  if (cfg.grid < 16) throw UsageError("--grid must be at least 16");
  const std::string fmt = format_or(cfg, "json");
  const ep::OracleResult r = ep::minimize_relaxed(p, cfg.grid);
  json doc = ep::io::oracle_json(r);
  std::string summary = "relaxed minimum " + ep::io::num(r.f_min) + (r.converged ? "" : " (not converged)") + "\n";
  if (cfg.steps && *cfg.steps > 0) {
    const ep::AnnealResult an = ep::anneal_original(p, *cfg.steps, cfg.seed);
    doc["anneal"] = ep::io::polyline_json(an.curve, p);
    doc["anneal"]["F"] = an.f;
    summary += "annealed F " + ep::io::num(an.f) + "\n";
  }
  if (fmt == "json") {
    emit(cfg, ep::io::dump(doc), summary);
  } else {
    emit(cfg, curve_artifact(fmt, ep::from_graph(r.u), p), summary);
  }
  return 0;
}

int cmd_counterexample(const RunConfig& cfg) {
  const int n = cfg.n.value_or(4);
  if (n < 2) throw UsageError("--n must be at least 2");
  const ep::Params p = ep::sawtooth_params();
  const ep::Polyline c = ep::sawtooth_counterexample(n);
  const std::string summary = "F = " + ep::io::num(ep::resistance(c)) + "  (1/(2(n^2+1)) = " +
                              ep::io::num(1.0 / (2.0 * (static_cast<double>(n) * n + 1.0))) +
                              ")  area = " + ep::io::num(ep::area_below(c, p)) + "\n";
  emit(cfg, curve_artifact(format_or(cfg, "csv"), c, p), summary);
  return 0;
}

int cmd_nonunique(const RunConfig& cfg) {
  const ep::Params p = params_of(cfg);
  const ep::Polyline c = ep::nonunique_profile(p, ep::random_nonunique_spec(p, cfg.n.value_or(4), cfg.seed));
  const std::string summary =
      "F = " + ep::io::num(ep::resistance(c)) + "  (h - a/2 = " + ep::io::num(p.h - p.a / 2.0) + ")\n";
  emit(cfg, curve_artifact(format_or(cfg, "csv"), c, p), summary);
  return 0;
}

int cmd_staircase(const RunConfig& cfg) {
  const ep::Params p = params_of(cfg);
  const ep::Polyline c = ep::staircase_maximizer(p, cfg.n.value_or(8), cfg.seed);
  const std::string summary = "F = " + ep::io::num(ep::resistance(c)) + "  (h = " + ep::io::num(p.h) + ")\n";
  emit(cfg, curve_artifact(format_or(cfg, "csv"), c, p), summary);
  return 0;
}

int cmd_verify() {
  const auto results = ep::verify::run_all();
  std::fputs(ep::verify::format_table(results).c_str(), stdout);
  for (const auto& r : results) {
    if (!r.passed) return 1;
  }
  return 0;
}

int dispatch(const RunConfig& cfg) {
  if (cfg.command == "solve") return cmd_solve(cfg);
  if (cfg.command == "sweep") return cmd_sweep(cfg);
  if (cfg.command == "eval") return cmd_eval(cfg);
  if (cfg.command == "oracle") return cmd_oracle(cfg);
  if (cfg.command == "demo-counterexample") return cmd_counterexample(cfg);
  if (cfg.command == "demo-nonunique") return cmd_nonunique(cfg);
  if (cfg.command == "demo-staircase") return cmd_staircase(cfg);
  return cmd_verify();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimal-resistance profiles under an area constraint"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path;
  app.add_option("--a", cfg.a, "Half-beam a > 0");
  app.add_option("--h", cfg.h, "Height h > 0");
  app.add_option("--L", cfg.L, "Area below the profile, 0 < L < ah");
  app.add_option("--samples", cfg.samples, "Arc samples for solve")->capture_default_str();
  app.add_option("--grid", cfg.grid, "Grid segments for oracle")->capture_default_str();
  app.add_option("--l-min", cfg.l_min, "First L of a sweep");
  app.add_option("--l-max", cfg.l_max, "Last L of a sweep");
  app.add_option("--steps", cfg.steps, "Sweep points; annealing budget for oracle");
  app.add_option("--n", cfg.n, "Sawtooth index, band pieces or staircase steps");
  app.add_option("--seed", cfg.seed, "Seed for random constructions")->capture_default_str();
  app.add_option("--out-path", cfg.out_path, "Output file (default: stdout)");
  app.add_option("--format", cfg.format, "csv, json or svg");
  app.add_option("--config", config_path, "JSON file with default option values");

  const char* commands[][2] = {
      {"solve", "Optimal profile for (a, h, L)"},
      {"sweep", "F_min over a range of L"},
      {"eval", "Resistance and admissibility of a curve file"},
      {"oracle", "Direct minimization of the relaxed functional"},
      {"demo-counterexample", "Sawtooth curves with resistance tending to 0"},
      {"demo-nonunique", "Random optimal profile in the nonuniqueness band"},
      {"demo-staircase", "Monotone staircase attaining resistance h"},
      {"verify", "Run the acceptance checks"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    if (std::string(name) == "eval") sub->add_option("curve", cfg.curve_path, "Curve file (.csv or .json)")->required();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  try {
    if (!config_path.empty()) {
      json file;
      try {
        file = json::parse(ep::io::read_file(config_path));
      } catch (const json::parse_error& e) {
        throw UsageError(std::string("config: ") + e.what());
      }
      if (!file.is_object()) throw UsageError("config: expected a JSON object");
      merge_config(cfg, file, app);
    }
    return dispatch(cfg);
  } catch (const ep::RegimeError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRegime;
  } catch (const ep::IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  } catch (const ep::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
}
