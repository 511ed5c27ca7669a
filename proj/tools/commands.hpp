#pragma once

// Subcommand implementations for the cyclproj command-line tool.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "cyclproj/cyclproj.hpp"
#include "cyclproj/invariants.hpp"
#include "cyclproj/trace_io.hpp"

namespace cyclproj::cli {

enum ExitCode : int { kOk = 0, kFailed = 1, kUsage = 2, kNumerical = 3 };

inline constexpr const char* kOutputDirEnv = "CYCLPROJ_OUTPUT_DIR";

struct RunConfig {
  std::string scenario;
  ScenarioParams params;
  std::size_t n = 1000;
  std::size_t power = 1;          // iterate P^power
  std::string start;              // start label; empty picks the recommended start
  std::vector<double> at;         // explicit start coordinates, overrides `start`
  double tol = 1e-12;
  bool generic = false;           // force the golden-section segment projector
  std::string out;                // trace path; empty uses $CYCLPROJ_OUTPUT_DIR/<scenario>.<format>
  std::string format = "csv";
  std::size_t stride = 0;
  double r_tol = kDefaultRTol;
  double tail_fraction = kDefaultTailFraction;
  std::optional<std::pair<std::size_t, std::size_t>> window;  // rate-fit window
};

inline void validate(const RunConfig& c) {
  if (c.n < 1) throw UsageError("--n must be at least 1");
  if (c.power < 1) throw UsageError("--power must be at least 1");
  if (!(c.tol > 0.0)) throw UsageError("--tol must be positive");
  if (c.format != "csv" && c.format != "json") throw UsageError("--format must be csv or json");
  if (c.window && (c.window->first < 1 || c.window->second < c.window->first)) {
    throw UsageError("--window must satisfy 1 <= lo <= hi");
  }
}

inline nlohmann::json params_json(const RunConfig& c) {
  nlohmann::json p;
  if (c.scenario == "tripod") p["k"] = c.params.k;
  if (c.scenario == "plane-two-sets") p["epsilon"] = c.params.epsilon;
  if (c.scenario == "twisted-chain") {
    p["alpha"] = c.params.alpha;
    p["radius"] = c.params.radius;
    p["circumference"] = c.params.circumference;
  }
  if (c.scenario == "plane-two-lines") p["theta"] = c.params.theta;
  if (c.power != 1) p["power"] = c.power;
  return p;
}

inline std::filesystem::path default_output(const RunConfig& c) {
  const char* dir = std::getenv(kOutputDirEnv);
  std::filesystem::path base = dir != nullptr && *dir != '\0' ? dir : ".";
  return base / (c.scenario + "." + c.format);
}

/// A finished run: its summary plus a writer for the trace in the requested format.
struct RunOutcome {
  RunSummary summary;
  std::function<void(std::ostream&, const std::string& format)> write_trace;
  std::vector<double> r;  // r_n for n = 0 .. cycles-1
};

template <class Sc>
typename Sc::Point resolve_start(const Sc& sc, const RunConfig& c) {
  using Point = typename Sc::Point;
  if (!c.at.empty()) {
    const std::size_t want = Coordinates<Point>::names().size();
    if (c.at.size() != want) {
      throw UsageError("--at needs " + std::to_string(want) + " coordinates for scenario " + sc.name);
    }
    Point p = Coordinates<Point>::from(c.at);
    if constexpr (std::is_same_v<Point, ChainPoint>) p = sc.space.point(p.disc, p.height);
    sc.space.validate(p);
    return p;
  }
  return c.start.empty() ? sc.starts.front().point : sc.start(c.start);
}

inline RunOutcome execute(const RunConfig& c) {
  validate(c);
  const AnyScenario scenario = build_scenario(c.scenario, c.params);
  return std::visit(
      [&](const auto& sc) -> RunOutcome {
        using Sc = std::decay_t<decltype(sc)>;
        using Set = typename Sc::SetType;
        IterateOptions opts;
        opts.projection.tol = c.tol;
        opts.projection.prefer_exact = !c.generic;
        opts.stride = c.stride;
        const std::vector<Set> sets = repeat_sets(std::span<const Set>(sc.sets), c.power);
        auto trace = std::make_shared<const Trace<typename Sc::Point>>(
            iterate(sc.space, sets, resolve_start(sc, c), c.n, opts));

        RunOutcome out;
        RunSummary& s = out.summary;
        s.scenario = c.scenario;
        s.params = params_json(c);
        s.n = trace->cycles;
        s.aborted = trace->aborted;
        s.failure = trace->failure;
        out.r.assign(trace->r.begin(), trace->r.begin() + trace->cycles);
        if (trace->cycles > 0) s.verdict = verdict(*trace, c.r_tol, c.tail_fraction);
        for (double r : out.r) s.sum_r_sq += r * r;
        if (c.window) s.slope = rate_fit(std::span<const double>(out.r), c.window->first, c.window->second).slope;

        out.write_trace = [trace, summary = s](std::ostream& os, const std::string& format) {
          if (format == "csv") {
            write_csv(os, *trace);
          } else {
            nlohmann::json j = to_json(summary);
            j["trace"] = trace_rows_json(*trace);
            os << j.dump(2) << '\n';
          }
        };
        return out;
      },
      scenario);
}

inline std::string summary_line(const RunSummary& s) {
  std::ostringstream os;
  os.precision(12);
  os << "scenario=" << s.scenario << " n=" << s.n << " verdict=" << to_string(s.verdict.classification)
     << " r=" << s.verdict.final_r << " liminf_r=" << s.verdict.liminf_r << " sum_r_sq=" << s.sum_r_sq;
  if (s.slope) os << " slope=" << *s.slope;
  if (s.aborted) os << " ABORTED: " << s.failure;
  return os.str();
}

// ---------------------------------------------------------------------------

inline int cmd_run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  RunOutcome res;
  try {
    res = execute(c);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
  const std::filesystem::path path = c.out.empty() ? default_output(c) : std::filesystem::path(c.out);
  if (path != "-") {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream file(path);
    if (!file) {
      err << "error: cannot write " << path << '\n';
      return kFailed;
    }
    res.write_trace(file, c.format);
  }
  out << summary_line(res.summary) << '\n';
  out << to_json(res.summary).dump() << '\n';
  if (res.summary.aborted) {
    err << "trace is partial: " << res.summary.failure << '\n';
    return kNumerical;
  }
  return kOk;
}

inline int cmd_rate(RunConfig c, std::ostream& out, std::ostream& err) {
  if (!c.window) {
    err << "error: rate needs --window lo hi\n";
    return kUsage;
  }
  c.n = std::max(c.n, c.window->second + 1);
  RunOutcome res;
  try {
    res = execute(c);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
  if (res.summary.aborted) {
    err << "trace is partial: " << res.summary.failure << '\n';
    return kNumerical;
  }
  const auto [lo, hi] = *c.window;
  const RateFit fit = rate_fit(std::span<const double>(res.r), lo, hi);
  out.precision(12);
  out << "scenario=" << c.scenario << " window=[" << lo << "," << hi << "] slope=" << fit.slope
      << " intercept=" << fit.intercept << " used=" << fit.used << " excluded=" << fit.excluded << '\n';
  out << "sqrt(n)*r_n: n=" << lo << " -> " << std::sqrt(static_cast<double>(lo)) * res.r[lo] << ", n=" << hi
      << " -> " << std::sqrt(static_cast<double>(hi)) * res.r[hi] << '\n';
  if (fit.excluded > 0) err << "warning: " << fit.excluded << " zero steps excluded from the fit\n";
  return kOk;
}

/// Rate fit over the r column of a CSV trace (rows may be sparse).
inline int cmd_rate_csv(const std::string& path, std::pair<std::size_t, std::size_t> window, std::ostream& out,
                        std::ostream& err) {
  std::ifstream in(path);
  if (!in) {
    err << "error: cannot read " << path << '\n';
    return kUsage;
  }
  CsvTable table;
  try {
    table = read_csv(in);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  if (table.header.size() < 2 || table.header[1] != "r") {
    err << "error: second CSV column must be r\n";
    return kUsage;
  }
  const std::size_t max_n = table.n.empty() ? 0 : *std::max_element(table.n.begin(), table.n.end());
  std::vector<double> r(max_n + 1, kUndefined);
  for (std::size_t i = 0; i < table.n.size(); ++i) r[table.n[i]] = table.columns[0][i];
  // Rows missing from a decimated file are not counted as zero steps.
  std::size_t skipped = 0;
  for (std::size_t n = window.first; n <= window.second && n < r.size(); ++n) skipped += std::isnan(r[n]);
  RateFit fit;
  try {
    fit = rate_fit(std::span<const double>(r), window.first, window.second);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  out.precision(12);
  out << "file=" << path << " window=[" << window.first << "," << window.second << "] slope=" << fit.slope
      << " intercept=" << fit.intercept << " used=" << fit.used << '\n';
  if (fit.excluded > skipped) err << "warning: " << fit.excluded - skipped << " zero steps excluded from the fit\n";
  return kOk;
}

inline int cmd_verify(const std::string& suite, std::ostream& out, std::ostream& err) {
  static const std::vector<std::string> suites{"metric", "projections", "two-set", "counterexamples"};
  if (suite != "all" && std::find(suites.begin(), suites.end(), suite) == suites.end()) {
    err << "error: unknown suite '" << suite << "' (metric, projections, two-set, counterexamples, all)\n";
    return kUsage;
  }
  std::vector<SuiteReport> reports;
  auto want = [&](const char* name) { return suite == "all" || suite == name; };
  if (want("metric")) reports.push_back(verify_metric());
  if (want("projections")) reports.push_back(verify_projections());
  if (want("two-set")) reports.push_back(verify_two_set());
  if (want("counterexamples")) reports.push_back(verify_counterexamples());

  bool ok = true;
  out.precision(6);
  for (const auto& rep : reports) {
    for (const auto& check : rep.checks) {
      out << (check.passed() ? "PASS " : "FAIL ") << rep.suite << '/' << check.name << " worst_margin=" << check.worst
          << " samples=" << check.samples;
      if (!check.passed()) out << " seed=" << check.seed;
      out << '\n';
      ok = ok && check.passed();
    }
  }
  out << (ok ? "verify: all checks passed" : "verify: FAILURES") << '\n';
  return ok ? kOk : kFailed;
}

// ---------------------------------------------------------------------------
// Sweeps

struct GridAxis {
  std::string param;
  std::vector<double> values;
};

inline GridAxis parse_grid_axis(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) throw UsageError("grid axis must look like name=v1,v2,...");
  GridAxis axis{spec.substr(0, eq), {}};
  std::stringstream ss(spec.substr(eq + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      axis.values.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw UsageError("grid value '" + item + "' is not a number");
    }
  }
  return axis;
}

inline void apply_param(RunConfig& c, const std::string& name, double v) {
  if (name == "epsilon") c.params.epsilon = v;
  else if (name == "alpha") c.params.alpha = v;
  else if (name == "radius") c.params.radius = v;
  else if (name == "circumference") c.params.circumference = v;
  else if (name == "theta") c.params.theta = v;
  else if (name == "k") c.params.k = static_cast<std::size_t>(v);
  else if (name == "n") c.n = static_cast<std::size_t>(v);
  else if (name == "power") c.power = static_cast<std::size_t>(v);
  else throw UsageError("unknown sweep parameter '" + name + "'");
}

/// Cartesian product of the axes, last axis varying fastest.
inline std::vector<RunConfig> expand_grid(const RunConfig& base, const std::vector<GridAxis>& axes) {
  if (axes.empty()) return {};
  std::size_t total = 1;
  for (const auto& a : axes) total *= a.values.size();
  std::vector<RunConfig> runs;
  runs.reserve(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    RunConfig c = base;
    std::size_t rest = idx;
    for (std::size_t i = axes.size(); i-- > 0;) {
      apply_param(c, axes[i].param, axes[i].values[rest % axes[i].values.size()]);
      rest /= axes[i].values.size();
    }
    runs.push_back(std::move(c));
  }
  return runs;
}

inline nlohmann::json sweep_entry(std::size_t index, const RunConfig& c) {
  nlohmann::json entry;
  try {
    entry = to_json(execute(c).summary);
  } catch (const std::exception& e) {
    entry = {{"scenario", c.scenario}, {"params", params_json(c)}, {"error", e.what()}};
  }
  entry["index"] = index;
  return entry;
}

inline int cmd_sweep(const RunConfig& base, const std::vector<std::string>& grid_specs, std::ostream& out,
                     std::ostream& err, std::size_t jobs = 0) {
  std::vector<RunConfig> runs;
  try {
    std::vector<GridAxis> axes;
    for (const auto& spec : grid_specs) axes.push_back(parse_grid_axis(spec));
    runs = expand_grid(base, axes);
    build_scenario(base.scenario, base.params);
    validate(base);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  std::vector<nlohmann::json> results(runs.size());
  for (std::size_t begin = 0; begin < runs.size(); begin += jobs) {
    const std::size_t end = std::min(runs.size(), begin + jobs);
    std::vector<std::future<nlohmann::json>> pending;
    for (std::size_t i = begin; i < end; ++i) {
      pending.push_back(std::async(std::launch::async, [&runs, i] { return sweep_entry(i, runs[i]); }));
    }
    for (std::size_t i = begin; i < end; ++i) results[i] = pending[i - begin].get();
  }

  nlohmann::json merged = nlohmann::json::array();
  bool failed = false;
  for (auto& r : results) {
    failed = failed || r.contains("error") || r.value("aborted", false);
    merged.push_back(std::move(r));
  }
  const std::string text = merged.dump(2);
  if (base.out.empty() || base.out == "-") {
    out << text << '\n';
  } else {
    std::ofstream file(base.out);
    if (!file) {
      err << "error: cannot write " << base.out << '\n';
      return kFailed;
    }
    file << text << '\n';
    out << "wrote " << merged.size() << " runs to " << base.out << '\n';
  }
  if (failed) err << "sweep: some runs failed\n";
  return failed ? kFailed : kOk;
}

// ---------------------------------------------------------------------------
// Config files: key=value lines merged under the command-line flags.

inline std::map<std::string, std::string> read_config(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError("config line without '=': " + line);
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

/*
 * Returns argv with config entries appended as flags, skipping keys already
 * given on the command line. Boolean flags take true/false values.
 */
inline std::vector<std::string> merge_config(std::vector<std::string> args,
                                             const std::map<std::string, std::string>& kv,
                                             const std::vector<std::string>& boolean_flags) {
  auto given = [&](const std::string& key) {
    const std::string flag = "--" + key;
    return std::any_of(args.begin(), args.end(),
                       [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
  };
  std::vector<std::string> extra;
  for (const auto& [key, value] : kv) {
    if (given(key)) continue;
    if (std::find(boolean_flags.begin(), boolean_flags.end(), key) != boolean_flags.end()) {
      if (value == "true" || value == "1") extra.push_back("--" + key);
      continue;
    }
    extra.push_back("--" + key);
    std::stringstream ss(value);
    std::string tok;
    while (ss >> tok) extra.push_back(tok);
  }
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

}  // namespace cyclproj::cli
