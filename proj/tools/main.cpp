#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"

namespace {

using namespace cyclproj;
using namespace cyclproj::cli;

void add_run_options(CLI::App* cmd, RunConfig& c, std::vector<std::size_t>& window) {
  cmd->add_option("scenario", c.scenario, "tripod | plane-two-sets | twisted-chain | plane-two-lines")->required();
  cmd->add_option("--n", c.n, "number of cycles");
  cmd->add_option("--power", c.power, "iterate P^power instead of P");
  cmd->add_option("--start", c.start, "start label (endpoint, midpoint, center, default, boundary, origin)");
  cmd->add_option("--at", c.at, "explicit start coordinates, in CSV column order")->delimiter(',');
  cmd->add_option("--k", c.params.k, "number of sets for the tripod scenario");
  cmd->add_option("--epsilon", c.params.epsilon, "exponent of the plane epigraph");
  cmd->add_option("--alpha", c.params.alpha, "twist angle of the chain (radians)");
  cmd->add_option("--radius", c.params.radius, "disc radius of the chain");
  cmd->add_option("--circumference", c.params.circumference, "core length of the chain");
  cmd->add_option("--theta", c.params.theta, "angle between the two lines");
  cmd->add_option("--tol", c.tol, "projection tolerance");
  cmd->add_flag("--generic", c.generic, "use the golden-section segment projector");
  cmd->add_option("--out", c.out, "output path ('-' for none)");
  cmd->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--stride", c.stride, "keep every stride-th iterate (0: automatic)");
  cmd->add_option("--r-tol", c.r_tol, "verdict threshold on r");
  cmd->add_option("--tail", c.tail_fraction, "fraction of steps inspected by the verdict");
  cmd->add_option("--window", window, "rate-fit window: lo hi")->expected(2);
}

void apply_window(RunConfig& c, const std::vector<std::size_t>& window) {
  if (window.size() == 2) c.window = std::make_pair(window[0], window[1]);
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      continue;
    }
    std::ifstream in(path);
    if (!in) {
      std::cerr << "error: cannot read config file " << path << '\n';
      return kUsage;
    }
    try {
      args = merge_config(args, read_config(in), {"generic"});
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kUsage;
    }
    break;
  }

  CLI::App app{"Cyclic projections onto convex sets in CAT(0) spaces"};
  app.require_subcommand(1);

  RunConfig run_cfg;
  RunConfig rate_cfg;
  RunConfig sweep_cfg;
  std::vector<std::size_t> run_window;
  std::vector<std::size_t> rate_window;
  std::vector<std::size_t> sweep_window;
  std::string suite;
  std::string rate_csv;
  std::vector<std::string> grid;
  std::size_t jobs = 0;

  auto* run = app.add_subcommand("run", "iterate a scenario and write its trace");
  add_run_options(run, run_cfg, run_window);

  auto* verify = app.add_subcommand("verify", "run an invariant suite");
  verify->add_option("suite", suite, "metric | projections | two-set | counterexamples | all")->required();

  auto* rate = app.add_subcommand("rate", "fit the decay exponent of r_n");
  add_run_options(rate, rate_cfg, rate_window);
  rate->get_option("scenario")->required(false);
  rate->add_option("--csv", rate_csv, "fit the r column of an existing CSV trace instead of running");

  auto* sweep = app.add_subcommand("sweep", "run a scenario over a parameter grid");
  add_run_options(sweep, sweep_cfg, sweep_window);
  sweep->add_option("--grid", grid, "axis as name=v1,v2,... (repeatable)");
  sweep->add_option("--jobs", jobs, "concurrent runs (0: hardware concurrency)");

  try {
    // CLI11 consumes the argument vector from the back.
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*run) {
      apply_window(run_cfg, run_window);
      return cmd_run(run_cfg, std::cout, std::cerr);
    }
    if (*verify) return cmd_verify(suite, std::cout, std::cerr);
    if (*rate) {
      apply_window(rate_cfg, rate_window);
      if (!rate_csv.empty()) {
        if (!rate_cfg.window) {
          std::cerr << "error: rate needs --window lo hi\n";
          return kUsage;
        }
        return cmd_rate_csv(rate_csv, *rate_cfg.window, std::cout, std::cerr);
      }
      if (rate_cfg.scenario.empty()) {
        std::cerr << "error: rate needs a scenario or --csv\n";
        return kUsage;
      }
      return cmd_rate(rate_cfg, std::cout, std::cerr);
    }
    if (*sweep) {
      apply_window(sweep_cfg, sweep_window);
      return cmd_sweep(sweep_cfg, grid, std::cout, std::cerr, jobs);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailed;
  }
  return kUsage;
}
