#include <CLI11.hpp>

#include <bbound/builtins.hpp>
#include <bbound/kernels/kernels.hpp>
#include <bbound/parallel.hpp>
#include <bbound/scenario.hpp>

#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

namespace {

// Exit codes: 0 all audits pass, 2 audit failure, 3 construction error,
// 4 config/usage error.
constexpr int kExitConstruction = 3;
constexpr int kExitConfig = 4;

std::string load_scenario_text(const std::string& ref) {
  if (auto builtin = bbound::builtin_scenario(ref)) return *builtin;
  std::ifstream is(ref);
  if (!is)
    throw bbound::ConfigError("scenario '" + ref +
                              "' is neither a built-in name nor a readable file");
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

struct RunOutcome {
  int code = 0;
  std::string out;
  std::string err;
};

RunOutcome run_one(const std::string& ref, const bbound::RunOverrides& ov) {
  RunOutcome rc;
  try {
    auto cfg = bbound::parse_scenario(load_scenario_text(ref));
    auto result = bbound::run_scenario(cfg, ov);
    bbound::write_artifacts(result, ov.out_dir);
    std::ostringstream os;
    os << result.name << ": exit " << result.exit_code << " ("
       << (result.exit_code == 0 ? "all audits pass" : "failures") << ")\n"
       << result.summary_csv;
    rc.out = os.str();
    rc.code = result.exit_code;
  } catch (const bbound::ConfigError& e) {
    rc.err = "config error: " + std::string(e.what()) + "\n";
    rc.code = kExitConfig;
  } catch (const bbound::Error& e) {
    rc.err = "construction error: " + std::string(e.what()) + "\n";
    rc.code = kExitConstruction;
  }
  return rc;
}

// Scenarios in a batch run concurrently up to the worker budget; output is
// flushed in submission order.
int do_run(const std::vector<std::string>& refs,
           const bbound::RunOverrides& ov) {
  const int batch = std::max(1, std::min<int>(bbound::worker_budget(),
                                              int(refs.size())));
  int worst = 0;
  for (std::size_t base = 0; base < refs.size(); base += batch) {
    std::vector<std::future<RunOutcome>> wave;
    for (std::size_t k = base; k < std::min(refs.size(), base + batch); ++k)
      wave.push_back(std::async(batch > 1 ? std::launch::async
                                          : std::launch::deferred,
                                run_one, refs[k], ov));
    for (auto& fut : wave) {
      RunOutcome rc = fut.get();
      std::cout << rc.out;
      std::cerr << rc.err;
      if (rc.code == kExitConfig) return kExitConfig;
      worst = std::max(worst, rc.code);
    }
  }
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"barrier-bound: barrier construction and two-point/gradient "
               "estimate audits for isotropic elliptic equations"};
  app.require_subcommand(0, 1);

  bool list = false;
  app.add_flag("--list", list, "List built-in scenario names and exit");
  std::string dump_name;
  app.add_option("--dump-builtin", dump_name,
                 "Print a built-in scenario config and exit");
  std::vector<std::string> flag_merge;
  app.add_option("--merge", flag_merge,
                 "Merge report bundles into one CSV on stdout (same as the "
                 "merge subcommand)");

  auto* run = app.add_subcommand("run", "Run scenario configs (built-in names "
                                        "or JSON file paths)");
  std::vector<std::string> refs;
  bbound::RunOverrides ov;
  run->add_option("scenarios", refs, "Scenario names or config paths")
      ->required();
  run->add_option("--resolution-override", ov.resolution_override,
                  "Run a single resolution instead of the configured list");
  run->add_option("--sweep-only", ov.sweep_only,
                  "Run only the named sweep (delta | c | resolution)");
  run->add_option("--out", ov.out_dir, "Output directory (default ./out)");
  run->add_flag("--plots", ov.force_plots, "Emit SVG plots");

  auto* merge = app.add_subcommand("merge", "Merge report bundles into one "
                                            "CSV summary");
  std::vector<std::string> merge_paths;
  std::string merge_out;
  merge->add_option("reports", merge_paths, "report.json paths");
  merge->add_option("--out", merge_out, "Write combined CSV here (default "
                                        "stdout)");

  CLI11_PARSE(app, argc, argv);

  if (list) {
    for (const auto& [name, text] : bbound::builtin_scenarios())
      std::cout << name << '\n';
    return 0;
  }
  if (!dump_name.empty()) {
    auto text = bbound::builtin_scenario(dump_name);
    if (!text) {
      std::cerr << "unknown built-in scenario '" << dump_name << "'\n";
      return kExitConfig;
    }
    std::cout << *text << '\n';
    return 0;
  }

  if (run->parsed()) return do_run(refs, ov);

  if (merge->parsed() || !flag_merge.empty()) {
    auto paths = merge->parsed() ? merge_paths : flag_merge;
    if (paths.empty()) {
      std::cerr << "merge: no report paths given\n";
      return kExitConfig;
    }
    auto merged = bbound::merge_reports(paths);
    if (merged.merged == 0) {
      std::cerr << "merge: all inputs unreadable\n";
      return kExitConfig;
    }
    if (merged.skipped > 0)
      std::cerr << "merge: skipped " << merged.skipped
                << " unreadable report(s)\n";
    if (merge_out.empty()) {
      std::cout << merged.csv;
    } else {
      std::ofstream os(merge_out);
      os << merged.csv;
    }
    return 0;
  }

  std::cout << app.help();
  return 0;
}
