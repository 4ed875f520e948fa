#include "ndncdn/exp/experiments.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace ndncdn::exp;

namespace {

constexpr int EXIT_OK = 0;
constexpr int EXIT_RUNTIME = 1;
constexpr int EXIT_USAGE = 2;

/// Usage or configuration problem, reported with exit code 2.
class UsageError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct Invocation
{
  std::string config;
  std::string out = "results";
  std::optional<uint64_t> seed;
  std::optional<int> reps;
  int jobs = 1;
  bool trace = false;
  std::string plane;
  int verbosity = 0;
};

ScenarioConfig
prepare(const Invocation& inv)
{
  auto cfg = loadConfig(inv.config);
  if (inv.seed) {
    cfg.seed = *inv.seed;
  }
  if (inv.reps) {
    cfg.repetitions = *inv.reps;
  }
  if (inv.plane == "ndn") {
    cfg.plane = PlaneSelection::Ndn;
  }
  else if (inv.plane == "http") {
    cfg.plane = PlaneSelection::Http;
  }
  else if (inv.plane == "both") {
    cfg.plane = PlaneSelection::Both;
  }
  validate(cfg);
  return cfg;
}

void
ensureDirectory(const fs::path& dir)
{
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw UsageError("cannot create output directory " + dir.string());
  }
  fs::path probe = dir / ".write-test";
  {
    std::ofstream os(probe);
    if (!os) {
      throw UsageError("output directory is not writable: " + dir.string());
    }
  }
  fs::remove(probe, ec);
}

void
writeFile(const fs::path& path, const std::function<void(std::ostream&)>& fill)
{
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw std::runtime_error("cannot write " + path.string());
  }
  fill(os);
  if (!os) {
    throw std::runtime_error("write failed: " + path.string());
  }
}

int
doRun(const Invocation& inv, bool traceOnly)
{
  auto cfg = prepare(inv);
  if (traceOnly) {
    cfg.repetitions = 1;
  }
  fs::path out(inv.out);
  ensureDirectory(out);

  RunOptions opts;
  opts.jobs = inv.jobs;
  if (inv.trace || traceOnly) {
    fs::path traces = out / "traces";
    ensureDirectory(traces);
    opts.traceDir = traces.string();
  }

  auto records = runExperiment(cfg, opts);
  std::string stem = std::string("experiment_") + static_cast<char>(cfg.experiment);
  writeFile(out / (stem + ".csv"), [&] (std::ostream& os) { writeCsv(os, records); });
  auto summary = summarize(records);
  writeFile(out / (stem + "_summary.csv"),
            [&] (std::ostream& os) { writeSummaryCsv(os, summary); });
  writeFile(out / (stem + ".dat"),
            [&] (std::ostream& os) { writePlotData(os, cfg, records); });

  size_t failed = 0;
  for (const auto& r : records) {
    failed += r.success ? 0 : 1;
    if (inv.verbosity > 0 && !r.success) {
      std::cerr << r.plane << ' ' << r.sizeBytes << ' ' << r.mode << " seed " << r.seed
                << ": " << r.failure << '\n';
    }
  }
  std::cout << "experiment " << static_cast<char>(cfg.experiment) << ": " << records.size()
            << " runs, " << failed << " unsuccessful, " << summary.rows.size()
            << " summary rows";
  if (summary.emptyGroups > 0) {
    std::cout << " (" << summary.emptyGroups << " groups without a successful run omitted)";
  }
  std::cout << "\nwrote " << (out / (stem + ".csv")).string() << '\n';
  if (opts.traceDir) {
    std::cout << "traces in " << *opts.traceDir << '\n';
  }
  return EXIT_OK;
}

} // namespace

int
main(int argc, char** argv)
{
  CLI::App app{"Discrete-event NDN vs HTTP CDN simulator"};
  app.require_subcommand(1);
  Invocation runInv;
  Invocation traceInv;
  Invocation checkInv;

  auto addRunFlags = [] (CLI::App* sub, Invocation& inv, bool withReps) {
    sub->add_option("--config", inv.config, "scenario JSON file")->required();
    sub->add_option("--out", inv.out, "output directory")->capture_default_str();
    sub->add_option("--seed", inv.seed, "base seed override");
    if (withReps) {
      sub->add_option("--reps", inv.reps, "repetitions override")->check(CLI::PositiveNumber);
      sub->add_option("--jobs", inv.jobs, "parallel runs")->check(CLI::PositiveNumber);
      sub->add_flag("--trace", inv.trace, "dump per-run event traces");
    }
    sub->add_option("--plane", inv.plane, "ndn, http or both")
      ->check(CLI::IsMember({"ndn", "http", "both"}));
    sub->add_flag("-v,--verbose", inv.verbosity, "report failed runs");
  };

  auto* run = app.add_subcommand("run", "run an experiment and write CSV and plot data");
  addRunFlags(run, runInv, true);
  auto* trace = app.add_subcommand("trace", "run one repetition and dump its event traces");
  addRunFlags(trace, traceInv, false);
  auto* list = app.add_subcommand("list-experiments", "list the experiments");
  auto* check = app.add_subcommand("validate-config", "check a scenario file");
  check->add_option("config", checkInv.config, "scenario JSON file")->required();

  try {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? EXIT_OK : EXIT_USAGE;
  }

  try {
    if (list->parsed()) {
      for (const auto& info : experimentCatalog()) {
        std::cout << static_cast<char>(info.id) << "  " << info.title << ": " << info.summary
                  << '\n';
      }
      return EXIT_OK;
    }
    if (check->parsed()) {
      auto cfg = loadConfig(checkInv.config);
      std::cout << checkInv.config << ": ok (experiment " << static_cast<char>(cfg.experiment)
                << ", " << planRuns(cfg).size() << " runs)\n";
      return EXIT_OK;
    }
    return trace->parsed() ? doRun(traceInv, true) : doRun(runInv, false);
  }
  catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return EXIT_USAGE;
  }
  catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return EXIT_USAGE;
  }
  catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return EXIT_RUNTIME;
  }
}
