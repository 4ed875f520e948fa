#ifndef NDNCDN_EXP_EXPERIMENTS_HPP
#define NDNCDN_EXP_EXPERIMENTS_HPP

#include "ndncdn/exp/config.hpp"
#include "ndncdn/exp/metrics.hpp"

#include <functional>
#include <optional>
#include <ostream>
#include <string>

namespace ndncdn::exp {

struct ExperimentInfo
{
  ExperimentId id;
  const char* title;
  const char* summary;
};

const std::vector<ExperimentInfo>&
experimentCatalog();

struct RunOptions
{
  /// worker threads for independent runs
  int jobs = 1;
  /// when set, every run writes its event trace to <traceDir>/<run label>.trace
  std::optional<std::string> traceDir;
};

/// One independent simulation producing one or more records.
struct RunTask
{
  std::string label;
  std::function<std::vector<MetricsRecord>(std::ostream* trace)> run;
};

/// Expands \p cfg into its runs, in output order; \p cfg must outlive the tasks.
std::vector<RunTask>
planRuns(const ScenarioConfig& cfg);

/** \brief Executes every run of \p cfg and returns the records in plan order.
 *
 *  Output is independent of options.jobs.
 */
std::vector<MetricsRecord>
runExperiment(const ScenarioConfig& cfg, const RunOptions& options = {});

/// Seed of repetition \p rep.
uint64_t
repetitionSeed(const ScenarioConfig& cfg, int rep);

/// Topology of experiment B's randomized variant \p index (0 is the configured one).
sim::TopologyConfig
randomizedTopology(const ScenarioConfig& cfg, int index);

/// Lossy-profile topology used by experiment A.
sim::TopologyConfig
lossyTopology(const ScenarioConfig& cfg);

/// Same links with every loss probability set to zero.
sim::TopologyConfig
losslessTopology(const sim::TopologyConfig& topo);

/// Number of segments routed through the first upstream in experiment C.
uint64_t
switchSegments(const ScenarioConfig& cfg, uint64_t objectSize);

/// Writes whitespace-separated plot series for the records of one experiment.
void
writePlotData(std::ostream& os, const ScenarioConfig& cfg,
              const std::vector<MetricsRecord>& records);

} // namespace ndncdn::exp

#endif // NDNCDN_EXP_EXPERIMENTS_HPP
