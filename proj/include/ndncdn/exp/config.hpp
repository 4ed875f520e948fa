#ifndef NDNCDN_EXP_CONFIG_HPP
#define NDNCDN_EXP_CONFIG_HPP

#include "ndncdn/http/proxy.hpp"
#include "ndncdn/ndn/forwarder.hpp"
#include "ndncdn/sim/topology.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ndncdn::exp {

constexpr uint64_t KiB = 1ull << 10;
constexpr uint64_t MiB = 1ull << 20;
constexpr uint64_t GiB = 1ull << 30;

enum class ExperimentId : char
{
  A = 'A', ///< goodput with and without loss
  B = 'B', ///< time to first byte, caches cold and warm
  C = 'C', ///< cache utilization after a mid-transfer upstream switch
  D = 'D', ///< partial (byte-range) retrieval
  E = 'E', ///< failover when the serving intermediate dies
  F = 'F', ///< path switching under upstream degradation
};

enum class PlaneSelection
{
  Ndn,
  Http,
  Both,
};

std::string_view
toString(PlaneSelection p);

/// Loss probabilities applied in the lossy runs of experiment A.
struct LossProfile
{
  double access = 0.0008;
  double upstream = 0.0001;
  double origin = 0.0001;
};

struct CacheSettings
{
  bool clientSide = true;
  bool intermediate = true;
  uint64_t capacity = 2 * GiB;
};

struct NdnSettings
{
  size_t window = 64;
  int maxRetries = 5;
  uint64_t chunkSize = DEFAULT_CHUNK_SIZE;
  ndn::StrategyMode strategy = ndn::StrategyMode::BestRouteFailover;
  ndn::QualitySource quality = ndn::QualitySource::Oracle;
  Time strategyInterval = 100ms;
};

struct HttpSettings
{
  http::RangeMode rangeMode = http::RangeMode::Bypass;
  http::LbPolicy lbPolicy = http::LbPolicy::RoundRobin;
  /// open persistent connections on proxy-to-upstream hops before the run
  bool prewarm = true;
};

struct ScenarioConfig
{
  ExperimentId experiment = ExperimentId::A;
  PlaneSelection plane = PlaneSelection::Both;
  sim::TopologyConfig topology;
  std::vector<uint64_t> sizes;
  LossProfile lossProfile;
  CacheSettings cache;
  NdnSettings ndn;
  HttpSettings http;
  int repetitions = 10;
  uint64_t seed = 1;

  /// B: number of randomized topologies in addition to the configured one
  int randomTopologies = 0;
  /// C: fraction of the object fetched through the first upstream
  double switchFraction = 0.1;
  /// D: requested byte ranges, each a prefix of the first size
  std::vector<uint64_t> ranges;
  /// D: prefix retrieved once before the measured requests
  uint64_t warmBytes = 20 * MiB;
  /// E
  Time killTime = 3000ms;
  Time gapWindowBefore = 500ms;
  Time gapWindowAfter = 1500ms;
  /// F: degradation of the first upstream link, drawn uniformly per run
  Time degradeTime = 2000ms;
  Time degradeDelayMin = 50ms;
  Time degradeDelayMax = 200ms;
  double degradeLossMin = 0.00001;
  double degradeLossMax = 0.01;

  bool
  runsNdn() const noexcept
  {
    return plane != PlaneSelection::Http;
  }

  bool
  runsHttp() const noexcept
  {
    return plane != PlaneSelection::Ndn;
  }
};

/// Configuration error carrying a field path or line diagnostic.
class ConfigError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Experiment defaults (sizes, ranges, link overrides) before any file is applied.
ScenarioConfig
defaultConfig(ExperimentId id);

/// \throw ConfigError on malformed JSON, unknown keys, bad units or invalid values
ScenarioConfig
parseConfig(std::string_view jsonText);

/// \throw ConfigError also when the file cannot be read
ScenarioConfig
loadConfig(const std::string& path);

/// Checks cross-field invariants. \throw ConfigError
void
validate(const ScenarioConfig& cfg);

/// "1.5MB", "512KB", "100B" or a bare integer number of bytes; binary multiples.
/// \throw std::invalid_argument
uint64_t
parseBytes(std::string_view text);

/// "50ms", "3s", "250us" or a bare number of milliseconds. \throw std::invalid_argument
Time
parseDuration(std::string_view text);

/// "0.08%" or a bare probability in [0, 1]. \throw std::invalid_argument
double
parseProbability(std::string_view text);

} // namespace ndncdn::exp

#endif // NDNCDN_EXP_CONFIG_HPP
