#ifndef NDNCDN_EXP_METRICS_HPP
#define NDNCDN_EXP_METRICS_HPP

#include "ndncdn/core/time.hpp"

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace ndncdn::exp {

/// (time, cumulative delivered bytes) at the client.
struct ArrivalPoint
{
  Time time;
  uint64_t bytes;
};

/// Upstream chosen by the client-side cache at one strategy interval.
struct UpstreamSample
{
  Time time;
  /// node name of the chosen upstream, empty when none
  std::string chosen;
  /// independent argmin of the path weights over the true link parameters (NDN only)
  std::string expected;
};

struct MetricsRecord
{
  char experiment = 'A';
  std::string plane;
  /// object size, or the requested range length in experiment D
  uint64_t sizeBytes = 0;
  std::string mode;
  uint64_t seed = 0;
  std::optional<double> ttfbMs;
  double completionMs = 0.0;
  uint64_t deliveredBytes = 0;
  uint64_t originTouches = 0;
  /// application bytes cached at the first and second intermediates
  uint64_t cache1Bytes = 0;
  uint64_t cache2Bytes = 0;
  bool success = false;
  std::optional<double> maxGapMs;

  /// application bytes cached per node name
  std::map<std::string, uint64_t> cacheBytes;
  /// inter-arrival gaps inside the designated window, ms
  std::vector<double> gapsMs;
  /// Interests or requests issued for data already delivered
  uint64_t refetched = 0;
  std::vector<ArrivalPoint> arrivals;
  std::vector<UpstreamSample> upstreamSeries;
  /// free-form note for failed runs
  std::string failure;

  double
  goodputBpms() const noexcept
  {
    return success && completionMs > 0.0 ? static_cast<double>(deliveredBytes) / completionMs
                                         : 0.0;
  }
};

/// Gaps between consecutive arrivals whose later arrival lies in [from, to].
std::vector<double>
gapsInWindow(const std::vector<ArrivalPoint>& arrivals, Time from, Time to);

double
median(std::vector<double> values);

double
mean(const std::vector<double>& values);

/// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
double
stddev(const std::vector<double>& values);

/// Column header of the per-run CSV.
extern const char CSV_HEADER[];

void
writeCsv(std::ostream& os, const std::vector<MetricsRecord>& records);

struct SummaryRow
{
  char experiment = 'A';
  std::string plane;
  uint64_t sizeBytes = 0;
  std::string mode;
  size_t runs = 0;
  size_t failures = 0;
  double completionMedian = 0.0;
  double completionMean = 0.0;
  double completionStddev = 0.0;
  std::optional<double> ttfbMedian;
  std::optional<double> ttfbMean;
  std::optional<double> ttfbStddev;
  double originTouchesMean = 0.0;
  double cache1Mean = 0.0;
  double cache2Mean = 0.0;
};

struct Summary
{
  std::vector<SummaryRow> rows;
  /// groups with no successful run, omitted from rows
  size_t emptyGroups = 0;
};

/// Groups by (experiment, plane, size, mode) in first-appearance order; failed runs are
/// counted but excluded from the statistics.
Summary
summarize(const std::vector<MetricsRecord>& records);

void
writeSummaryCsv(std::ostream& os, const Summary& summary);

/// Fixed-precision formatting shared by every writer, so output is byte-stable.
std::string
formatNumber(double v, int decimals = 3);

} // namespace ndncdn::exp

#endif // NDNCDN_EXP_METRICS_HPP
