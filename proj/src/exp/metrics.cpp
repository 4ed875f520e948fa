#include "ndncdn/exp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <tuple>

namespace ndncdn::exp {

std::vector<double>
gapsInWindow(const std::vector<ArrivalPoint>& arrivals, Time from, Time to)
{
  std::vector<double> gaps;
  for (size_t i = 1; i < arrivals.size(); ++i) {
    Time t = arrivals[i].time;
    if (t >= from && t <= to) {
      gaps.push_back(toMs(t - arrivals[i - 1].time));
    }
  }
  return gaps;
}

double
median(std::vector<double> values)
{
  if (values.empty()) {
    return 0.0;
  }
  std::sort(values.begin(), values.end());
  size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

double
mean(const std::vector<double>& values)
{
  if (values.empty()) {
    return 0.0;
  }
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double
stddev(const std::vector<double>& values)
{
  if (values.size() < 2) {
    return 0.0;
  }
  double m = mean(values);
  double ss = 0.0;
  for (double v : values) {
    ss += (v - m) * (v - m);
  }
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

std::string
formatNumber(double v, int decimals)
{
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  std::string s(buf);
  // no "-0.000"
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) {
    s.erase(0, 1);
  }
  return s;
}

const char CSV_HEADER[] =
  "experiment,plane,size_bytes,mode,seed,ttfb_ms,completion_ms,delivered_bytes,goodput_Bpms,"
  "origin_touches,cache1_bytes,cache2_bytes,success,max_gap_ms";

void
writeCsv(std::ostream& os, const std::vector<MetricsRecord>& records)
{
  os << CSV_HEADER << '\n';
  for (const auto& r : records) {
    os << r.experiment << ',' << r.plane << ',' << r.sizeBytes << ',' << r.mode << ','
       << r.seed << ',' << (r.ttfbMs ? formatNumber(*r.ttfbMs) : "") << ','
       << formatNumber(r.completionMs) << ',' << r.deliveredBytes << ','
       << formatNumber(r.goodputBpms()) << ',' << r.originTouches << ',' << r.cache1Bytes
       << ',' << r.cache2Bytes << ',' << (r.success ? 1 : 0) << ','
       << (r.maxGapMs ? formatNumber(*r.maxGapMs) : "") << '\n';
  }
}

Summary
summarize(const std::vector<MetricsRecord>& records)
{
  using Key = std::tuple<char, std::string, uint64_t, std::string>;
  std::vector<Key> order;
  std::map<Key, std::vector<const MetricsRecord*>> groups;
  for (const auto& r : records) {
    Key k{r.experiment, r.plane, r.sizeBytes, r.mode};
    auto [it, inserted] = groups.try_emplace(k);
    if (inserted) {
      order.push_back(k);
    }
    it->second.push_back(&r);
  }

  Summary out;
  for (const auto& k : order) {
    const auto& members = groups[k];
    SummaryRow row;
    std::tie(row.experiment, row.plane, row.sizeBytes, row.mode) = k;
    row.runs = members.size();
    std::vector<double> completion, ttfb, touches, c1, c2;
    for (const auto* r : members) {
      if (!r->success) {
        ++row.failures;
        continue;
      }
      completion.push_back(r->completionMs);
      if (r->ttfbMs) {
        ttfb.push_back(*r->ttfbMs);
      }
      touches.push_back(static_cast<double>(r->originTouches));
      c1.push_back(static_cast<double>(r->cache1Bytes));
      c2.push_back(static_cast<double>(r->cache2Bytes));
    }
    if (completion.empty()) {
      ++out.emptyGroups;
      continue;
    }
    row.completionMedian = median(completion);
    row.completionMean = mean(completion);
    row.completionStddev = stddev(completion);
    if (!ttfb.empty()) {
      row.ttfbMedian = median(ttfb);
      row.ttfbMean = mean(ttfb);
      row.ttfbStddev = stddev(ttfb);
    }
    row.originTouchesMean = mean(touches);
    row.cache1Mean = mean(c1);
    row.cache2Mean = mean(c2);
    out.rows.push_back(std::move(row));
  }
  return out;
}

void
writeSummaryCsv(std::ostream& os, const Summary& summary)
{
  auto opt = [] (const std::optional<double>& v) { return v ? formatNumber(*v) : ""; };
  os << "experiment,plane,size_bytes,mode,runs,failures,completion_median_ms,"
        "completion_mean_ms,completion_stddev_ms,ttfb_median_ms,ttfb_mean_ms,ttfb_stddev_ms,"
        "origin_touches_mean,cache1_bytes_mean,cache2_bytes_mean\n";
  for (const auto& r : summary.rows) {
    os << r.experiment << ',' << r.plane << ',' << r.sizeBytes << ',' << r.mode << ','
       << r.runs << ',' << r.failures << ',' << formatNumber(r.completionMedian) << ','
       << formatNumber(r.completionMean) << ',' << formatNumber(r.completionStddev) << ','
       << opt(r.ttfbMedian) << ',' << opt(r.ttfbMean) << ',' << opt(r.ttfbStddev) << ','
       << formatNumber(r.originTouchesMean) << ',' << formatNumber(r.cache1Mean, 1) << ','
       << formatNumber(r.cache2Mean, 1) << '\n';
  }
}

} // namespace ndncdn::exp
