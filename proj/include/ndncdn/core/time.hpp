#ifndef NDNCDN_CORE_TIME_HPP
#define NDNCDN_CORE_TIME_HPP

#include <chrono>
#include <cmath>
#include <cstdint>

namespace ndncdn {

/// Simulation time and durations, integer microseconds since simulation start.
using Time = std::chrono::duration<int64_t, std::micro>;

constexpr Time
fromMs(double ms)
{
  return Time(static_cast<int64_t>(std::llround(ms * 1000.0)));
}

constexpr double
toMs(Time t)
{
  return static_cast<double>(t.count()) / 1000.0;
}

using namespace std::chrono_literals;

} // namespace ndncdn

#endif // NDNCDN_CORE_TIME_HPP
