#ifndef NDNCDN_SIM_RNG_HPP
#define NDNCDN_SIM_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace ndncdn::sim {

/** \brief Seeded random stream with a platform-independent output sequence.
 *
 *  Backed by std::mt19937_64 seeded through std::seed_seq, both of which have
 *  fully specified output. Conversions to real numbers are done here rather than
 *  with <random> distributions, whose output is implementation-defined.
 */
class Rng
{
public:
  explicit
  Rng(uint64_t seed = 0)
    : Rng(seed, {})
  {
  }

  /// Independent stream derived from \p seed and a stream label.
  Rng(uint64_t seed, std::initializer_list<uint64_t> stream);

  uint64_t
  next()
  {
    return m_engine();
  }

  /// Uniform in [0, 1) with 53 bits of precision.
  double
  uniform01()
  {
    return static_cast<double>(m_engine() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [lo, hi).
  double
  uniform(double lo, double hi)
  {
    return lo + (hi - lo) * uniform01();
  }

  /// Uniform integer in [0, n). \pre n > 0
  uint64_t
  below(uint64_t n);

  bool
  bernoulli(double p)
  {
    if (p <= 0.0)
      return false;
    if (p >= 1.0)
      return true;
    return uniform01() < p;
  }

private:
  std::mt19937_64 m_engine;
};

} // namespace ndncdn::sim

#endif // NDNCDN_SIM_RNG_HPP
