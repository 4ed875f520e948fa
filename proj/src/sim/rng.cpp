#include "ndncdn/sim/rng.hpp"

#include <vector>

namespace ndncdn::sim {

Rng::Rng(uint64_t seed, std::initializer_list<uint64_t> stream)
{
  std::vector<uint32_t> words;
  words.reserve(2 + 2 * stream.size());
  auto push = [&words] (uint64_t v) {
    words.push_back(static_cast<uint32_t>(v));
    words.push_back(static_cast<uint32_t>(v >> 32));
  };
  push(seed);
  for (uint64_t s : stream) {
    push(s);
  }
  std::seed_seq seq(words.begin(), words.end());
  m_engine.seed(seq);
}

uint64_t
Rng::below(uint64_t n)
{
  // rejection sampling keeps the result unbiased
  uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t x;
  do {
    x = m_engine();
  } while (x >= limit);
  return x % n;
}

} // namespace ndncdn::sim
