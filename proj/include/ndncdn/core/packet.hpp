#ifndef NDNCDN_CORE_PACKET_HPP
#define NDNCDN_CORE_PACKET_HPP

#include "ndncdn/core/name.hpp"
#include "ndncdn/core/time.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace ndncdn {

constexpr uint64_t DEFAULT_CHUNK_SIZE = 8800;
constexpr uint64_t DEFAULT_SIGNATURE_SIZE = 32;
constexpr Time DEFAULT_INTEREST_LIFETIME = 4000ms;

using Nonce = uint64_t;

struct Interest
{
  Name name;
  Nonce nonce = 0;
  Time lifetime = DEFAULT_INTEREST_LIFETIME;
};

struct Data
{
  Name name;
  uint64_t payloadSize = 0;
  /// opaque signature placeholder, only counted for size accounting
  uint64_t signatureSize = DEFAULT_SIGNATURE_SIZE;
  Time freshness = 0ms;
  /// last segment number of the content this packet belongs to
  SegmentNumber finalSegment = 0;

  /// bytes charged against a content store
  uint64_t
  storedSize() const noexcept
  {
    return payloadSize + signatureSize;
  }
};

/// A named object before it is split into Data packets.
struct ContentObject
{
  Name prefix;
  uint64_t totalSize = 0;
  uint64_t chunkSize = DEFAULT_CHUNK_SIZE;
  uint64_t signatureSize = DEFAULT_SIGNATURE_SIZE;

  uint64_t
  segmentCount() const noexcept
  {
    return chunkSize == 0 ? 0 : (totalSize + chunkSize - 1) / chunkSize;
  }
};

class InvalidContent : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/** \brief Splits \p content into Data packets named `<prefix>/segment=k`, k = 1..n.
 *  \throw InvalidContent when totalSize or chunkSize is zero
 */
std::vector<Data>
segmentContent(const ContentObject& content);

/// Builds segment \p k (1-based) of \p content without materializing the others.
Data
makeSegment(const ContentObject& content, SegmentNumber k);

/// Inclusive 1-based segment interval covering bytes [first, last].
struct SegmentRange
{
  SegmentNumber first = 1;
  SegmentNumber last = 0;

  bool
  empty() const noexcept
  {
    return last < first;
  }

  uint64_t
  count() const noexcept
  {
    return empty() ? 0 : last - first + 1;
  }
};

SegmentRange
segmentsForBytes(uint64_t firstByte, uint64_t lastByte, uint64_t chunkSize);

} // namespace ndncdn

#endif // NDNCDN_CORE_PACKET_HPP
