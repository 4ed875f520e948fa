#include "ndncdn/core/packet.hpp"

namespace ndncdn {

namespace {

void
validate(const ContentObject& content)
{
  if (content.totalSize == 0) {
    throw InvalidContent("content " + content.prefix.toUri() + " has zero size");
  }
  if (content.chunkSize == 0) {
    throw InvalidContent("content " + content.prefix.toUri() + " has zero chunk size");
  }
  if (content.prefix.empty()) {
    throw InvalidContent("content prefix must be non-empty");
  }
}

} // namespace

Data
makeSegment(const ContentObject& content, SegmentNumber k)
{
  validate(content);
  uint64_t n = content.segmentCount();
  if (k < 1 || k > n) {
    throw InvalidContent("segment " + std::to_string(k) + " outside 1.." + std::to_string(n));
  }

  Data data;
  data.name = content.prefix;
  data.name.appendSegment(k);
  data.payloadSize = k < n ? content.chunkSize : content.totalSize - (n - 1) * content.chunkSize;
  data.signatureSize = content.signatureSize;
  data.finalSegment = n;
  return data;
}

std::vector<Data>
segmentContent(const ContentObject& content)
{
  validate(content);
  uint64_t n = content.segmentCount();
  std::vector<Data> out;
  out.reserve(n);
  for (SegmentNumber k = 1; k <= n; ++k) {
    out.push_back(makeSegment(content, k));
  }
  return out;
}

SegmentRange
segmentsForBytes(uint64_t firstByte, uint64_t lastByte, uint64_t chunkSize)
{
  if (chunkSize == 0 || lastByte < firstByte) {
    return {1, 0};
  }
  return {firstByte / chunkSize + 1, lastByte / chunkSize + 1};
}

} // namespace ndncdn
