#include "ndncdn/ndn/producer.hpp"

namespace ndncdn::ndn {

Producer::Producer(Forwarder& forwarder)
  : m_forwarder(forwarder)
{
  m_forwarder.setProducer([this] (const Interest& i) { return onInterest(i); });
}

void
Producer::publish(const ContentObject& content)
{
  // validates size and chunking up front
  makeSegment(content, 1);
  m_contents.insert(content.prefix, content);
  m_forwarder.addRoute(content.prefix, sim::APP_FACE, 0);
}

std::optional<Data>
Producer::onInterest(const Interest& interest)
{
  const ContentObject* content = m_contents.longestPrefixMatch(interest.name);
  auto seg = interest.name.segment();
  if (content == nullptr || !seg || interest.name.size() != content->prefix.size() + 1 ||
      *seg < 1 || *seg > content->segmentCount()) {
    ++m_unanswered;
    return std::nullopt;
  }
  ++m_served;
  return makeSegment(*content, *seg);
}

} // namespace ndncdn::ndn
