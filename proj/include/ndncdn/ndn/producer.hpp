#ifndef NDNCDN_NDN_PRODUCER_HPP
#define NDNCDN_NDN_PRODUCER_HPP

#include "ndncdn/core/name-table.hpp"
#include "ndncdn/ndn/forwarder.hpp"

namespace ndncdn::ndn {

/// Serves segments of published content through a forwarder's application face.
class Producer
{
public:
  explicit
  Producer(Forwarder& forwarder);

  Producer(const Producer&) = delete;
  Producer& operator=(const Producer&) = delete;

  /// Registers \p content and routes its prefix to the application face.
  void
  publish(const ContentObject& content);

  /// Interests answered with Data.
  uint64_t
  served() const noexcept
  {
    return m_served;
  }

  uint64_t
  unanswered() const noexcept
  {
    return m_unanswered;
  }

private:
  std::optional<Data>
  onInterest(const Interest& interest);

private:
  Forwarder& m_forwarder;
  NameTable<ContentObject> m_contents;
  uint64_t m_served = 0;
  uint64_t m_unanswered = 0;
};

} // namespace ndncdn::ndn

#endif // NDNCDN_NDN_PRODUCER_HPP
