#ifndef NDNCDN_HTTP_CLIENT_HPP
#define NDNCDN_HTTP_CLIENT_HPP

#include "ndncdn/http/tcp.hpp"

namespace ndncdn::http {

struct ByteArrival
{
  Time time;
  /// in-order bytes received so far
  uint64_t bytes;
};

struct HttpResult
{
  bool success = false;
  bool aborted = false;
  std::string failure;
  Time start = 0us;
  /// first response byte minus connection start
  std::optional<Time> ttfb;
  /// last response byte minus connection start
  Time completion = 0us;
  uint64_t length = 0;
  uint64_t deliveredBytes = 0;
  std::vector<ByteArrival> arrivals;
};

/// Fetches over a fresh connection to its proxy for every request.
class HttpClient
{
public:
  using Callback = std::function<void(const HttpResult&)>;

  HttpClient(sim::Network& net, NodeId node, NodeId proxy, TcpConfig config = {});

  TcpStack&
  stack() noexcept
  {
    return m_stack;
  }

  /** \brief Issues \p req; resets the connection once \p abortAfter bytes arrived.
   *  \pre no request in progress
   */
  void
  get(const HttpRequest& req, std::optional<uint64_t> abortAfter, Callback done);

  bool
  isRunning() const noexcept
  {
    return m_running;
  }

  const HttpResult&
  result() const noexcept
  {
    return m_result;
  }

private:
  void
  finish();

private:
  sim::Network& m_net;
  TcpStack m_stack;
  NodeId m_proxy;
  bool m_running = false;
  HttpResult m_result;
  Callback m_done;
};

} // namespace ndncdn::http

#endif // NDNCDN_HTTP_CLIENT_HPP
