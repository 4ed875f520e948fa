#include "ndncdn/http/client.hpp"

namespace ndncdn::http {

HttpClient::HttpClient(sim::Network& net, NodeId node, NodeId proxy, TcpConfig config)
  : m_net(net)
  , m_stack(net, node, config)
  , m_proxy(proxy)
{
}

void
HttpClient::get(const HttpRequest& req, std::optional<uint64_t> abortAfter, Callback done)
{
  if (m_running) {
    throw std::logic_error("client already has a request in progress");
  }
  m_running = true;
  m_done = std::move(done);
  m_result = HttpResult{};
  m_result.start = m_net.now();

  TcpClientEnd& conn = m_stack.connect(m_proxy);
  TcpClientEnd* c = &conn;
  conn.request(req, TcpClientEnd::ResponseHandlers{
    [this] (uint64_t length) {
      m_result.length = length;
      m_result.ttfb = m_net.now() - m_result.start;
    },
    [this, c, abortAfter] (uint64_t bytes) {
      m_result.deliveredBytes = bytes;
      m_result.completion = m_net.now() - m_result.start;
      m_result.arrivals.push_back({m_net.now(), bytes});
      if (abortAfter && bytes >= *abortAfter && bytes < m_result.length) {
        c->abort();
        m_result.aborted = true;
        m_result.failure = "aborted by client";
        finish();
      }
    },
    [this] {
      m_result.success = true;
      finish();
    },
    [this] (TcpFailure f, const std::string& why) {
      m_result.failure = std::string(toString(f)) + ": " + why;
      finish();
    },
  });
}

void
HttpClient::finish()
{
  m_running = false;
  if (m_done) {
    auto done = std::move(m_done);
    m_done = nullptr;
    // deferred so the callback may start another request on a clean stack
    m_net.schedule(m_stack.node(), 0us, [done, result = m_result] { done(result); },
                   "http-done");
  }
}

} // namespace ndncdn::http
