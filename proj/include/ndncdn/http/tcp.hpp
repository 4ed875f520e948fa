#ifndef NDNCDN_HTTP_TCP_HPP
#define NDNCDN_HTTP_TCP_HPP

#include "ndncdn/http/message.hpp"
#include "ndncdn/http/reno-sender.hpp"
#include "ndncdn/sim/network.hpp"

#include <functional>
#include <map>
#include <memory>

namespace ndncdn::http {

using sim::FaceId;
using sim::NodeId;

struct TcpConfig
{
  uint32_t mss = 1460;
  RenoConfig reno;
  /// first SYN retry; doubles per attempt
  Time synTimeout = 1s;
  /// SYN transmissions before the connection is refused
  int synAttempts = 3;
  Time minRto = 200ms;
  /// RTO before any RTT sample
  Time initialRto = 1s;
  /// consecutive retransmission timeouts tolerated before giving up
  int maxRetransmits = 8;
  /// receiver gives up when a started response stalls this long
  Time idleTimeout = 5s;
  /// receiver gives up when no response starts within this long
  Time responseTimeout = 30s;
};

enum class TcpFailure
{
  Refused,
  Reset,
  Timeout,
};

const char*
toString(TcpFailure failure);

class TcpStack;

/** \brief Initiating side of a connection: sends requests, receives responses.
 *
 *  A connection carries one request/response exchange at a time and may be
 *  reused for later exchanges.
 */
class TcpClientEnd
{
public:
  enum class State
  {
    Connecting,
    Established,
    Closed,
  };

  struct ResponseHandlers
  {
    /// first byte of the response arrived; argument is the response length
    std::function<void(uint64_t)> onStart;
    /// in-order bytes received so far
    std::function<void(uint64_t)> onBytes;
    std::function<void()> onComplete;
    std::function<void(TcpFailure, const std::string&)> onFailed;
  };

  TcpClientEnd(TcpStack& stack, uint64_t id, NodeId peer);

  TcpClientEnd(const TcpClientEnd&) = delete;
  TcpClientEnd& operator=(const TcpClientEnd&) = delete;

  uint64_t
  id() const noexcept
  {
    return m_id;
  }

  NodeId
  peer() const noexcept
  {
    return m_peer;
  }

  State
  state() const noexcept
  {
    return m_state;
  }

  /// Open and not carrying an exchange.
  bool
  isIdle() const noexcept
  {
    return m_state != State::Closed && !m_active;
  }

  std::optional<Time>
  srtt() const noexcept
  {
    return m_srtt;
  }

  std::optional<Time>
  establishedAt() const noexcept
  {
    return m_establishedAt;
  }

  /// \pre isIdle()
  void
  request(const HttpRequest& req, ResponseHandlers handlers);

  /// Sends a reset and closes without invoking handlers.
  void
  abort();

private:
  friend class TcpStack;

  void
  open();

  void
  markEstablished(Time rtt);

  void
  sendSyn();

  void
  sendRequest();

  void
  sendAck();

  void
  receive(const sim::TcpSegment& seg);

  void
  onData(const sim::TcpSegment& seg);

  void
  armIdle();

  void
  onIdleCheck();

  void
  fail(TcpFailure failure, const std::string& reason);

  void
  cancelTimers();

  Time
  rto() const;

  void
  send(sim::TcpSegment seg);

private:
  TcpStack& m_stack;
  uint64_t m_id;
  NodeId m_peer;
  FaceId m_face;
  State m_state = State::Connecting;
  int m_synSent = 0;
  Time m_synSentAt = 0us;
  std::optional<sim::EventId> m_synTimer;
  std::optional<Time> m_srtt;
  std::optional<Time> m_establishedAt;

  uint64_t m_exchange = 0;
  bool m_active = false;
  std::string m_requestLine;
  ResponseHandlers m_handlers;
  int m_requestSent = 0;
  std::optional<sim::EventId> m_requestTimer;
  std::optional<sim::EventId> m_idleTimer;
  Time m_lastRx = 0us;
  Time m_requestAt = 0us;

  bool m_started = false;
  uint64_t m_length = 0;
  uint64_t m_segments = 0;
  std::vector<bool> m_received;
  uint64_t m_next = 0;
  uint64_t m_inOrderBytes = 0;
};

/// Accepting side of a connection: receives requests, streams responses with Reno.
class TcpServerEnd
{
public:
  enum class State
  {
    SynReceived,
    Established,
    Closed,
  };

  using RequestHandler = std::function<void(TcpServerEnd&, const HttpRequest&)>;
  /// The current exchange ended early: downstream reset or unreachable.
  using AbortHandler = std::function<void(TcpServerEnd&, TcpFailure)>;

  TcpServerEnd(TcpStack& stack, uint64_t id, NodeId peer);

  TcpServerEnd(const TcpServerEnd&) = delete;
  TcpServerEnd& operator=(const TcpServerEnd&) = delete;

  uint64_t
  id() const noexcept
  {
    return m_id;
  }

  NodeId
  peer() const noexcept
  {
    return m_peer;
  }

  State
  state() const noexcept
  {
    return m_state;
  }

  void
  setRequestHandler(RequestHandler h)
  {
    m_onRequest = std::move(h);
  }

  void
  setAbortHandler(AbortHandler h)
  {
    m_onAbort = std::move(h);
  }

  /// Begins the response to the current request.
  void
  respond(uint64_t length);

  /// Makes the first \p bytes of the response available for sending.
  void
  supply(uint64_t bytes);

  /// Refuses or cuts the current exchange with a reset carrying \p reason.
  void
  reject(const std::string& reason);

  bool
  isResponding() const noexcept
  {
    return m_active && m_responding;
  }

  const RenoSender&
  sender() const noexcept
  {
    return m_reno;
  }

  std::optional<Time>
  srtt() const noexcept
  {
    return m_srtt;
  }

  /// Retransmission timeout currently in force, backoff included.
  Time
  rto() const;

  /// cwnd observed right after each congestion event or ack, for tests
  using CwndObserver = std::function<void(const RenoSender&)>;

  void
  setCwndObserver(CwndObserver obs)
  {
    m_cwndObserver = std::move(obs);
  }

private:
  friend class TcpStack;

  void
  markEstablished(Time rtt);

  void
  receive(const sim::TcpSegment& seg);

  void
  onRequest(const sim::TcpSegment& seg);

  void
  onAck(const sim::TcpSegment& seg);

  void
  trySend();

  void
  armRto();

  void
  onRto();

  void
  close();

  void
  send(sim::TcpSegment seg);

  void
  rttSample(Time sample);

private:
  TcpStack& m_stack;
  uint64_t m_id;
  NodeId m_peer;
  FaceId m_face;
  State m_state = State::SynReceived;
  int m_synAckSent = 0;
  Time m_synAckAt = 0us;
  std::optional<Time> m_srtt;

  uint64_t m_exchange = 0;
  bool m_active = false;
  bool m_responding = false;
  uint64_t m_length = 0;
  RenoSender m_reno;
  std::vector<Time> m_sentAt;
  std::vector<bool> m_retransmitted;
  std::optional<sim::EventId> m_rtoTimer;
  int m_backoff = 0;
  int m_consecutiveRtos = 0;

  RequestHandler m_onRequest;
  AbortHandler m_onAbort;
  CwndObserver m_cwndObserver;
};

/// Per-node TCP endpoint table and packet demultiplexer.
class TcpStack
{
public:
  using AcceptHandler = std::function<void(TcpServerEnd&)>;

  TcpStack(sim::Network& net, NodeId node, TcpConfig config = {});

  TcpStack(const TcpStack&) = delete;
  TcpStack& operator=(const TcpStack&) = delete;

  sim::Network&
  network() noexcept
  {
    return m_net;
  }

  NodeId
  node() const noexcept
  {
    return m_node;
  }

  const TcpConfig&
  config() const noexcept
  {
    return m_config;
  }

  void
  setAcceptHandler(AcceptHandler h)
  {
    m_onAccept = std::move(h);
  }

  /// Starts a handshake toward adjacent \p peer.
  TcpClientEnd&
  connect(NodeId peer);

  /// A connection whose handshake completed before the run; both ends start
  /// established with the link round trip as their RTT estimate.
  TcpClientEnd&
  connectEstablished(TcpStack& peer);

private:
  friend class TcpClientEnd;
  friend class TcpServerEnd;

  void
  receive(FaceId face, const sim::Packet& packet);

  TcpServerEnd&
  accept(uint64_t id, NodeId peer);

private:
  sim::Network& m_net;
  NodeId m_node;
  TcpConfig m_config;
  uint64_t m_nextId = 1;
  std::map<uint64_t, std::unique_ptr<TcpClientEnd>> m_clients;
  std::map<uint64_t, std::unique_ptr<TcpServerEnd>> m_servers;
  AcceptHandler m_onAccept;
};

} // namespace ndncdn::http

#endif // NDNCDN_HTTP_TCP_HPP
