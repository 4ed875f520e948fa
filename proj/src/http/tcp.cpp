#include "ndncdn/http/tcp.hpp"

#include <algorithm>

namespace ndncdn::http {

using Kind = sim::TcpSegment::Kind;

const char*
toString(TcpFailure failure)
{
  switch (failure) {
    case TcpFailure::Refused:
      return "refused";
    case TcpFailure::Reset:
      return "reset";
    case TcpFailure::Timeout:
      return "timeout";
  }
  return "?";
}

namespace {

Time
backedOff(Time base, int shifts)
{
  return base * (int64_t{1} << std::min(shifts, 16));
}

} // namespace

// ---- TcpClientEnd

TcpClientEnd::TcpClientEnd(TcpStack& stack, uint64_t id, NodeId peer)
  : m_stack(stack)
  , m_id(id)
  , m_peer(peer)
  , m_face(stack.network().faceToward(stack.node(), peer))
{
  if (m_face == sim::INVALID_FACE) {
    throw std::invalid_argument("tcp peer is not adjacent");
  }
}

void
TcpClientEnd::send(sim::TcpSegment seg)
{
  seg.connection = m_id;
  seg.fromInitiator = true;
  m_stack.network().send(m_stack.node(), m_face, std::move(seg));
}

void
TcpClientEnd::open()
{
  m_state = State::Connecting;
  sendSyn();
}

void
TcpClientEnd::sendSyn()
{
  auto& net = m_stack.network();
  ++m_synSent;
  m_synSentAt = net.now();
  send(sim::TcpSegment{.kind = Kind::Syn});
  m_synTimer = net.schedule(m_stack.node(),
                            backedOff(m_stack.config().synTimeout, m_synSent - 1), [this] {
    m_synTimer.reset();
    if (m_synSent >= m_stack.config().synAttempts) {
      fail(TcpFailure::Refused, "no answer to SYN");
    }
    else {
      sendSyn();
    }
  }, "tcp-syn-timeout");
}

void
TcpClientEnd::markEstablished(Time rtt)
{
  m_state = State::Established;
  m_srtt = rtt;
  m_establishedAt = m_stack.network().now();
}

void
TcpClientEnd::receive(const sim::TcpSegment& seg)
{
  if (m_state == State::Closed) {
    return;
  }
  switch (seg.kind) {
    case Kind::SynAck:
      if (m_state == State::Connecting) {
        if (m_synTimer) {
          m_stack.network().cancel(*m_synTimer);
          m_synTimer.reset();
        }
        // Karn: a retried SYN gives an ambiguous sample
        m_state = State::Established;
        m_establishedAt = m_stack.network().now();
        if (m_synSent == 1) {
          m_srtt = m_stack.network().now() - m_synSentAt;
        }
        if (m_active) {
          sendRequest();
        }
        else {
          sendAck();
        }
      }
      else if (m_active && !m_started) {
        sendRequest();
      }
      else {
        sendAck();
      }
      break;
    case Kind::Data:
      onData(seg);
      break;
    case Kind::Reset:
      fail(TcpFailure::Reset, seg.message.empty() ? "reset by peer" : seg.message);
      break;
    default:
      break;
  }
}

void
TcpClientEnd::sendAck()
{
  send(sim::TcpSegment{.kind = Kind::Ack, .ack = m_next, .exchange = m_exchange});
}

Time
TcpClientEnd::rto() const
{
  const auto& cfg = m_stack.config();
  return m_srtt ? std::max(2 * *m_srtt, cfg.minRto) : cfg.initialRto;
}

void
TcpClientEnd::request(const HttpRequest& req, ResponseHandlers handlers)
{
  if (!isIdle()) {
    throw std::logic_error("connection is busy or closed");
  }
  ++m_exchange;
  m_active = true;
  m_requestLine = req.encode();
  m_handlers = std::move(handlers);
  m_requestSent = 0;
  m_started = false;
  m_length = m_segments = m_next = m_inOrderBytes = 0;
  m_received.clear();
  m_requestAt = m_lastRx = m_stack.network().now();
  armIdle();
  if (m_state == State::Established) {
    sendRequest();
  }
}

void
TcpClientEnd::sendRequest()
{
  auto& net = m_stack.network();
  ++m_requestSent;
  send(sim::TcpSegment{.kind = Kind::Request, .exchange = m_exchange, .message = m_requestLine});
  if (m_requestTimer) {
    net.cancel(*m_requestTimer);
  }
  m_requestTimer = net.schedule(m_stack.node(), backedOff(rto(), m_requestSent - 1), [this] {
    m_requestTimer.reset();
    if (!m_active || m_started) {
      return;
    }
    if (m_requestSent > m_stack.config().maxRetransmits) {
      fail(TcpFailure::Timeout, "request unanswered");
    }
    else {
      sendRequest();
    }
  }, "tcp-req-timeout");
}

void
TcpClientEnd::onData(const sim::TcpSegment& seg)
{
  if (seg.exchange != m_exchange) {
    return;
  }
  if (!m_active) {
    // the final ack may have been lost
    if (m_started) {
      sendAck();
    }
    return;
  }
  m_lastRx = m_stack.network().now();
  const uint32_t mss = m_stack.config().mss;

  if (!m_started) {
    m_started = true;
    if (m_requestTimer) {
      m_stack.network().cancel(*m_requestTimer);
      m_requestTimer.reset();
    }
    // switch from the response deadline to the shorter idle deadline
    if (m_idleTimer) {
      m_stack.network().cancel(*m_idleTimer);
    }
    armIdle();
    m_length = seg.length;
    m_segments = (m_length + mss - 1) / mss;
    m_received.assign(m_segments, false);
    if (m_handlers.onStart) {
      m_handlers.onStart(m_length);
    }
    if (!m_active) {
      return;
    }
  }
  if (seg.seq < m_segments) {
    m_received[seg.seq] = true;
  }
  while (m_next < m_segments && m_received[m_next]) {
    ++m_next;
  }
  sendAck();

  uint64_t bytes = std::min<uint64_t>(m_next * mss, m_length);
  if (bytes > m_inOrderBytes) {
    m_inOrderBytes = bytes;
    if (m_handlers.onBytes) {
      m_handlers.onBytes(bytes);
    }
  }
  if (m_active && m_next == m_segments) {
    m_active = false;
    cancelTimers();
    auto done = std::move(m_handlers.onComplete);
    m_handlers = {};
    if (done) {
      done();
    }
  }
}

void
TcpClientEnd::armIdle()
{
  auto& net = m_stack.network();
  const auto& cfg = m_stack.config();
  Time deadline = m_started ? m_lastRx + cfg.idleTimeout : m_requestAt + cfg.responseTimeout;
  m_idleTimer = net.schedule(m_stack.node(), std::max(deadline - net.now(), Time(0)),
                             [this] { m_idleTimer.reset(); onIdleCheck(); }, "tcp-idle");
}

void
TcpClientEnd::onIdleCheck()
{
  if (!m_active) {
    return;
  }
  const auto& cfg = m_stack.config();
  Time now = m_stack.network().now();
  Time deadline = m_started ? m_lastRx + cfg.idleTimeout : m_requestAt + cfg.responseTimeout;
  if (now >= deadline) {
    fail(TcpFailure::Timeout, m_started ? "response stalled" : "no response");
  }
  else {
    armIdle();
  }
}

void
TcpClientEnd::cancelTimers()
{
  auto& net = m_stack.network();
  for (auto* t : {&m_synTimer, &m_requestTimer, &m_idleTimer}) {
    if (*t) {
      net.cancel(**t);
      t->reset();
    }
  }
}

void
TcpClientEnd::fail(TcpFailure failure, const std::string& reason)
{
  m_state = State::Closed;
  cancelTimers();
  if (m_active) {
    m_active = false;
    auto onFailed = std::move(m_handlers.onFailed);
    m_handlers = {};
    if (onFailed) {
      onFailed(failure, reason);
    }
  }
}

void
TcpClientEnd::abort()
{
  if (m_state == State::Closed) {
    return;
  }
  send(sim::TcpSegment{.kind = Kind::Reset, .exchange = m_exchange, .message = "aborted"});
  // handlers stay in place: abort may run from inside one of them
  m_state = State::Closed;
  m_active = false;
  cancelTimers();
}

// ---- TcpServerEnd

TcpServerEnd::TcpServerEnd(TcpStack& stack, uint64_t id, NodeId peer)
  : m_stack(stack)
  , m_id(id)
  , m_peer(peer)
  , m_face(stack.network().faceToward(stack.node(), peer))
  , m_reno(stack.config().reno)
{
}

void
TcpServerEnd::send(sim::TcpSegment seg)
{
  seg.connection = m_id;
  seg.fromInitiator = false;
  m_stack.network().send(m_stack.node(), m_face, std::move(seg));
}

void
TcpServerEnd::markEstablished(Time rtt)
{
  m_state = State::Established;
  m_srtt = rtt;
}

void
TcpServerEnd::rttSample(Time sample)
{
  m_srtt = m_srtt ? Time((7 * m_srtt->count() + sample.count()) / 8) : sample;
}

Time
TcpServerEnd::rto() const
{
  const auto& cfg = m_stack.config();
  Time base = m_srtt ? std::max(2 * *m_srtt, cfg.minRto) : cfg.initialRto;
  return backedOff(base, m_backoff);
}

void
TcpServerEnd::receive(const sim::TcpSegment& seg)
{
  if (m_state == State::Closed) {
    return;
  }
  switch (seg.kind) {
    case Kind::Syn:
      if (m_state == State::SynReceived) {
        ++m_synAckSent;
        m_synAckAt = m_stack.network().now();
        send(sim::TcpSegment{.kind = Kind::SynAck});
      }
      break;
    case Kind::Ack:
    case Kind::Request:
      if (m_state == State::SynReceived) {
        m_state = State::Established;
        if (m_synAckSent == 1) {
          rttSample(m_stack.network().now() - m_synAckAt);
        }
      }
      if (seg.kind == Kind::Request) {
        onRequest(seg);
      }
      else {
        onAck(seg);
      }
      break;
    case Kind::Reset:
      if (m_active) {
        m_active = false;
        close();
        if (m_onAbort) {
          m_onAbort(*this, TcpFailure::Reset);
        }
      }
      else {
        close();
      }
      break;
    default:
      break;
  }
}

void
TcpServerEnd::onRequest(const sim::TcpSegment& seg)
{
  if (seg.exchange <= m_exchange) {
    // retransmitted request for an exchange already in hand
    return;
  }
  m_exchange = seg.exchange;
  m_active = true;
  m_responding = false;
  if (m_rtoTimer) {
    m_stack.network().cancel(*m_rtoTimer);
    m_rtoTimer.reset();
  }

  HttpRequest req;
  try {
    req = HttpRequest::decode(seg.message);
  }
  catch (const HttpRequest::Error&) {
    reject("400 bad request");
    return;
  }
  if (m_onRequest) {
    m_onRequest(*this, req);
  }
}

void
TcpServerEnd::respond(uint64_t length)
{
  if (!m_active || m_responding) {
    throw std::logic_error("no request awaiting a response");
  }
  const uint32_t mss = m_stack.config().mss;
  uint64_t segments = (length + mss - 1) / mss;
  m_responding = true;
  m_length = length;
  m_reno.startTransfer(segments);
  m_sentAt.assign(segments, Time(-1));
  m_retransmitted.assign(segments, false);
  m_backoff = 0;
  m_consecutiveRtos = 0;
}

void
TcpServerEnd::supply(uint64_t bytes)
{
  if (!m_active || !m_responding) {
    return;
  }
  const uint32_t mss = m_stack.config().mss;
  uint64_t segments = bytes >= m_length ? m_reno.total() : bytes / mss;
  m_reno.setAvailable(segments);
  trySend();
}

void
TcpServerEnd::reject(const std::string& reason)
{
  if (m_state == State::Closed) {
    return;
  }
  send(sim::TcpSegment{.kind = Kind::Reset, .exchange = m_exchange, .message = reason});
  m_active = false;
  close();
}

void
TcpServerEnd::trySend()
{
  if (!m_active || !m_responding) {
    return;
  }
  auto& net = m_stack.network();
  const uint32_t mss = m_stack.config().mss;
  for (uint64_t seq : m_reno.pull()) {
    if (m_sentAt[seq] >= Time(0)) {
      m_retransmitted[seq] = true;
    }
    m_sentAt[seq] = net.now();
    auto payload = static_cast<uint32_t>(std::min<uint64_t>(mss, m_length - seq * mss));
    send(sim::TcpSegment{.kind = Kind::Data, .seq = seq, .payload = payload,
                         .exchange = m_exchange, .length = m_length});
  }
  if (!m_rtoTimer && m_reno.hasOutstanding()) {
    armRto();
  }
}

void
TcpServerEnd::armRto()
{
  auto& net = m_stack.network();
  if (m_rtoTimer) {
    net.cancel(*m_rtoTimer);
  }
  m_rtoTimer = net.schedule(m_stack.node(), rto(), [this] {
    m_rtoTimer.reset();
    onRto();
  }, "tcp-rto");
}

void
TcpServerEnd::onAck(const sim::TcpSegment& seg)
{
  if (!m_active || !m_responding || seg.exchange != m_exchange) {
    return;
  }
  auto kind = m_reno.onAck(seg.ack);
  if (kind == RenoSender::AckKind::New) {
    uint64_t seq = seg.ack - 1;
    if (seq < m_sentAt.size() && !m_retransmitted[seq]) {
      rttSample(m_stack.network().now() - m_sentAt[seq]);
    }
    m_backoff = 0;
    m_consecutiveRtos = 0;
    if (m_reno.hasOutstanding()) {
      armRto();
    }
    else if (m_rtoTimer) {
      m_stack.network().cancel(*m_rtoTimer);
      m_rtoTimer.reset();
    }
  }
  if (m_cwndObserver && kind != RenoSender::AckKind::Stale) {
    m_cwndObserver(m_reno);
  }
  if (m_reno.complete()) {
    m_active = false;
    m_responding = false;
    return;
  }
  trySend();
}

void
TcpServerEnd::onRto()
{
  if (!m_active || !m_responding || !m_reno.hasOutstanding()) {
    return;
  }
  if (++m_consecutiveRtos > m_stack.config().maxRetransmits) {
    m_active = false;
    close();
    if (m_onAbort) {
      m_onAbort(*this, TcpFailure::Timeout);
    }
    return;
  }
  m_reno.onTimeout();
  ++m_backoff;
  if (m_cwndObserver) {
    m_cwndObserver(m_reno);
  }
  trySend();
  if (!m_rtoTimer) {
    armRto();
  }
}

void
TcpServerEnd::close()
{
  m_state = State::Closed;
  if (m_rtoTimer) {
    m_stack.network().cancel(*m_rtoTimer);
    m_rtoTimer.reset();
  }
}

// ---- TcpStack

TcpStack::TcpStack(sim::Network& net, NodeId node, TcpConfig config)
  : m_net(net)
  , m_node(node)
  , m_config(config)
{
  if (m_config.mss == 0) {
    throw std::invalid_argument("mss must be positive");
  }
  m_net.setHandler(m_node, [this] (FaceId face, const sim::Packet& p) { receive(face, p); });
}

TcpClientEnd&
TcpStack::connect(NodeId peer)
{
  uint64_t id = (uint64_t{m_node} << 32) | m_nextId++;
  auto& end = *m_clients.emplace(id, std::make_unique<TcpClientEnd>(*this, id, peer))
                 .first->second;
  end.open();
  return end;
}

TcpClientEnd&
TcpStack::connectEstablished(TcpStack& peer)
{
  uint64_t id = (uint64_t{m_node} << 32) | m_nextId++;
  auto& end = *m_clients.emplace(id, std::make_unique<TcpClientEnd>(*this, id, peer.node()))
                 .first->second;
  Time rtt = 2 * m_net.link(m_net.linkBetween(m_node, peer.node())).params().delay;
  end.markEstablished(rtt);
  TcpServerEnd& server = peer.accept(id, m_node);
  server.markEstablished(rtt);
  return end;
}

TcpServerEnd&
TcpStack::accept(uint64_t id, NodeId peer)
{
  auto& end = *m_servers.emplace(id, std::make_unique<TcpServerEnd>(*this, id, peer))
                 .first->second;
  if (m_onAccept) {
    m_onAccept(end);
  }
  return end;
}

void
TcpStack::receive(FaceId face, const sim::Packet& packet)
{
  const auto* seg = std::get_if<sim::TcpSegment>(&packet);
  if (seg == nullptr) {
    return;
  }
  if (seg->fromInitiator) {
    auto it = m_servers.find(seg->connection);
    if (it != m_servers.end()) {
      it->second->receive(*seg);
    }
    else if (seg->kind == Kind::Syn) {
      accept(seg->connection, m_net.neighbor(m_node, face)).receive(*seg);
    }
    return;
  }
  auto it = m_clients.find(seg->connection);
  if (it != m_clients.end()) {
    it->second->receive(*seg);
  }
}

} // namespace ndncdn::http
