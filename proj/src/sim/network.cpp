#include "ndncdn/sim/network.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ndncdn::sim {

const char*
toString(NodeRole role)
{
  switch (role) {
    case NodeRole::Client:
      return "client";
    case NodeRole::ClientSideCache:
      return "client_side_cache";
    case NodeRole::IntermediateCache:
      return "intermediate_cache";
    case NodeRole::Origin:
      return "origin";
    case NodeRole::Router:
      return "router";
  }
  return "?";
}

const char*
toString(TcpSegment::Kind kind)
{
  switch (kind) {
    case TcpSegment::Kind::Syn:
      return "SYN";
    case TcpSegment::Kind::SynAck:
      return "SYN-ACK";
    case TcpSegment::Kind::Ack:
      return "ACK";
    case TcpSegment::Kind::Request:
      return "REQ";
    case TcpSegment::Kind::Data:
      return "DATA";
    case TcpSegment::Kind::Reset:
      return "RST";
  }
  return "?";
}

uint64_t
wireSize(const Packet& packet)
{
  struct Visitor
  {
    uint64_t operator()(const Interest& i) const { return i.name.toUri().size(); }
    uint64_t operator()(const Data& d) const { return d.storedSize(); }
    uint64_t operator()(const TcpSegment& s) const { return s.payload + s.message.size(); }
  };
  return std::visit(Visitor{}, packet);
}

std::string
describe(const Packet& packet)
{
  std::ostringstream os;
  if (auto* i = std::get_if<Interest>(&packet)) {
    os << "interest " << i->name << " nonce=" << i->nonce;
  }
  else if (auto* d = std::get_if<Data>(&packet)) {
    os << "data " << d->name << " bytes=" << d->payloadSize;
  }
  else {
    const auto& s = std::get<TcpSegment>(packet);
    os << "tcp conn=" << s.connection << ' ' << toString(s.kind)
       << (s.fromInitiator ? " fwd" : " rev") << " seq=" << s.seq << " ack=" << s.ack
       << " len=" << s.payload << " x=" << s.exchange;
    if (!s.message.empty()) {
      os << " msg=" << s.message;
    }
  }
  return os.str();
}

Link::Link(LinkId id, NodeId a, NodeId b, LinkParams params, uint64_t seed)
  : m_id(id)
  , m_a(a)
  , m_b(b)
  , m_params(params)
  , m_dir{{Rng(seed, {0x4c494e4bULL, id, 0})}, {Rng(seed, {0x4c494e4bULL, id, 1})}}
{
}

Network::Network(uint64_t seed)
  : m_seed(seed)
{
}

NodeId
Network::addNode(std::string name, NodeRole role)
{
  if (findNode(name)) {
    throw Error("duplicate node name '" + name + "'");
  }
  m_nodes.push_back(NodeRecord{std::move(name), role, true, {}, {}});
  return static_cast<NodeId>(m_nodes.size() - 1);
}

LinkId
Network::addLink(NodeId a, NodeId b, LinkParams params)
{
  node(a);
  node(b);
  if (a == b) {
    throw Error("link endpoints must differ");
  }
  if (params.delay < 0us) {
    throw Error("link delay must be >= 0");
  }
  if (!(params.loss >= 0.0 && params.loss <= 1.0)) {
    throw Error("link loss must be within [0, 1]");
  }
  if (params.rate && !(*params.rate > 0.0)) {
    throw Error("link rate must be positive");
  }
  auto id = static_cast<LinkId>(m_links.size());
  m_links.emplace_back(id, a, b, params, m_seed);
  node(a).faces.push_back(id);
  node(b).faces.push_back(id);
  return id;
}

std::optional<NodeId>
Network::findNode(std::string_view name) const
{
  for (size_t i = 0; i < m_nodes.size(); ++i) {
    if (m_nodes[i].name == name) {
      return static_cast<NodeId>(i);
    }
  }
  return std::nullopt;
}

const Network::NodeRecord&
Network::node(NodeId n) const
{
  if (n >= m_nodes.size()) {
    throw Error("unknown node id " + std::to_string(n));
  }
  return m_nodes[n];
}

Network::NodeRecord&
Network::node(NodeId n)
{
  return const_cast<NodeRecord&>(std::as_const(*this).node(n));
}

Link&
Network::link(LinkId id)
{
  if (id >= m_links.size()) {
    throw Error("unknown link id " + std::to_string(id));
  }
  return m_links[id];
}

const Link&
Network::link(LinkId id) const
{
  return const_cast<Network*>(this)->link(id);
}

LinkId
Network::faceLink(NodeId n, FaceId face) const
{
  const auto& rec = node(n);
  if (face == APP_FACE || face > rec.faces.size()) {
    throw Error("node " + rec.name + " has no link face " + std::to_string(face));
  }
  return rec.faces[face - 1];
}

NodeId
Network::neighbor(NodeId n, FaceId face) const
{
  return link(faceLink(n, face)).other(n);
}

FaceId
Network::faceToward(NodeId n, NodeId peer) const
{
  const auto& rec = node(n);
  for (size_t i = 0; i < rec.faces.size(); ++i) {
    if (m_links[rec.faces[i]].other(n) == peer) {
      return static_cast<FaceId>(i + 1);
    }
  }
  return INVALID_FACE;
}

LinkId
Network::linkBetween(NodeId a, NodeId b) const
{
  FaceId f = faceToward(a, b);
  if (f == INVALID_FACE) {
    throw Error("nodes " + nodeName(a) + " and " + nodeName(b) + " are not adjacent");
  }
  return faceLink(a, f);
}

bool
Network::isFaceUsable(NodeId n, FaceId face) const
{
  if (face == APP_FACE) {
    return isAlive(n);
  }
  const Link& l = link(faceLink(n, face));
  return isAlive(n) && l.isUp() && isAlive(l.other(n));
}

void
Network::setHandler(NodeId n, PacketHandler handler)
{
  node(n).handler = std::move(handler);
}

void
Network::send(NodeId from, FaceId face, Packet packet)
{
  if (!isAlive(from)) {
    return;
  }
  LinkId lid = faceLink(from, face);
  Link& l = m_links[lid];
  int dir = from == l.m_a ? 0 : 1;
  auto& d = l.m_dir[dir];
  NodeId to = l.other(from);
  ++d.stats.sent;
  tap(TapEvent::Kind::Send, from, face, packet);

  if (!l.m_up) {
    ++d.stats.downDrops;
    tap(TapEvent::Kind::DownDrop, from, face, packet);
    return;
  }

  Time departure = now();
  if (l.m_params.rate) {
    Time start = std::max(now(), d.busyUntil);
    auto bytes = static_cast<double>(wireSize(packet));
    d.busyUntil = start + fromMs(bytes / *l.m_params.rate);
    departure = d.busyUntil;
  }

  // one draw per transmission keeps each direction's stream aligned with its own traffic
  bool lost = d.rng.uniform01() < l.m_params.loss;
  if (lost) {
    ++d.stats.lost;
    tap(TapEvent::Kind::Lost, from, face, packet);
    return;
  }

  Time arrival = std::max(departure + l.m_params.delay, d.lastArrival);
  d.lastArrival = arrival;
  ++d.stats.delivered;

  FaceId inFace = faceToward(to, from);
  std::string detail;
  if (m_scheduler.isTracing()) {
    detail = "face=" + std::to_string(inFace) + " from=" + nodeName(from) + " " + describe(packet);
  }
  m_scheduler.schedule(arrival,
                       [this, to, inFace, p = std::move(packet)] { deliver(to, inFace, p); },
                       traceName(to), "recv", std::move(detail));
}

void
Network::deliver(NodeId to, FaceId face, const Packet& packet)
{
  auto& rec = m_nodes[to];
  if (!rec.alive) {
    ++m_deadDrops;
    tap(TapEvent::Kind::DeadDrop, to, face, packet);
    return;
  }
  tap(TapEvent::Kind::Deliver, to, face, packet);
  if (rec.handler) {
    rec.handler(face, packet);
  }
}

EventId
Network::schedule(NodeId owner, Time delay, std::function<void()> fn, std::string kind,
                  std::string detail)
{
  return m_scheduler.scheduleIn(delay,
                                [this, owner, fn = std::move(fn)] {
                                  if (m_nodes[owner].alive) {
                                    fn();
                                  }
                                },
                                traceName(owner), std::move(kind), std::move(detail));
}

void
Network::killNodeAt(Time at, NodeId n)
{
  node(n);
  m_scheduler.schedule(at, [this, n] { killNode(n); }, nodeName(n), "fault", "kill");
}

void
Network::changeLinkAt(Time at, LinkId id, Time delay, double loss)
{
  link(id);
  if (delay < 0us || !(loss >= 0.0 && loss <= 1.0)) {
    throw Error("invalid link change for link " + std::to_string(id));
  }
  std::string detail;
  if (m_scheduler.isTracing()) {
    detail = "link=" + std::to_string(id) + " delay_ms=" + std::to_string(toMs(delay)) +
             " loss=" + std::to_string(loss);
  }
  m_scheduler.schedule(at, [this, id, delay, loss] { changeLink(id, delay, loss); }, {},
                       "link-change", std::move(detail));
}

void
Network::setLinkUpAt(Time at, LinkId id, bool up)
{
  link(id);
  m_scheduler.schedule(at, [this, id, up] { setLinkUp(id, up); }, {}, "link-change",
                       "link=" + std::to_string(id) + (up ? " up" : " down"));
}

void
Network::killNode(NodeId n)
{
  auto& rec = node(n);
  if (!rec.alive) {
    return;
  }
  rec.alive = false;
  for (LinkId l : rec.faces) {
    notifyLink(l);
  }
}

void
Network::changeLink(LinkId id, Time delay, double loss)
{
  Link& l = link(id);
  l.m_params.delay = delay;
  l.m_params.loss = loss;
  notifyLink(id);
}

void
Network::setLinkUp(LinkId id, bool up)
{
  link(id).m_up = up;
  notifyLink(id);
}

void
Network::notifyLink(LinkId id)
{
  for (const auto& listener : m_linkListeners) {
    listener(id);
  }
}

} // namespace ndncdn::sim
