#ifndef NDNCDN_SIM_NETWORK_HPP
#define NDNCDN_SIM_NETWORK_HPP

#include "ndncdn/core/packet.hpp"
#include "ndncdn/sim/rng.hpp"
#include "ndncdn/sim/scheduler.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace ndncdn::sim {

using NodeId = uint32_t;
using LinkId = uint32_t;
/// Per-node interface number. 0 is the local application face, links are 1..n.
using FaceId = uint32_t;

constexpr FaceId APP_FACE = 0;
constexpr FaceId INVALID_FACE = UINT32_MAX;

enum class NodeRole
{
  Client,
  ClientSideCache,
  IntermediateCache,
  Origin,
  Router,
};

const char*
toString(NodeRole role);

/// Minimal TCP segment; HTTP payload bytes ride in Data segments.
struct TcpSegment
{
  enum class Kind : uint8_t
  {
    Syn,
    SynAck,
    Ack,
    Request,
    Data,
    Reset,
  };

  uint64_t connection = 0;
  /// true when sent by the side that opened the connection
  bool fromInitiator = true;
  Kind kind = Kind::Syn;
  /// segment index for Data
  uint64_t seq = 0;
  /// cumulative ack: next expected segment index
  uint64_t ack = 0;
  uint32_t payload = 0;
  /// request/response exchange on a persistent connection
  uint64_t exchange = 0;
  /// response length in bytes, carried on every Data segment
  uint64_t length = 0;
  /// request line on Request, reason on Reset
  std::string message;
};

const char*
toString(TcpSegment::Kind kind);

using Packet = std::variant<Interest, Data, TcpSegment>;

/// Bytes on the wire; header overhead is modeled as zero.
uint64_t
wireSize(const Packet& packet);

std::string
describe(const Packet& packet);

struct LinkParams
{
  Time delay = 10ms;
  /// per-packet drop probability in [0, 1], applied independently per direction
  double loss = 0.0;
  /// bytes per millisecond; absent means infinite bandwidth
  std::optional<double> rate;
};

/// Counters for one direction of a link.
struct LinkDirectionStats
{
  uint64_t sent = 0;
  uint64_t delivered = 0;
  uint64_t lost = 0;
  uint64_t downDrops = 0;
};

class Link
{
public:
  Link(LinkId id, NodeId a, NodeId b, LinkParams params, uint64_t seed);

  LinkId
  id() const noexcept
  {
    return m_id;
  }

  NodeId
  nodeA() const noexcept
  {
    return m_a;
  }

  NodeId
  nodeB() const noexcept
  {
    return m_b;
  }

  NodeId
  other(NodeId n) const noexcept
  {
    return n == m_a ? m_b : m_a;
  }

  const LinkParams&
  params() const noexcept
  {
    return m_params;
  }

  bool
  isUp() const noexcept
  {
    return m_up;
  }

  /// direction 0 is a->b, 1 is b->a
  const LinkDirectionStats&
  stats(int direction) const
  {
    return m_dir[direction].stats;
  }

private:
  friend class Network;

  struct Direction
  {
    Rng rng;
    Time lastArrival = 0us;
    Time busyUntil = 0us;
    LinkDirectionStats stats;
  };

  LinkId m_id;
  NodeId m_a;
  NodeId m_b;
  LinkParams m_params;
  bool m_up = true;
  Direction m_dir[2];
};

/** \brief Node and link container plus the delay/loss channel.
 *
 *  Nodes are fail-stop: once killed, arrivals and node-owned timers are discarded.
 */
class Network
{
public:
  class Error : public std::invalid_argument
  {
  public:
    using std::invalid_argument::invalid_argument;
  };

  using PacketHandler = std::function<void(FaceId inFace, const Packet& packet)>;

  /// Observes every transmission attempt and delivery; used by tests and metrics.
  struct TapEvent
  {
    enum class Kind
    {
      Send,
      Deliver,
      Lost,
      DownDrop,
      DeadDrop,
    };
    Kind kind;
    Time time;
    NodeId node;
    FaceId face;
    const Packet* packet;
  };
  using Tap = std::function<void(const TapEvent&)>;

  /// Notified when a node dies or a link changes state; argument is the affected link.
  using LinkStateListener = std::function<void(LinkId)>;

  explicit
  Network(uint64_t seed = 0);

  Network(const Network&) = delete;
  Network& operator=(const Network&) = delete;

  Scheduler&
  scheduler() noexcept
  {
    return m_scheduler;
  }

  Time
  now() const noexcept
  {
    return m_scheduler.now();
  }

  uint64_t
  seed() const noexcept
  {
    return m_seed;
  }

  NodeId
  addNode(std::string name, NodeRole role = NodeRole::Router);

  LinkId
  addLink(NodeId a, NodeId b, LinkParams params);

  size_t
  nodeCount() const noexcept
  {
    return m_nodes.size();
  }

  const std::string&
  nodeName(NodeId n) const
  {
    return node(n).name;
  }

  NodeRole
  nodeRole(NodeId n) const
  {
    return node(n).role;
  }

  std::optional<NodeId>
  findNode(std::string_view name) const;

  bool
  isAlive(NodeId n) const
  {
    return node(n).alive;
  }

  Link&
  link(LinkId id);

  const Link&
  link(LinkId id) const;

  size_t
  linkCount() const noexcept
  {
    return m_links.size();
  }

  /// Link faces of \p n, in creation order; face id i+1 is element i.
  size_t
  faceCount(NodeId n) const
  {
    return node(n).faces.size();
  }

  LinkId
  faceLink(NodeId n, FaceId face) const;

  NodeId
  neighbor(NodeId n, FaceId face) const;

  /// Face of \p n leading to adjacent \p peer, or INVALID_FACE.
  FaceId
  faceToward(NodeId n, NodeId peer) const;

  /// Link between two adjacent nodes. \throw Error if not adjacent
  LinkId
  linkBetween(NodeId a, NodeId b) const;

  /// Whether a packet sent on \p face could currently reach a live neighbor.
  bool
  isFaceUsable(NodeId n, FaceId face) const;

  void
  setHandler(NodeId n, PacketHandler handler);

  /** \brief Transmits \p packet from node \p from on link face \p face.
   *
   *  Dropped with probability equal to the link loss; otherwise delivered after the
   *  link delay, never before an earlier packet in the same direction.
   */
  void
  send(NodeId from, FaceId face, Packet packet);

  /// Timer owned by \p owner; silently skipped if the node is dead when it fires.
  EventId
  schedule(NodeId owner, Time delay, std::function<void()> fn, std::string kind = "timer",
           std::string detail = {});

  void
  cancel(EventId id)
  {
    m_scheduler.cancel(id);
  }

  /// Schedules a fail-stop kill of \p n at absolute time \p at.
  void
  killNodeAt(Time at, NodeId n);

  /// Schedules new delay/loss for \p id at \p at; in-flight packets keep their arrival time.
  void
  changeLinkAt(Time at, LinkId id, Time delay, double loss);

  void
  setLinkUpAt(Time at, LinkId id, bool up);

  /// Applies immediately.
  void
  killNode(NodeId n);

  void
  changeLink(LinkId id, Time delay, double loss);

  void
  setLinkUp(LinkId id, bool up);

  void
  addLinkStateListener(LinkStateListener listener)
  {
    m_linkListeners.push_back(std::move(listener));
  }

  void
  setTap(Tap tap)
  {
    m_tap = std::move(tap);
  }

  uint64_t
  deadDrops() const noexcept
  {
    return m_deadDrops;
  }

private:
  struct NodeRecord
  {
    std::string name;
    NodeRole role;
    bool alive = true;
    std::vector<LinkId> faces;
    PacketHandler handler;
  };

  const NodeRecord&
  node(NodeId n) const;

  NodeRecord&
  node(NodeId n);

  void
  deliver(NodeId to, FaceId face, const Packet& packet);

  std::string
  traceName(NodeId n) const
  {
    return m_scheduler.isTracing() ? m_nodes[n].name : std::string{};
  }

  void
  notifyLink(LinkId id);

  void
  tap(TapEvent::Kind kind, NodeId n, FaceId face, const Packet& p)
  {
    if (m_tap) {
      m_tap(TapEvent{kind, now(), n, face, &p});
    }
  }

private:
  uint64_t m_seed;
  Scheduler m_scheduler;
  std::vector<NodeRecord> m_nodes;
  std::vector<Link> m_links;
  std::vector<LinkStateListener> m_linkListeners;
  Tap m_tap;
  uint64_t m_deadDrops = 0;
};

} // namespace ndncdn::sim

#endif // NDNCDN_SIM_NETWORK_HPP
