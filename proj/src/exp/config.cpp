#include "ndncdn/exp/config.hpp"

#include <json.hpp>

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace ndncdn::exp {

using nlohmann::json;

std::string_view
toString(PlaneSelection p)
{
  switch (p) {
    case PlaneSelection::Ndn:
      return "ndn";
    case PlaneSelection::Http:
      return "http";
    case PlaneSelection::Both:
      return "both";
  }
  return "?";
}

namespace {

/// Splits "12.5MB" into 12.5 and "MB". \throw std::invalid_argument
std::pair<double, std::string_view>
splitNumber(std::string_view text)
{
  size_t i = 0;
  while (i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) ||
                             text[i] == '.' || text[i] == '-' || text[i] == '+' ||
                             text[i] == 'e' || text[i] == 'E')) {
    // an 'e' only belongs to the number when followed by a digit or sign
    if ((text[i] == 'e' || text[i] == 'E') &&
        (i + 1 >= text.size() ||
         !(std::isdigit(static_cast<unsigned char>(text[i + 1])) || text[i + 1] == '-' ||
           text[i + 1] == '+'))) {
      break;
    }
    ++i;
  }
  double value = 0.0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + i, value);
  if (i == 0 || ec != std::errc() || end != text.data() + i || !std::isfinite(value)) {
    throw std::invalid_argument("expected a number, got '" + std::string(text) + "'");
  }
  auto unit = text.substr(i);
  while (!unit.empty() && unit.front() == ' ') {
    unit.remove_prefix(1);
  }
  return {value, unit};
}

} // namespace

uint64_t
parseBytes(std::string_view text)
{
  auto [value, unit] = splitNumber(text);
  double scale = 0.0;
  if (unit.empty() || unit == "B") {
    scale = 1.0;
  }
  else if (unit == "KB") {
    scale = static_cast<double>(KiB);
  }
  else if (unit == "MB") {
    scale = static_cast<double>(MiB);
  }
  else if (unit == "GB") {
    scale = static_cast<double>(GiB);
  }
  else {
    throw std::invalid_argument("unknown size unit '" + std::string(unit) + "'");
  }
  double bytes = value * scale;
  if (bytes < 0.0) {
    throw std::invalid_argument("size must be >= 0");
  }
  if (bytes != std::floor(bytes) || bytes > 9.0e18) {
    throw std::invalid_argument("size must be a whole number of bytes");
  }
  return static_cast<uint64_t>(bytes);
}

Time
parseDuration(std::string_view text)
{
  auto [value, unit] = splitNumber(text);
  double us = 0.0;
  if (unit.empty() || unit == "ms") {
    us = value * 1000.0;
  }
  else if (unit == "s") {
    us = value * 1e6;
  }
  else if (unit == "us") {
    us = value;
  }
  else {
    throw std::invalid_argument("unknown time unit '" + std::string(unit) + "'");
  }
  if (us < 0.0) {
    throw std::invalid_argument("duration must be >= 0");
  }
  if (us > 1e15) {
    throw std::invalid_argument("duration too large");
  }
  return Time(std::llround(us));
}

double
parseProbability(std::string_view text)
{
  auto [value, unit] = splitNumber(text);
  double p = 0.0;
  if (unit.empty()) {
    p = value;
  }
  else if (unit == "%") {
    p = value / 100.0;
  }
  else {
    throw std::invalid_argument("unknown probability unit '" + std::string(unit) + "'");
  }
  if (p < 0.0 || p > 1.0) {
    throw std::invalid_argument("probability must be within [0, 1] (or 0%..100%)");
  }
  return p;
}

ScenarioConfig
defaultConfig(ExperimentId id)
{
  ScenarioConfig cfg;
  cfg.experiment = id;
  switch (id) {
    case ExperimentId::A:
      for (uint64_t mb : {1, 5, 10, 20, 50, 100}) {
        cfg.sizes.push_back(mb * MiB);
      }
      break;
    case ExperimentId::B:
      cfg.sizes = {1 * MiB};
      cfg.randomTopologies = 5;
      break;
    case ExperimentId::C:
      cfg.sizes = {100 * MiB};
      cfg.cache.clientSide = false;
      break;
    case ExperimentId::D:
      cfg.sizes = {100 * MiB};
      for (uint64_t mb : {1, 5, 10, 20, 50}) {
        cfg.ranges.push_back(mb * MiB);
      }
      break;
    case ExperimentId::E:
      cfg.sizes = {100 * MiB};
      break;
    case ExperimentId::F:
      cfg.sizes = {20 * MiB};
      for (auto& up : cfg.topology.upstream) {
        up = {50ms, 0.00001, {}};
      }
      cfg.ndn.strategy = ndn::StrategyMode::WeightedBestPath;
      break;
  }
  return cfg;
}

namespace {

/// Walks a JSON object, rejecting keys that no reader consumed.
class Reader
{
public:
  Reader(const json& j, std::string path)
    : m_json(j)
    , m_path(std::move(path))
  {
    if (!j.is_object()) {
      fail("expected an object");
    }
  }

  [[noreturn]] void
  fail(const std::string& what, const std::string& key = {}) const
  {
    std::string where = m_path;
    if (!key.empty()) {
      where += where.empty() ? key : "." + key;
    }
    throw ConfigError((where.empty() ? std::string("config") : where) + ": " + what);
  }

  const json*
  find(const std::string& key)
  {
    m_seen.insert(key);
    auto it = m_json.find(key);
    return it == m_json.end() ? nullptr : &*it;
  }

  std::string
  child(const std::string& key) const
  {
    return m_path.empty() ? key : m_path + "." + key;
  }

  template<typename T, typename Fn>
  void
  read(const std::string& key, T& out, Fn convert)
  {
    const json* v = find(key);
    if (v == nullptr) {
      return;
    }
    try {
      out = convert(*v);
    }
    catch (const ConfigError&) {
      throw;
    }
    catch (const std::exception& e) {
      fail(e.what(), key);
    }
  }

  void
  finish() const
  {
    for (const auto& [key, value] : m_json.items()) {
      if (m_seen.count(key) == 0) {
        fail("unknown key", key);
      }
    }
  }

private:
  const json& m_json;
  std::string m_path;
  std::set<std::string> m_seen;
};

std::string
textOf(const json& v)
{
  if (v.is_string()) {
    return v.get<std::string>();
  }
  if (v.is_number()) {
    std::ostringstream os;
    os.precision(17);
    os << v.get<double>();
    return os.str();
  }
  throw std::invalid_argument("expected a string or number");
}

uint64_t
bytesOf(const json& v)
{
  if (v.is_number_unsigned()) {
    return v.get<uint64_t>();
  }
  return parseBytes(textOf(v));
}

Time
durationOf(const json& v)
{
  return parseDuration(textOf(v));
}

double
probabilityOf(const json& v)
{
  return parseProbability(textOf(v));
}

std::string
stringOf(const json& v)
{
  if (!v.is_string()) {
    throw std::invalid_argument("expected a string");
  }
  return v.get<std::string>();
}

bool
boolOf(const json& v)
{
  if (!v.is_boolean()) {
    throw std::invalid_argument("expected true or false");
  }
  return v.get<bool>();
}

int64_t
intOf(const json& v)
{
  if (!v.is_number_integer()) {
    throw std::invalid_argument("expected an integer");
  }
  return v.get<int64_t>();
}

double
numberOf(const json& v)
{
  if (!v.is_number()) {
    throw std::invalid_argument("expected a number");
  }
  return v.get<double>();
}

std::vector<uint64_t>
byteListOf(const json& v)
{
  if (!v.is_array()) {
    throw std::invalid_argument("expected an array");
  }
  std::vector<uint64_t> out;
  for (size_t i = 0; i < v.size(); ++i) {
    try {
      out.push_back(bytesOf(v[i]));
    }
    catch (const std::exception& e) {
      throw std::invalid_argument("[" + std::to_string(i) + "]: " + e.what());
    }
  }
  return out;
}

ExperimentId
experimentOf(const json& v)
{
  auto s = stringOf(v);
  if (s.size() != 1 || s[0] < 'A' || s[0] > 'F') {
    throw std::invalid_argument("expected one of A, B, C, D, E, F");
  }
  return static_cast<ExperimentId>(s[0]);
}

PlaneSelection
planeOf(const json& v)
{
  auto s = stringOf(v);
  if (s == "ndn") {
    return PlaneSelection::Ndn;
  }
  if (s == "http") {
    return PlaneSelection::Http;
  }
  if (s == "both") {
    return PlaneSelection::Both;
  }
  throw std::invalid_argument("expected ndn, http or both");
}

void
readLink(const json& j, const std::string& path, sim::LinkParams& link)
{
  Reader r(j, path);
  r.read("delay", link.delay, durationOf);
  r.read("loss", link.loss, probabilityOf);
  if (const json* rate = r.find("rate"); rate != nullptr) {
    try {
      double v = numberOf(*rate);
      if (v <= 0.0) {
        throw std::invalid_argument("rate must be > 0 bytes per ms");
      }
      link.rate = v;
    }
    catch (const std::exception& e) {
      r.fail(e.what(), "rate");
    }
  }
  r.finish();
}

void
readLinkList(Reader& parent, const std::string& key, std::vector<sim::LinkParams>& links)
{
  const json* v = parent.find(key);
  if (v == nullptr) {
    return;
  }
  if (!v->is_array() || v->empty()) {
    parent.fail("expected a non-empty array of links", key);
  }
  std::vector<sim::LinkParams> out;
  for (size_t i = 0; i < v->size(); ++i) {
    sim::LinkParams link;
    readLink((*v)[i], parent.child(key) + "[" + std::to_string(i) + "]", link);
    out.push_back(link);
  }
  links = std::move(out);
}

void
readRange(Reader& parent, const std::string& key, auto convert, auto& lo, auto& hi)
{
  const json* v = parent.find(key);
  if (v == nullptr) {
    return;
  }
  if (!v->is_array() || v->size() != 2) {
    parent.fail("expected [min, max]", key);
  }
  try {
    lo = convert((*v)[0]);
    hi = convert((*v)[1]);
  }
  catch (const std::exception& e) {
    parent.fail(e.what(), key);
  }
}

std::string
locate(std::string_view text, size_t byte)
{
  size_t line = 1;
  size_t col = 1;
  for (size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    }
    else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

} // namespace

ScenarioConfig
parseConfig(std::string_view jsonText)
{
  json root;
  try {
    root = json::parse(jsonText);
  }
  catch (const json::parse_error& e) {
    // byte is one past the offending character
    throw ConfigError("malformed JSON at " + locate(jsonText, e.byte > 0 ? e.byte - 1 : 0) +
                      ": " + e.what());
  }

  Reader r(root, "");
  const json* id = r.find("experiment");
  if (id == nullptr) {
    r.fail("missing required key", "experiment");
  }
  ScenarioConfig cfg;
  try {
    cfg = defaultConfig(experimentOf(*id));
  }
  catch (const std::exception& e) {
    r.fail(e.what(), "experiment");
  }

  r.read("plane", cfg.plane, planeOf);
  r.read("repetitions", cfg.repetitions, [] (const json& v) {
    auto n = intOf(v);
    if (n < 1 || n > 100000) {
      throw std::invalid_argument("must be within [1, 100000]");
    }
    return static_cast<int>(n);
  });
  r.read("seed", cfg.seed, [] (const json& v) {
    if (!v.is_number_unsigned()) {
      throw std::invalid_argument("expected a non-negative integer");
    }
    return v.get<uint64_t>();
  });
  r.read("sizes", cfg.sizes, byteListOf);
  r.read("ranges", cfg.ranges, byteListOf);
  r.read("warm_bytes", cfg.warmBytes, bytesOf);
  r.read("random_topologies", cfg.randomTopologies, [] (const json& v) {
    auto n = intOf(v);
    if (n < 0 || n > 1000) {
      throw std::invalid_argument("must be within [0, 1000]");
    }
    return static_cast<int>(n);
  });
  r.read("switch_fraction", cfg.switchFraction, [] (const json& v) {
    double f = numberOf(v);
    if (f < 0.0 || f > 1.0) {
      throw std::invalid_argument("must be within [0, 1]");
    }
    return f;
  });
  r.read("kill_time", cfg.killTime, durationOf);

  if (const json* t = r.find("topology"); t != nullptr) {
    Reader tr(*t, "topology");
    if (const json* a = tr.find("access"); a != nullptr) {
      readLink(*a, "topology.access", cfg.topology.access);
    }
    readLinkList(tr, "upstream", cfg.topology.upstream);
    readLinkList(tr, "origin", cfg.topology.origin);
    tr.finish();
  }
  if (const json* l = r.find("loss_profile"); l != nullptr) {
    Reader lr(*l, "loss_profile");
    lr.read("access", cfg.lossProfile.access, probabilityOf);
    lr.read("upstream", cfg.lossProfile.upstream, probabilityOf);
    lr.read("origin", cfg.lossProfile.origin, probabilityOf);
    lr.finish();
  }
  if (const json* c = r.find("cache"); c != nullptr) {
    Reader cr(*c, "cache");
    cr.read("client_side", cfg.cache.clientSide, boolOf);
    cr.read("intermediate", cfg.cache.intermediate, boolOf);
    cr.read("capacity", cfg.cache.capacity, bytesOf);
    cr.finish();
  }
  if (const json* n = r.find("ndn"); n != nullptr) {
    Reader nr(*n, "ndn");
    nr.read("window", cfg.ndn.window, [] (const json& v) {
      auto w = intOf(v);
      if (w < 1 || w > 1000000) {
        throw std::invalid_argument("must be within [1, 1000000]");
      }
      return static_cast<size_t>(w);
    });
    nr.read("max_retries", cfg.ndn.maxRetries, [] (const json& v) {
      auto m = intOf(v);
      if (m < 0 || m > 1000) {
        throw std::invalid_argument("must be within [0, 1000]");
      }
      return static_cast<int>(m);
    });
    nr.read("chunk_size", cfg.ndn.chunkSize, bytesOf);
    nr.read("strategy", cfg.ndn.strategy,
            [] (const json& v) { return ndn::parseStrategyMode(stringOf(v)); });
    nr.read("quality", cfg.ndn.quality, [] (const json& v) {
      auto s = stringOf(v);
      if (s == "oracle") {
        return ndn::QualitySource::Oracle;
      }
      if (s == "measured") {
        return ndn::QualitySource::Measured;
      }
      throw std::invalid_argument("expected oracle or measured");
    });
    nr.read("strategy_interval", cfg.ndn.strategyInterval, durationOf);
    nr.finish();
  }
  if (const json* h = r.find("http"); h != nullptr) {
    Reader hr(*h, "http");
    hr.read("range_mode", cfg.http.rangeMode,
            [] (const json& v) { return http::parseRangeMode(stringOf(v)); });
    hr.read("lb_policy", cfg.http.lbPolicy,
            [] (const json& v) { return http::parseLbPolicy(stringOf(v)); });
    hr.read("prewarm", cfg.http.prewarm, boolOf);
    hr.finish();
  }
  if (const json* g = r.find("gap_window"); g != nullptr) {
    Reader gr(*g, "gap_window");
    gr.read("before", cfg.gapWindowBefore, durationOf);
    gr.read("after", cfg.gapWindowAfter, durationOf);
    gr.finish();
  }
  if (const json* d = r.find("degrade"); d != nullptr) {
    Reader dr(*d, "degrade");
    dr.read("time", cfg.degradeTime, durationOf);
    readRange(dr, "delay", durationOf, cfg.degradeDelayMin, cfg.degradeDelayMax);
    readRange(dr, "loss", probabilityOf, cfg.degradeLossMin, cfg.degradeLossMax);
    dr.finish();
  }
  r.finish();

  validate(cfg);
  return cfg;
}

ScenarioConfig
loadConfig(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError(path + ": cannot open file");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parseConfig(ss.str());
  }
  catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void
validate(const ScenarioConfig& cfg)
{
  auto fail = [] (const std::string& msg) { throw ConfigError(msg); };
  if (cfg.repetitions < 1) {
    fail("repetitions: must be >= 1");
  }
  for (size_t i = 0; i < cfg.sizes.size(); ++i) {
    if (cfg.sizes[i] == 0) {
      fail("sizes[" + std::to_string(i) + "]: file size must be > 0");
    }
  }
  if (cfg.topology.upstream.size() < 2) {
    fail("topology.upstream: the hierarchy needs two intermediates");
  }
  if (cfg.topology.origin.empty()) {
    fail("topology.origin: at least one origin link is required");
  }
  if (cfg.ndn.chunkSize == 0) {
    fail("ndn.chunk_size: must be > 0");
  }
  if (cfg.ndn.strategyInterval <= 0us) {
    fail("ndn.strategy_interval: must be > 0");
  }
  if (cfg.degradeDelayMin > cfg.degradeDelayMax) {
    fail("degrade.delay: min exceeds max");
  }
  if (cfg.degradeLossMin > cfg.degradeLossMax) {
    fail("degrade.loss: min exceeds max");
  }
  if (cfg.experiment == ExperimentId::D) {
    if (cfg.sizes.size() != 1) {
      fail("sizes: experiment D takes exactly one object size");
    }
    for (size_t i = 0; i < cfg.ranges.size(); ++i) {
      if (cfg.ranges[i] == 0 || cfg.ranges[i] > cfg.sizes[0]) {
        fail("ranges[" + std::to_string(i) + "]: must be within (0, object size]");
      }
    }
    if (cfg.warmBytes > cfg.sizes[0]) {
      fail("warm_bytes: exceeds the object size");
    }
  }
}

} // namespace ndncdn::exp
