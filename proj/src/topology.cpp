#include "mecsim/topology.hpp"

#include <algorithm>
#include <queue>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace mecsim {

namespace {

void check_range(double lo, double hi, const char* what) {
  if (!(lo <= hi) || lo < 0)
    throw std::invalid_argument(std::string("invalid range for ") + what);
}

bool is_connected(int n, const std::vector<WiredLink>& links) {
  if (n == 0) return false;
  std::vector<std::vector<int>> adj(n);
  for (const auto& l : links) {
    adj[l.a].push_back(l.b);
    adj[l.b].push_back(l.a);
  }
  std::vector<bool> seen(n, false);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = true;
  int visited = 1;
  while (!frontier.empty()) {
    int v = frontier.front();
    frontier.pop();
    for (int w : adj[v]) {
      if (!seen[w]) {
        seen[w] = true;
        ++visited;
        frontier.push(w);
      }
    }
  }
  return visited == n;
}

}  // namespace

int EdgeInfrastructure::closest_station() const {
  int best = 0;
  for (int v = 1; v < station_count(); ++v) {
    if (stations[v].distance_to_md < stations[best].distance_to_md) best = v;
  }
  return best;
}

EdgeInfrastructure build_infrastructure(const TopologyConfig& config, Rng& rng) {
  if (config.station_count < 1) throw std::invalid_argument("station_count must be >= 1");
  if (config.edge_probability < 0 || config.edge_probability > 1)
    throw std::invalid_argument("edge_probability must lie in [0,1]");
  check_range(config.cp_min_ghz, config.cp_max_ghz, "BS computing capacity");
  check_range(config.bw_min_mbps, config.bw_max_mbps, "link bandwidth");
  check_range(config.distance_min_m, config.distance_max_m, "MD distance");
  check_range(config.bs_tx_min_w, config.bs_tx_max_w, "BS tx power");
  if (config.distance_min_m <= 0) throw std::invalid_argument("distances must be positive");

  const int n = config.station_count;
  std::uniform_real_distribution<double> edge01(0.0, 1.0);

  // Random edge set, retried until connected. The fallback chain guarantees
  // termination for any edge probability.
  std::vector<std::pair<int, int>> edges;
  for (int attempt = 0;; ++attempt) {
    edges.clear();
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        if (edge01(rng) < config.edge_probability) edges.emplace_back(a, b);
    std::vector<WiredLink> probe;
    probe.reserve(edges.size());
    for (auto [a, b] : edges) probe.push_back(WiredLink{a, b, 1.0, 1.0});
    if (n == 1 || is_connected(n, probe)) break;
    if (attempt >= 200) {
      edges.clear();
      for (int v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
      break;
    }
  }

  EdgeInfrastructure infra;
  infra.route_weight = config.route_weight;
  infra.stations.resize(n);
  std::uniform_real_distribution<double> cp(config.cp_min_ghz, config.cp_max_ghz);
  std::uniform_real_distribution<double> tx(config.bs_tx_min_w, config.bs_tx_max_w);
  std::uniform_real_distribution<double> dist(config.distance_min_m, config.distance_max_m);
  for (int v = 0; v < n; ++v) {
    auto& s = infra.stations[v];
    s.id = v;
    s.compute_capacity_total = cp(rng);
    s.compute_available = s.compute_capacity_total;
    s.tx_power = tx(rng);
    s.distance_to_md = dist(rng);
  }

  std::uniform_real_distribution<double> bw(config.bw_min_mbps, config.bw_max_mbps);
  infra.links.reserve(edges.size());
  for (auto [a, b] : edges) {
    WiredLink l;
    l.a = a;
    l.b = b;
    l.bandwidth_total = bw(rng);
    l.bandwidth_available = l.bandwidth_total;
    infra.links.push_back(l);
  }

  infra.adjacency.assign(n, {});
  for (int i = 0; i < infra.link_count(); ++i) {
    infra.adjacency[infra.links[i].a].push_back(i);
    infra.adjacency[infra.links[i].b].push_back(i);
  }
  // Deterministic neighbor order for routing tie-breaks.
  for (auto& inc : infra.adjacency)
    std::sort(inc.begin(), inc.end());

  return infra;
}

RoutePath shortest_path(const EdgeInfrastructure& infra, int src, int dst) {
  const int n = infra.station_count();
  if (src < 0 || src >= n || dst < 0 || dst >= n)
    throw std::out_of_range("shortest_path: station id out of range");
  if (src == dst) return {};

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, inf);
  std::vector<int> prev_station(n, -1), prev_link(n, -1);
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  dist[src] = 0;
  heap.emplace(0.0, src);

  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (d > dist[v]) continue;
    if (v == dst) break;
    for (int li : infra.adjacency[v]) {
      const auto& l = infra.links[li];
      int w = l.other_end(v);
      double step = infra.route_weight == RouteWeight::kHops
                        ? 1.0
                        : 1.0 / std::max(l.bandwidth_total, 1e-12);
      if (dist[v] + step < dist[w]) {
        dist[w] = dist[v] + step;
        prev_station[w] = v;
        prev_link[w] = li;
        heap.emplace(dist[w], w);
      }
    }
  }

  if (dist[dst] == inf) throw std::runtime_error("shortest_path: destination unreachable");

  RoutePath path;
  for (int v = dst; v != src; v = prev_station[v]) {
    path.stations.push_back(v);
    path.links.push_back(prev_link[v]);
  }
  path.stations.push_back(src);
  std::reverse(path.stations.begin(), path.stations.end());
  std::reverse(path.links.begin(), path.links.end());
  return path;
}

double path_min_bandwidth(const EdgeInfrastructure& infra, const RoutePath& path) {
  if (path.empty()) return kInfiniteBandwidth;
  double lo = kInfiniteBandwidth;
  for (int li : path.links) lo = std::min(lo, infra.links[li].bandwidth_available);
  return lo;
}

namespace {

// Guards against -0 and tiny negative residue from float subtraction.
double clamp_nonnegative(double v) { return v < 0 ? 0.0 : v; }

}  // namespace

bool try_reserve_compute(EdgeInfrastructure& infra, int station, double ghz,
                         ReservationReceipt& receipt) {
  if (station < 0 || station >= infra.station_count())
    throw std::out_of_range("try_reserve_compute: station id out of range");
  if (ghz < 0) throw std::invalid_argument("compute demand must be non-negative");
  auto& s = infra.stations[station];
  if (ghz > s.compute_available) return false;
  s.compute_available = clamp_nonnegative(s.compute_available - ghz);
  if (ghz > 0) receipt.compute.emplace_back(station, ghz);
  return true;
}

bool try_reserve_flow(EdgeInfrastructure& infra, const RoutePath& path, double mbps,
                      ReservationReceipt& receipt) {
  if (mbps < 0) throw std::invalid_argument("bandwidth demand must be non-negative");
  if (mbps > path_min_bandwidth(infra, path)) return false;
  for (int li : path.links) {
    auto& l = infra.links[li];
    l.bandwidth_available = clamp_nonnegative(l.bandwidth_available - mbps);
    if (mbps > 0) receipt.bandwidth.emplace_back(li, mbps);
  }
  return true;
}

std::variant<ReservationReceipt, ReserveError> reserve_slot_resources(
    EdgeInfrastructure& infra, const SlotPlacementDemand& placement) {
  // Dry-run on a scratch ledger so a late failure leaves the real one intact.
  EdgeInfrastructure scratch = infra;
  ReservationReceipt probe;
  for (std::size_t i = 0; i < placement.compute.size(); ++i) {
    const auto& c = placement.compute[i];
    if (!try_reserve_compute(scratch, c.station, c.ghz, probe)) {
      std::ostringstream msg;
      msg << "compute demand " << c.ghz << " GHz exceeds availability on station "
          << c.station;
      return ReserveError{Constraint::C5, msg.str()};
    }
  }
  for (std::size_t i = 0; i < placement.flows.size(); ++i) {
    const auto& f = placement.flows[i];
    if (!try_reserve_flow(scratch, f.path, f.mbps, probe)) {
      std::ostringstream msg;
      msg << "flow demand " << f.mbps << " Mbps exceeds path bandwidth (flow " << i << ")";
      return ReserveError{Constraint::C6, msg.str()};
    }
  }

  ReservationReceipt receipt;
  for (const auto& c : placement.compute) try_reserve_compute(infra, c.station, c.ghz, receipt);
  for (const auto& f : placement.flows) try_reserve_flow(infra, f.path, f.mbps, receipt);
  return receipt;
}

void release_slot(EdgeInfrastructure& infra, ReservationReceipt& receipt) {
  if (receipt.released) throw std::logic_error("release_slot: receipt already released");
  for (auto [station, ghz] : receipt.compute)
    infra.stations[station].compute_available += ghz;
  for (auto [link, mbps] : receipt.bandwidth)
    infra.links[link].bandwidth_available += mbps;
  receipt.released = true;
}

std::string topology_snapshot(const EdgeInfrastructure& infra) {
  nlohmann::json j;
  j["route_weight"] = infra.route_weight == RouteWeight::kHops ? "hops" : "inverse_bandwidth";
  for (const auto& s : infra.stations) {
    j["stations"].push_back({{"id", s.id},
                             {"cp_total_ghz", s.compute_capacity_total},
                             {"cp_available_ghz", s.compute_available},
                             {"tx_power_w", s.tx_power},
                             {"distance_m", s.distance_to_md}});
  }
  j["links"] = nlohmann::json::array();
  for (const auto& l : infra.links) {
    j["links"].push_back({{"a", l.a},
                          {"b", l.b},
                          {"bw_total_mbps", l.bandwidth_total},
                          {"bw_available_mbps", l.bandwidth_available}});
  }
  return j.dump(2);
}

EdgeInfrastructure topology_from_snapshot(const std::string& json_text) {
  auto j = nlohmann::json::parse(json_text);
  EdgeInfrastructure infra;
  infra.route_weight = j.at("route_weight").get<std::string>() == "hops"
                           ? RouteWeight::kHops
                           : RouteWeight::kInverseBandwidth;
  for (const auto& sj : j.at("stations")) {
    BaseStation s;
    s.id = sj.at("id").get<int>();
    s.compute_capacity_total = sj.at("cp_total_ghz").get<double>();
    s.compute_available = sj.at("cp_available_ghz").get<double>();
    s.tx_power = sj.at("tx_power_w").get<double>();
    s.distance_to_md = sj.at("distance_m").get<double>();
    infra.stations.push_back(s);
  }
  for (const auto& lj : j.at("links")) {
    WiredLink l;
    l.a = lj.at("a").get<int>();
    l.b = lj.at("b").get<int>();
    l.bandwidth_total = lj.at("bw_total_mbps").get<double>();
    l.bandwidth_available = lj.at("bw_available_mbps").get<double>();
    infra.links.push_back(l);
  }
  infra.adjacency.assign(infra.station_count(), {});
  for (int i = 0; i < infra.link_count(); ++i) {
    infra.adjacency[infra.links[i].a].push_back(i);
    infra.adjacency[infra.links[i].b].push_back(i);
  }
  for (auto& inc : infra.adjacency)
    std::sort(inc.begin(), inc.end());
  return infra;
}

}  // namespace mecsim
