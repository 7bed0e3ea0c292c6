#pragma once

#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "mecsim/constraints.hpp"
#include "mecsim/random.hpp"

namespace mecsim {

enum class RouteWeight { kHops, kInverseBandwidth };

struct TopologyConfig {
  int station_count = 10;
  double edge_probability = 0.4;
  double cp_min_ghz = 2.0;
  double cp_max_ghz = 6.0;
  double bw_min_mbps = 20.0;
  double bw_max_mbps = 100.0;
  double distance_min_m = 100.0;
  double distance_max_m = 800.0;
  double bs_tx_min_w = 1.0;
  double bs_tx_max_w = 2.0;
  RouteWeight route_weight = RouteWeight::kHops;
};

struct BaseStation {
  int id = -1;
  double compute_capacity_total = 0.0;  // GHz
  double compute_available = 0.0;       // GHz
  double tx_power = 0.0;                // Watt
  double distance_to_md = 0.0;          // meters
};

struct WiredLink {
  int a = -1;  // station ids, a < b
  int b = -1;
  double bandwidth_total = 0.0;      // Mbps
  double bandwidth_available = 0.0;  // Mbps

  int other_end(int station) const { return station == a ? b : a; }
};

struct RoutePath {
  std::vector<int> stations;  // visited station ids, empty when src == dst
  std::vector<int> links;     // indices into EdgeInfrastructure::links

  bool empty() const { return links.empty(); }
  std::size_t hop_count() const { return links.size(); }
};

/// Substrate graph plus the per-slot compute/bandwidth ledger.
struct EdgeInfrastructure {
  std::vector<BaseStation> stations;
  std::vector<WiredLink> links;
  std::vector<std::vector<int>> adjacency;  // station id -> incident link indices
  RouteWeight route_weight = RouteWeight::kHops;

  int station_count() const { return static_cast<int>(stations.size()); }
  int link_count() const { return static_cast<int>(links.size()); }

  /// Station closest to the MD (lowest id on ties).
  int closest_station() const;
};

struct ReservationReceipt {
  std::vector<std::pair<int, double>> compute;    // (station id, GHz)
  std::vector<std::pair<int, double>> bandwidth;  // (link index, Mbps)
  bool released = false;

  bool empty() const { return compute.empty() && bandwidth.empty(); }
};

/// Batch reservation request for one slot's placement.
struct SlotPlacementDemand {
  struct Compute {
    int station;
    double ghz;
  };
  struct Flow {
    RoutePath path;
    double mbps;
  };
  std::vector<Compute> compute;
  std::vector<Flow> flows;
};

struct ReserveError {
  Constraint violated;  // C5 or C6
  std::string detail;
};

inline constexpr double kInfiniteBandwidth = std::numeric_limits<double>::infinity();

EdgeInfrastructure build_infrastructure(const TopologyConfig& config, Rng& rng);

/// Minimal-weight route between two stations; empty path when src == dst.
RoutePath shortest_path(const EdgeInfrastructure& infra, int src, int dst);

/// Smallest available bandwidth along the path; +infinity for an empty path.
double path_min_bandwidth(const EdgeInfrastructure& infra, const RoutePath& path);

/// All-or-nothing reservation of every demand in `placement`.
std::variant<ReservationReceipt, ReserveError> reserve_slot_resources(
    EdgeInfrastructure& infra, const SlotPlacementDemand& placement);

/// Restores every amount recorded in the receipt. Throws on double release.
void release_slot(EdgeInfrastructure& infra, ReservationReceipt& receipt);

// Incremental primitives used by the EI environment. On success the delta is
// applied and appended to `receipt`; on failure the ledger is untouched.
bool try_reserve_compute(EdgeInfrastructure& infra, int station, double ghz,
                         ReservationReceipt& receipt);
bool try_reserve_flow(EdgeInfrastructure& infra, const RoutePath& path, double mbps,
                      ReservationReceipt& receipt);

/// Plain-text (JSON) snapshot of stations, links and capacities.
std::string topology_snapshot(const EdgeInfrastructure& infra);
EdgeInfrastructure topology_from_snapshot(const std::string& json_text);

}  // namespace mecsim
