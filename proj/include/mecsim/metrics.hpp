#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "mecsim/orchestrator.hpp"

namespace mecsim {

struct CellKey {
  std::string scheme;
  double cp_md = 0.0;
  std::uint64_t seed = 0;

  std::string run_id() const;
  bool operator<(const CellKey& other) const;
};

/// Logs backing one sweep cell.
struct CellLogs {
  CellKey key;
  std::vector<EpisodeLog> training;
  std::vector<EpisodeLog> evaluation;
};

struct CellMetrics {
  double aed = 0.0;  // mean DC per evaluation slot
  double aec = 0.0;  // mean EC
  double auc = 0.0;  // mean UC
  double mean_cost = 0.0;
  double nac = 0.0;  // min-max of mean_cost across schemes, per (cp_md, seed)
  double mean_cumulative_reward = 0.0;     // evaluation episodes
  double average_episodic_reward = 0.0;    // final 10% of training episodes
};

struct MetricsTable {
  std::vector<std::pair<CellKey, CellMetrics>> rows;
};

MetricsTable compute_metrics(const std::vector<CellLogs>& cells);

struct RankRow {
  std::string scheme;
  double average_rank = 0.0;
  int position = 0;
};

/// metric name -> per-scheme average Friedman rank and ordinal position.
using RankTable = std::map<std::string, std::vector<RankRow>>;

/// Scenarios are the distinct cp_md values; schemes are ranked ascending
/// (lower metric is better) with tied ranks averaged, then averaged across
/// scenarios. Throws when a scheme is missing from any scenario.
RankTable friedman_ranks(const MetricsTable& table);

// --- CSV emission/ingestion (9 significant digits for reals) ---

std::string format_real(double v);

void write_episodes_csv(const std::filesystem::path& path, const std::string& run_id,
                        const std::vector<EpisodeLog>& logs);
void write_slots_csv(const std::filesystem::path& path, const std::string& run_id,
                     const std::vector<EpisodeLog>& logs);
std::vector<EpisodeLog> read_episodes_csv(const std::filesystem::path& path);
std::vector<EpisodeLog> read_slots_csv(const std::filesystem::path& path);

void write_metrics_csv(const std::filesystem::path& path, const MetricsTable& table);
void write_ranks_csv(const std::filesystem::path& path, const RankTable& table);
void write_reward_curves_csv(const std::filesystem::path& path,
                             const std::vector<CellLogs>& cells);

/// Loads every completed cell directory (meta.json present) under `sweep_dir`.
std::vector<CellLogs> load_sweep_cells(const std::filesystem::path& sweep_dir);

}  // namespace mecsim
