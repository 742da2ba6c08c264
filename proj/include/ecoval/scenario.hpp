#pragma once

// Scenario configuration, the deterministic tick loop, exports, multi-seed
// sweeps and the analytic report behind `ecoval analyze`.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "ecoval/agents.hpp"
#include "ecoval/metrics.hpp"
#include "ecoval/world.hpp"

namespace ecoval {

struct ScenarioConfig {
  std::string preset = "case1";
  SimParams agents;
  DemandProfile demand;
  StrategyConfig alpha_strategy{StrategyKind::control, 10, 0.0};
  StrategyConfig beta_strategy{StrategyKind::random, 10, 0.0};
  int ticks = 400;
  std::uint64_t seed = 42;
  NicheMode niche_mode = NicheMode::efficiency;
  std::optional<std::string> out_dir;
  bool events = false;

  void validate() const;
};

/// Preset as a config tree: "case1" (stable demand) or "case2" (region 3
/// reference jumps to 350 at tick 280).
nlohmann::ordered_json preset_tree(std::string_view name);

/// Parses a config tree. Unknown keys, wrong types and constraint
/// violations throw ConfigError naming the field path.
ScenarioConfig parse_scenario(const nlohmann::ordered_json& tree);
nlohmann::ordered_json to_tree(const ScenarioConfig& cfg);

/// `source` is a preset name or a JSON file; a file may name its base with
/// "preset" and is merged over that preset's defaults.
ScenarioConfig load_scenario(const std::string& source);
ScenarioConfig load_scenario(std::string_view preset, const std::optional<std::filesystem::path>& file);

struct CensusRow {
  int tick = 0;
  Ecosystem ecosystem = Ecosystem::alpha;
  std::array<std::uint64_t, kAttributeClasses> counts{};
};

struct EcosystemSummary {
  std::uint64_t n_agents = 0;
  double entropy = 0.0;
  double cum_cost = 0.0;
  double cum_gain = 0.0;
  double value_benefit = 0.0;
  double hub_pool = 0.0;
  std::uint64_t births = 0, deaths = 0, kills = 0;
  std::vector<RegionId> unlocked;
  std::vector<std::pair<RegionId, int>> unlock_ticks;
};

struct ConclusionChecks {
  /// The ecosystem with final entropy closer to log2 sqrt(n) has higher V.
  bool optimal_entropy = false;
  /// Final V_beta > V_alpha and H_beta >= H_alpha over the last 100 ticks.
  bool mature_market = false;
  /// C_beta > C_alpha at some tick after the burst, and final V_alpha > V_beta.
  bool emerging_market = false;
};

struct RunSummary {
  std::uint64_t seed = 0;
  int ticks = 0;
  std::optional<int> burst_tick;
  EcosystemSummary alpha, beta;
  ConclusionChecks conclusions;
};

struct RunOutput {
  ScenarioConfig config;
  std::vector<MetricsRecord> metrics;  // alpha then beta for each tick
  std::vector<CensusRow> census;
  EventLog events;
  LedgerReport ledger;
  RunSummary summary;
  bool valid = false;
};

/// Test seams; production runs use the defaults.
struct RunHooks {
  bool skip_strategy_tick = false;
  /// Maps internal agent ids to exported labels.
  std::function<AgentId(AgentId)> label;
  /// Called after each tick's snapshot.
  std::function<void(int tick, World&, Ecosystems&)> after_tick;
};

RunOutput run(const ScenarioConfig& config, const RunHooks& hooks = {});

ConclusionChecks evaluate_conclusions(const std::vector<MetricsRecord>& metrics, std::optional<int> burst_tick);

/// metrics.csv column order.
const std::vector<std::string>& metrics_columns();
void write_metrics_csv(std::ostream& os, const std::vector<MetricsRecord>& rows);
std::vector<MetricsRecord> read_metrics_csv(std::istream& is);
void write_census_csv(std::ostream& os, const std::vector<CensusRow>& rows);
std::vector<CensusRow> read_census_csv(std::istream& is);
void write_events_csv(std::ostream& os, const EventLog& log, const std::function<AgentId(AgentId)>& label = {});
nlohmann::ordered_json summary_json(const RunOutput& out);

/// Writes metrics.csv, census.csv, summary.json and, if recorded,
/// events.csv into `dir`. Returns the written paths.
std::vector<std::filesystem::path> export_run(const RunOutput& out, const std::filesystem::path& dir,
                                              const RunHooks& hooks = {});

struct SeedResult {
  std::uint64_t seed = 0;
  bool valid = false;
  EcosystemSummary alpha, beta;
  ConclusionChecks conclusions;
};

struct SweepReport {
  std::vector<SeedResult> runs;  // seed order
  std::size_t valid_runs = 0;
  double frac_optimal_entropy = 0.0;
  double frac_mature_market = 0.0;
  double frac_emerging_market = 0.0;
  double frac_beta_higher_value = 0.0;
  double frac_alpha_higher_value = 0.0;
};

/// Runs each seed independently on up to `jobs` threads. With `out_dir`,
/// each run is exported to out_dir/seed_<n>/.
SweepReport sweep(const ScenarioConfig& config, std::span<const std::uint64_t> seeds, unsigned jobs = 1,
                  const std::optional<std::filesystem::path>& out_dir = std::nullopt);
nlohmann::ordered_json sweep_json(const SweepReport& report);

/// Parses "1..10" or "3,5,8".
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

struct CensusEntry {
  std::string niche;
  std::uint64_t count = 0;
};

/// Reads "niche,count" lines; a non-numeric first line is a header.
std::vector<CensusEntry> read_census_file(std::istream& is);

struct AnalyzeReport {
  std::uint64_t nodes = 0;
  std::uint64_t niches = 0;
  double entropy = 0.0;
  double max_entropy = 0.0;
  OptimalPartition optimum;
  std::uint64_t integer_optimum = 0;
  OperatingCost cost;
  std::string position;  // "at optimum", "below optimum", "above optimum"
  std::optional<double> total_gain;
  std::optional<double> benefit;
  std::optional<double> max_benefit;
  std::optional<double> dividing_point;
};

AnalyzeReport analyze(const std::vector<CensusEntry>& census, double k, std::optional<double> niches_control = {},
                      std::optional<double> niches_random = {}, std::optional<double> total_gain = {});
void print_report(std::ostream& os, const AnalyzeReport& report);

}  // namespace ecoval
