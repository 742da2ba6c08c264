#pragma once

// Supply side: agents perceive, move, claim and process orders, pay
// operating and distance costs, reproduce with inherited and mutated
// traits, die when broke, and fight agents of the rival ecosystem.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ecoval/common.hpp"
#include "ecoval/geometry.hpp"
#include "ecoval/strategy.hpp"
#include "ecoval/world.hpp"

namespace ecoval {

/// Per-tick gained/consumed ring buffer over a trailing window.
class EfficiencyWindow {
 public:
  explicit EfficiencyWindow(int window = 20)
      : gained_(static_cast<std::size_t>(window), 0.0),
        consumed_(static_cast<std::size_t>(window), 0.0) {}

  /// Clears the slot that `tick` reuses.
  void roll(int tick) {
    const auto i = slot(tick);
    gained_[i] = 0.0;
    consumed_[i] = 0.0;
  }
  void add_gain(int tick, double v) { gained_[slot(tick)] += v; }
  void add_cost(int tick, double v) { consumed_[slot(tick)] += v; }

  double gained() const;
  double consumed() const;
  int size() const noexcept { return static_cast<int>(gained_.size()); }

 private:
  std::size_t slot(int tick) const { return static_cast<std::size_t>(tick) % gained_.size(); }
  std::vector<double> gained_;
  std::vector<double> consumed_;
};

struct Agent {
  AgentId id = 0;
  Ecosystem ecosystem = Ecosystem::alpha;
  int level = 1;
  Cell position;
  double capital = 0.0;
  int speed = 1;
  int vision = 1;
  RegionId home_region = 1;
  int born_tick = 0;
  double period_profit = 0.0;
  EfficiencyWindow efficiency;
};

enum class InitialLevels { primary, random };

struct ExpansionGate {
  std::size_t min_agents = 25;
  double min_capital = 4000.0;
};

struct SimParams {
  double reproduction_threshold = 300.0;
  double reproduction_punishment_k = 3.0;
  double death_threshold = 0.0;
  ExpansionGate adjacent{25, 4000.0};
  ExpansionGate emerging{125, 15000.0};
  int initial_alpha = 12;
  int initial_beta = 14;
  double capital_lo = 180.0;
  double capital_hi = 220.0;
  int trait_lo = 1;  // speed and vision bounds
  int trait_hi = 5;
  InitialLevels initial_levels = InitialLevels::primary;
  int efficiency_window = 20;

  void validate() const;
};

struct EcosystemState {
  Ecosystem id = Ecosystem::alpha;
  StrategyConfig strategy;
  RegionId home_region = 1;
  std::vector<Agent> agents;  // living, ascending id
  std::array<bool, kRegionCount + 1> unlocked{};

  Tally cum_cost;
  Tally cum_gain;
  std::uint64_t births = 0;
  std::uint64_t deaths = 0;
  std::uint64_t kills = 0;

  // conservation ledger terms
  Tally initial_endowments;
  Tally child_endowments;  // moved from parent to child
  Tally writeoffs;         // residual capital of bankrupt agents
  Tally hub_collected;
  Tally hub_distributed;

  EcosystemState() = default;
  EcosystemState(Ecosystem id, StrategyKind kind, RegionId home, int hub_period = 10);

  bool is_unlocked(RegionId r) const { return unlocked.at(static_cast<std::size_t>(r)); }
  Agent* find(AgentId id);
  const Agent* find(AgentId id) const;
  double living_capital() const;
  /// Living capital plus the hub pool.
  double total_capital() const { return living_capital() + strategy.hub_pool; }
  std::array<std::size_t, kMaxLevel> count_by_level() const;
};

/// Both rival ecosystems, indexable by Ecosystem.
struct Ecosystems {
  EcosystemState alpha;
  EcosystemState beta;

  EcosystemState& operator[](Ecosystem e) { return e == Ecosystem::alpha ? alpha : beta; }
  const EcosystemState& operator[](Ecosystem e) const { return e == Ecosystem::alpha ? alpha : beta; }
};

enum class EventKind { birth, death, kill, claim, unlock };
std::string_view to_string(EventKind k) noexcept;

struct Event {
  int tick = 0;
  EventKind kind = EventKind::birth;
  AgentId agent = 0;
  Ecosystem ecosystem = Ecosystem::alpha;
  std::string detail;

  bool operator==(const Event&) const = default;
};

struct EventLog {
  bool record_claims = false;
  std::vector<Event> events;

  void add(int tick, EventKind kind, AgentId agent, Ecosystem eco, std::string detail = {}) {
    if (kind == EventKind::claim && !record_claims) return;
    events.push_back({tick, kind, agent, eco, std::move(detail)});
  }
};

/// Creates an initial agent (no parent) or a child. A child inherits speed
/// and vision with a +-1 mutation, takes the level with the largest
/// per-agent order backlog, is placed within the parent's vision and is
/// endowed from the parent's capital; the parent also pays 3 per cell of
/// placement distance. Throws std::logic_error if the parent is below the
/// reproduction threshold.
Agent& spawn_agent(EcosystemState& eco, Agent* parent, World& world, const SimParams& params);

/// Level for a newborn: the stage L maximizing outstanding stage-L orders in
/// unlocked regions per (1 + living level-L agents); ties to the lower L.
int child_level(const EcosystemState& eco, const World& world);

/// Highest order stage reachable from the ecosystem's unlocked regions.
int max_unlocked_level(const EcosystemState& eco, const World& world);

/// Whether the agent may stand on `c`.
bool is_accessible(const EcosystemState& eco, Cell c);

struct ActionRecord {
  double operation_cost = 0.0;
  double distance_cost = 0.0;
  int cells_moved = 0;
  std::optional<OrderId> target;
  std::optional<Order> claimed;
};

/// One agent's move: pay operation cost, head for the nearest visible order
/// of its level (or random-walk), pay distance cost, and claim an order
/// within one cell. The claimed order leaves the world's live set.
ActionRecord agent_tick(Agent& agent, World& world, EcosystemState& eco, EventLog* log = nullptr);

struct ProcessOutcome {
  bool completed = false;
  double released = 0.0;
  double forfeited = 0.0;
  std::optional<OrderId> derived;
};

/// Records the agent's stage share in escrow, then either derives the next
/// stage at the agent's position or, on the last stage, releases the whole
/// escrow through each recipient ecosystem's strategy.
ProcessOutcome process_order(Agent& agent, Order order, World& world, Ecosystems& ecosystems);

struct KillEvent {
  AgentId killer = 0;
  Ecosystem killer_ecosystem = Ecosystem::alpha;
  AgentId victim = 0;
  double absorbed = 0.0;
};

/// Adjacent (Chebyshev <= 1) agents of different ecosystems fight; the
/// strictly richer absorbs the other's capital. Victims in ascending id.
std::vector<KillEvent> resolve_combat(World& world, Ecosystems& ecosystems, EventLog* log = nullptr);

struct LifecycleEvents {
  std::vector<AgentId> born;
  std::vector<AgentId> died;
  double written_off = 0.0;
};

LifecycleEvents lifecycle(EcosystemState& eco, World& world, const SimParams& params,
                          EventLog* log = nullptr);

/// Unlocks regions whose (agent count, total capital) gate is met. Monotone.
std::vector<RegionId> try_expand(EcosystemState& eco, const SimParams& params);

/// Adds the initial population of an ecosystem.
void seed_population(EcosystemState& eco, int count, World& world, const SimParams& params);

}  // namespace ecoval
