#pragma once

// The demand side: a 250x120 grid split into five regions, an order pool
// topped up to the market-trend target every tick, staged order chains with
// escrowed payouts, and order expiry.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ecoval/common.hpp"
#include "ecoval/geometry.hpp"
#include "ecoval/random.hpp"

namespace ecoval {

struct Region {
  RegionId id = 1;
  Cell center;
  double distance_cost_k = 1.0;  // value per cell moved
  double op_cost_lo = 3.0;       // value per tick
  double op_cost_hi = 5.0;
  int complexity = 1;
};

/// The fixed five-region table: initial (1, 4), adjacent (2, 5), emerging (3).
const std::array<Region, kRegionCount>& standard_regions();
const Region& region(RegionId id);

/// Nearest region center, ties to the lower id. Throws std::domain_error
/// outside the grid.
RegionId region_of(Cell pos);

/// Y = N + M sin(2 pi t / P); N switches to a burst value from its tick on.
struct RegionTrend {
  double reference = 200.0;
  double amplitude = 25.0;
  int period = 100;
  std::map<int, double> bursts;  // tick -> new reference

  double reference_at(int tick) const;
};

enum class ComplexityMode { region, random };

struct ValueRange {
  int lo = 10;
  int hi = 30;
};

struct DemandProfile {
  std::array<RegionTrend, kRegionCount> trends;
  std::optional<std::uint64_t> volume_cap;  // max primary orders over the run
  double scatter_radius = 25.0;
  int stage_lifetime = 50;
  ComplexityMode complexity_mode = ComplexityMode::region;
  std::array<ValueRange, kMaxLevel> value_by_complexity{{{10, 30}, {50, 80}, {70, 100}}};
  std::string qos_preference;  // carried through config, not used

  /// Throws ConfigError naming the bad field.
  void validate() const;
};

struct EscrowEntry {
  AgentId agent = 0;
  Ecosystem ecosystem = Ecosystem::alpha;
  double amount = 0.0;
};

struct Order {
  OrderId id = 0;
  OrderId chain_id = 0;
  RegionId region = 1;
  int stage_level = 1;
  int remaining_stages = 0;
  Cell position;
  int chain_value = 0;
  std::vector<double> split;
  std::vector<EscrowEntry> escrow;
  int born_tick = 0;
  int expiry_tick = 0;

  int complexity() const noexcept { return stage_level + remaining_stages; }
  double stage_payout() const { return split.at(stage_level - 1) * chain_value; }
};

/// Payout fractions per stage, first stage largest.
std::vector<double> payout_split(int complexity);

struct OrderLedger {
  std::uint64_t generated_chains = 0;
  std::uint64_t completed_chains = 0;
  std::uint64_t expired_chains = 0;
  std::uint64_t generated_orders = 0;  // primary + derived
  Tally released_value;   // escrow paid out to agents or hubs
  Tally voided_value;     // escrow lost with expired chains
  Tally forfeited_value;  // released to an agent no longer alive
};

class World {
 public:
  World(DemandProfile profile, std::uint64_t seed);

  const DemandProfile& profile() const noexcept { return profile_; }
  int tick() const noexcept { return tick_; }
  void set_tick(int t) noexcept { tick_ = t; }
  Rng& rng() noexcept { return rng_; }
  const Rng& rng() const noexcept { return rng_; }

  const std::map<OrderId, Order>& live_orders() const noexcept { return orders_; }
  const Order* find(OrderId id) const;
  /// Live orders whose chain originated in `region` and sit at `stage`.
  std::size_t live_count(RegionId region, int stage) const;
  /// Primary-stage orders generated so far, for the volume cap.
  std::uint64_t primary_generated() const noexcept { return ledger_.generated_chains; }

  /// Calls fn(const Order&) for every live order on the given cell.
  template <class Fn>
  void for_each_order_at(Cell c, Fn&& fn) const {
    for (OrderId id : cells_[cell_index(c)]) fn(orders_.at(id));
  }

  const Order& insert(Order order);
  /// Removes the order from the live set and returns it.
  Order take(OrderId id);

  OrderId next_order_id() noexcept { return next_order_id_++; }
  AgentId next_agent_id() noexcept { return next_agent_id_++; }

  OrderLedger& ledger() noexcept { return ledger_; }
  const OrderLedger& ledger() const noexcept { return ledger_; }

 private:
  DemandProfile profile_;
  Rng rng_;
  int tick_ = 0;
  std::map<OrderId, Order> orders_;
  std::vector<std::vector<OrderId>> cells_;
  std::array<std::array<std::size_t, kMaxLevel>, kRegionCount> counts_{};
  OrderId next_order_id_ = 1;
  AgentId next_agent_id_ = 1;
  OrderLedger ledger_;
};

World build_world(const DemandProfile& profile, std::uint64_t seed);

int target_order_count(RegionId region, int tick, const DemandProfile& profile);

/// Tops every region's primary pool up to its target. Returns new order ids.
std::vector<OrderId> replenish_orders(World& world);

/// Next stage of a chain at `pos`. The parent is dropped from the live set
/// if still there. Throws std::logic_error on a final-stage parent.
const Order& spawn_derived_order(World& world, Order parent, Cell pos);

struct ExpiryReport {
  std::vector<OrderId> expired_chains;
  double voided_escrow = 0.0;
};

/// Removes orders whose expiry tick has come and voids their escrow.
ExpiryReport step_order_lifecycle(World& world);

}  // namespace ecoval
