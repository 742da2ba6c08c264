#include "ecoval/world.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ecoval {

namespace {

std::vector<RegionId> build_region_table() {
  std::vector<RegionId> table(static_cast<std::size_t>(kGridWidth) * kGridHeight);
  const auto& regions = standard_regions();
  for (int y = 0; y < kGridHeight; ++y) {
    for (int x = 0; x < kGridWidth; ++x) {
      const Cell c{x, y};
      RegionId best = 1;
      int best_d = distance_sq(c, regions[0].center);
      for (const auto& r : regions) {
        const int d = distance_sq(c, r.center);
        if (d < best_d) {
          best_d = d;
          best = r.id;
        }
      }
      table[cell_index(c)] = best;
    }
  }
  return table;
}

}  // namespace

const std::array<Region, kRegionCount>& standard_regions() {
  static const std::array<Region, kRegionCount> regions{{
      {1, {59, 79}, 1.0, 3.0, 5.0, 1},
      {2, {85, 26}, 1.3, 3.0, 7.0, 2},
      {3, {125, 54}, 1.7, 3.0, 9.0, 3},
      {4, {157, 90}, 1.0, 3.0, 5.0, 1},
      {5, {180, 36}, 1.3, 3.0, 7.0, 2},
  }};
  return regions;
}

const Region& region(RegionId id) {
  if (id < 1 || id > kRegionCount) throw std::domain_error("no region " + std::to_string(id));
  return standard_regions()[id - 1];
}

RegionId region_of(Cell pos) {
  static const std::vector<RegionId> table = build_region_table();
  if (!in_bounds(pos))
    throw std::domain_error("position (" + std::to_string(pos.x) + "," +
                            std::to_string(pos.y) + ") outside the grid");
  return table[cell_index(pos)];
}

double RegionTrend::reference_at(int tick) const {
  auto it = bursts.upper_bound(tick);
  if (it == bursts.begin()) return reference;
  return std::prev(it)->second;
}

void DemandProfile::validate() const {
  for (int r = 0; r < kRegionCount; ++r) {
    const auto& t = trends[r];
    const std::string where = "demand.trends[" + std::to_string(r + 1) + "]";
    if (!(t.reference >= 0.0)) throw ConfigError(where + ".reference must be >= 0");
    if (!(t.amplitude >= 0.0)) throw ConfigError(where + ".amplitude must be >= 0");
    if (t.period < 1) throw ConfigError(where + ".period must be >= 1");
    for (const auto& [tick, n] : t.bursts) {
      if (tick < 0) throw ConfigError(where + ".burst_tick must be >= 0");
      if (!(n >= 0.0)) throw ConfigError(where + ".burst_reference must be >= 0");
    }
  }
  if (!(scatter_radius >= 0.0)) throw ConfigError("demand.scatter_radius must be >= 0");
  if (stage_lifetime < 1) throw ConfigError("demand.stage_lifetime must be >= 1");
  for (int c = 0; c < kMaxLevel; ++c) {
    const auto& v = value_by_complexity[c];
    if (v.lo < 0 || v.hi < v.lo)
      throw ConfigError("demand.order_value[" + std::to_string(c + 1) + "] is not a valid range");
  }
}

std::vector<double> payout_split(int complexity) {
  switch (complexity) {
    case 1: return {1.0};
    case 2: return {0.6, 0.4};
    case 3: return {0.4, 0.3, 0.3};
    default: throw std::domain_error("order complexity must be 1..3");
  }
}

World::World(DemandProfile profile, std::uint64_t seed)
    : profile_(std::move(profile)),
      rng_(seed),
      cells_(static_cast<std::size_t>(kGridWidth) * kGridHeight) {
  profile_.validate();
}

const Order* World::find(OrderId id) const {
  auto it = orders_.find(id);
  return it == orders_.end() ? nullptr : &it->second;
}

std::size_t World::live_count(RegionId region, int stage) const {
  return counts_.at(region - 1).at(stage - 1);
}

const Order& World::insert(Order order) {
  if (!in_bounds(order.position)) throw std::domain_error("order placed outside the grid");
  const OrderId id = order.id;
  cells_[cell_index(order.position)].push_back(id);
  ++counts_[order.region - 1][order.stage_level - 1];
  ++ledger_.generated_orders;
  auto [it, inserted] = orders_.emplace(id, std::move(order));
  if (!inserted) throw std::logic_error("duplicate order id");
  return it->second;
}

Order World::take(OrderId id) {
  auto it = orders_.find(id);
  if (it == orders_.end()) throw std::logic_error("order " + std::to_string(id) + " is not live");
  Order order = std::move(it->second);
  orders_.erase(it);
  auto& bucket = cells_[cell_index(order.position)];
  bucket.erase(std::find(bucket.begin(), bucket.end(), id));
  --counts_[order.region - 1][order.stage_level - 1];
  return order;
}

World build_world(const DemandProfile& profile, std::uint64_t seed) {
  return World(profile, seed);
}

int target_order_count(RegionId region, int tick, const DemandProfile& profile) {
  const auto& trend = profile.trends.at(region - 1);
  const double phase = 2.0 * std::numbers::pi * static_cast<double>(tick) / trend.period;
  const double y = trend.reference_at(tick) + trend.amplitude * std::sin(phase);
  return std::max(0, static_cast<int>(std::lround(y)));
}

std::vector<OrderId> replenish_orders(World& world) {
  const auto& profile = world.profile();
  std::vector<OrderId> created;
  for (const auto& reg : standard_regions()) {
    const int target = target_order_count(reg.id, world.tick(), profile);
    const auto have = static_cast<int>(world.live_count(reg.id, 1));
    for (int i = have; i < target; ++i) {
      if (profile.volume_cap && world.primary_generated() >= *profile.volume_cap) return created;
      auto& rng = world.rng();
      const double r = profile.scatter_radius * std::sqrt(rng.uniform01());
      const double theta = 2.0 * std::numbers::pi * rng.uniform01();
      const Cell pos = clamp_to_grid({reg.center.x + static_cast<int>(std::lround(r * std::cos(theta))),
                                      reg.center.y + static_cast<int>(std::lround(r * std::sin(theta)))});
      const int complexity = profile.complexity_mode == ComplexityMode::region
                                 ? reg.complexity
                                 : static_cast<int>(rng.uniform_int(1, kMaxLevel));
      const auto& range = profile.value_by_complexity[complexity - 1];

      Order order;
      order.id = world.next_order_id();
      order.chain_id = order.id;
      order.region = reg.id;
      order.stage_level = 1;
      order.remaining_stages = complexity - 1;
      order.position = pos;
      order.chain_value = static_cast<int>(rng.uniform_int(range.lo, range.hi));
      order.split = payout_split(complexity);
      order.born_tick = world.tick();
      order.expiry_tick = world.tick() + profile.stage_lifetime;
      ++world.ledger().generated_chains;
      created.push_back(world.insert(std::move(order)).id);
    }
  }
  return created;
}

const Order& spawn_derived_order(World& world, Order parent, Cell pos) {
  if (parent.remaining_stages < 1)
    throw std::logic_error("order " + std::to_string(parent.id) + " has no further stage");
  if (world.find(parent.id) != nullptr) world.take(parent.id);
  Order next = std::move(parent);
  next.id = world.next_order_id();
  next.stage_level += 1;
  next.remaining_stages -= 1;
  next.position = pos;
  next.born_tick = world.tick();
  next.expiry_tick = world.tick() + world.profile().stage_lifetime;
  return world.insert(std::move(next));
}

ExpiryReport step_order_lifecycle(World& world) {
  ExpiryReport report;
  std::vector<OrderId> due;
  for (const auto& [id, order] : world.live_orders())
    if (order.expiry_tick <= world.tick()) due.push_back(id);
  for (OrderId id : due) {
    Order order = world.take(id);
    double voided = 0.0;
    for (const auto& e : order.escrow) voided += e.amount;
    report.voided_escrow += voided;
    report.expired_chains.push_back(order.chain_id);
    world.ledger().voided_value += voided;
    ++world.ledger().expired_chains;
  }
  return report;
}

}  // namespace ecoval
