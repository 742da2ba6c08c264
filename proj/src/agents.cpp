#include "ecoval/agents.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace ecoval {

namespace {

constexpr int sign(int v) noexcept { return (v > 0) - (v < 0); }

void charge(Agent& agent, EcosystemState& eco, int tick, double amount) {
  agent.capital -= amount;
  eco.cum_cost += amount;
  agent.efficiency.add_cost(tick, amount);
}

bool eligible(const Agent& agent, const EcosystemState& eco, const Order& order) {
  return order.stage_level == agent.level && is_accessible(eco, order.position);
}

// Nearest eligible order within `radius` (Euclidean), ties to the lower id.
const Order* nearest_order(const Agent& agent, const World& world, const EcosystemState& eco,
                           int radius) {
  const Order* best = nullptr;
  int best_d = 0;
  const int r2 = radius * radius;
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) {
      const Cell c{agent.position.x + dx, agent.position.y + dy};
      if (!in_bounds(c) || dx * dx + dy * dy > r2) continue;
      world.for_each_order_at(c, [&](const Order& o) {
        if (!eligible(agent, eco, o)) return;
        const int d = dx * dx + dy * dy;
        if (best == nullptr || d < best_d || (d == best_d && o.id < best->id)) {
          best = &o;
          best_d = d;
        }
      });
    }
  }
  return best;
}

// Closest eligible order in the 3x3 block around the agent.
const Order* claimable_order(const Agent& agent, const World& world, const EcosystemState& eco) {
  const Order* best = nullptr;
  int best_d = 0;
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      const Cell c{agent.position.x + dx, agent.position.y + dy};
      if (!in_bounds(c)) continue;
      world.for_each_order_at(c, [&](const Order& o) {
        if (!eligible(agent, eco, o)) return;
        const int d = dx * dx + dy * dy;
        if (best == nullptr || d < best_d || (d == best_d && o.id < best->id)) {
          best = &o;
          best_d = d;
        }
      });
    }
  }
  return best;
}

// One Chebyshev step toward `goal`, preferring the diagonal.
std::optional<Cell> step_toward(Cell from, Cell goal, const EcosystemState& eco, bool free) {
  const int sx = sign(goal.x - from.x);
  const int sy = sign(goal.y - from.y);
  const Cell candidates[] = {{from.x + sx, from.y + sy}, {from.x + sx, from.y}, {from.x, from.y + sy}};
  for (const Cell& c : candidates) {
    if (c == from || !in_bounds(c)) continue;
    if (free || is_accessible(eco, c)) return c;
  }
  return std::nullopt;
}

// Steps one cell and returns the distance cost paid.
double move(Agent& agent, EcosystemState& eco, int tick, Cell next) {
  const double k = region(region_of(agent.position)).distance_cost_k;
  charge(agent, eco, tick, k);
  agent.position = next;
  return k;
}

Cell placement_in_disc(Rng& rng, Cell center, double radius) {
  const double r = radius * std::sqrt(rng.uniform01());
  const double theta = 2.0 * std::numbers::pi * rng.uniform01();
  return clamp_to_grid({center.x + static_cast<int>(std::lround(r * std::cos(theta))),
                        center.y + static_cast<int>(std::lround(r * std::sin(theta)))});
}

}  // namespace

double EfficiencyWindow::gained() const { return std::accumulate(gained_.begin(), gained_.end(), 0.0); }
double EfficiencyWindow::consumed() const {
  return std::accumulate(consumed_.begin(), consumed_.end(), 0.0);
}

void SimParams::validate() const {
  if (!(reproduction_threshold > 0.0)) throw ConfigError("agents.reproduction_threshold must be > 0");
  if (!(reproduction_punishment_k > 0.0)) throw ConfigError("agents.reproduction_punishment_k must be > 0");
  if (!(death_threshold >= 0.0)) throw ConfigError("agents.death_threshold must be >= 0");
  if (death_threshold >= reproduction_threshold)
    throw ConfigError("agents.death_threshold must be below agents.reproduction_threshold");
  if (adjacent.min_agents < 1 || !(adjacent.min_capital > 0.0))
    throw ConfigError("agents.expansion.adjacent thresholds must be positive");
  if (emerging.min_agents < 1 || !(emerging.min_capital > 0.0))
    throw ConfigError("agents.expansion.emerging thresholds must be positive");
  if (initial_alpha < 0) throw ConfigError("agents.initial_counts.alpha must be >= 0");
  if (initial_beta < 0) throw ConfigError("agents.initial_counts.beta must be >= 0");
  if (!(capital_lo > death_threshold) || capital_hi < capital_lo)
    throw ConfigError("agents.initial_capital must be a range above the death threshold");
  if (trait_lo < 1 || trait_hi < trait_lo) throw ConfigError("agents.trait_range must satisfy 1 <= lo <= hi");
  if (efficiency_window < 1) throw ConfigError("metrics.window must be >= 1");
}

EcosystemState::EcosystemState(Ecosystem id_, StrategyKind kind, RegionId home, int hub_period)
    : id(id_), home_region(home) {
  if (hub_period < 1) throw ConfigError("strategy.hub_period must be >= 1");
  strategy.kind = kind;
  strategy.hub_period = hub_period;
  unlocked[static_cast<std::size_t>(home)] = true;
}

Agent* EcosystemState::find(AgentId aid) {
  auto it = std::lower_bound(agents.begin(), agents.end(), aid,
                             [](const Agent& a, AgentId v) { return a.id < v; });
  return it != agents.end() && it->id == aid ? &*it : nullptr;
}

const Agent* EcosystemState::find(AgentId aid) const {
  return const_cast<EcosystemState*>(this)->find(aid);
}

double EcosystemState::living_capital() const {
  Tally total;
  for (const auto& a : agents) total += a.capital;
  return total;
}

std::array<std::size_t, kMaxLevel> EcosystemState::count_by_level() const {
  std::array<std::size_t, kMaxLevel> out{};
  for (const auto& a : agents) ++out[a.level - 1];
  return out;
}

std::string_view to_string(EventKind k) noexcept {
  switch (k) {
    case EventKind::birth: return "birth";
    case EventKind::death: return "death";
    case EventKind::kill: return "kill";
    case EventKind::claim: return "claim";
    case EventKind::unlock: return "unlock";
  }
  return "?";
}

bool is_accessible(const EcosystemState& eco, Cell c) {
  return in_bounds(c) && eco.is_unlocked(region_of(c));
}

int max_unlocked_level(const EcosystemState& eco, const World& world) {
  int level = 1;
  for (const auto& r : standard_regions()) {
    if (!eco.is_unlocked(r.id)) continue;
    const int c = world.profile().complexity_mode == ComplexityMode::region ? r.complexity : kMaxLevel;
    level = std::max(level, c);
  }
  return level;
}

int child_level(const EcosystemState& eco, const World& world) {
  const int top = max_unlocked_level(eco, world);
  const auto living = eco.count_by_level();
  int best = 1;
  double best_score = -1.0;
  for (int level = 1; level <= top; ++level) {
    std::size_t outstanding = 0;
    for (RegionId r = 1; r <= kRegionCount; ++r)
      if (eco.is_unlocked(r)) outstanding += world.live_count(r, level);
    const double score = static_cast<double>(outstanding) / (1.0 + static_cast<double>(living[level - 1]));
    if (score > best_score) {
      best_score = score;
      best = level;
    }
  }
  return best;
}

Agent& spawn_agent(EcosystemState& eco, Agent* parent, World& world, const SimParams& params) {
  auto& rng = world.rng();
  Agent child;
  child.id = world.next_agent_id();
  child.ecosystem = eco.id;
  child.home_region = eco.home_region;
  child.born_tick = world.tick();
  child.efficiency = EfficiencyWindow(params.efficiency_window);

  if (parent == nullptr) {
    child.level = params.initial_levels == InitialLevels::primary
                      ? 1
                      : static_cast<int>(rng.uniform_int(1, kMaxLevel));
    const Region& home = region(eco.home_region);
    child.position = home.center;
    for (int attempt = 0; attempt < 64; ++attempt) {
      const Cell c = placement_in_disc(rng, home.center, world.profile().scatter_radius);
      if (region_of(c) == home.id) {
        child.position = c;
        break;
      }
    }
    child.capital = rng.uniform(params.capital_lo, params.capital_hi);
    child.speed = static_cast<int>(rng.uniform_int(params.trait_lo, params.trait_hi));
    child.vision = static_cast<int>(rng.uniform_int(params.trait_lo, params.trait_hi));
    eco.initial_endowments += child.capital;
  } else {
    if (parent->capital < params.reproduction_threshold)
      throw std::logic_error("agent " + std::to_string(parent->id) + " is below the reproduction threshold");
    child.level = child_level(eco, world);
    child.speed = std::clamp(parent->speed + static_cast<int>(rng.uniform_int(-1, 1)), params.trait_lo,
                             params.trait_hi);
    child.vision = std::clamp(parent->vision + static_cast<int>(rng.uniform_int(-1, 1)), params.trait_lo,
                              params.trait_hi);
    child.capital = rng.uniform(params.capital_lo, params.capital_hi);
    child.position = parent->position;
    const int v = parent->vision;
    for (int attempt = 0; attempt < 64; ++attempt) {
      const int dx = static_cast<int>(rng.uniform_int(-v, v));
      const int dy = static_cast<int>(rng.uniform_int(-v, v));
      const Cell c{parent->position.x + dx, parent->position.y + dy};
      if (dx * dx + dy * dy <= v * v && is_accessible(eco, c)) {
        child.position = c;
        break;
      }
    }
    parent->capital -= child.capital;
    eco.child_endowments += child.capital;
    charge(*parent, eco, world.tick(),
           params.reproduction_punishment_k * euclidean(parent->position, child.position));
    ++eco.births;
  }
  eco.agents.push_back(std::move(child));
  return eco.agents.back();
}

void seed_population(EcosystemState& eco, int count, World& world, const SimParams& params) {
  for (int i = 0; i < count; ++i) spawn_agent(eco, nullptr, world, params);
}

ActionRecord agent_tick(Agent& agent, World& world, EcosystemState& eco, EventLog* log) {
  ActionRecord rec;
  const int tick = world.tick();
  auto& rng = world.rng();

  const Region& here = region(region_of(agent.position));
  rec.operation_cost = rng.uniform(here.op_cost_lo, here.op_cost_hi);
  charge(agent, eco, tick, rec.operation_cost);

  if (!is_accessible(eco, agent.position)) {
    // stranded: head for the nearest unlocked region center
    const Region* goal = nullptr;
    for (const auto& r : standard_regions()) {
      if (!eco.is_unlocked(r.id)) continue;
      if (goal == nullptr || distance_sq(agent.position, r.center) < distance_sq(agent.position, goal->center))
        goal = &r;
    }
    for (int s = 0; goal != nullptr && s < agent.speed && !is_accessible(eco, agent.position); ++s) {
      auto next = step_toward(agent.position, goal->center, eco, true);
      if (!next) break;
      rec.distance_cost += move(agent, eco, tick, *next);
      ++rec.cells_moved;
    }
  } else if (const Order* target = nearest_order(agent, world, eco, agent.vision)) {
    rec.target = target->id;
    const Cell goal = target->position;
    for (int s = 0; s < agent.speed && chebyshev(agent.position, goal) > 1; ++s) {
      auto next = step_toward(agent.position, goal, eco, false);
      if (!next) break;
      rec.distance_cost += move(agent, eco, tick, *next);
      ++rec.cells_moved;
    }
  } else {
    Cell options[8];
    int n = 0;
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        const Cell c{agent.position.x + dx, agent.position.y + dy};
        if ((dx != 0 || dy != 0) && is_accessible(eco, c)) options[n++] = c;
      }
    if (n > 0) {
      rec.distance_cost += move(agent, eco, tick, options[rng.uniform_int(0, n - 1)]);
      ++rec.cells_moved;
    }
  }

  if (const Order* o = claimable_order(agent, world, eco)) {
    rec.claimed = world.take(o->id);
    if (log != nullptr)
      log->add(tick, EventKind::claim, agent.id, eco.id, "order " + std::to_string(rec.claimed->id));
  }
  return rec;
}

ProcessOutcome process_order(Agent& agent, Order order, World& world, Ecosystems& ecosystems) {
  if (order.stage_level != agent.level)
    throw std::logic_error("level " + std::to_string(agent.level) + " agent cannot process a stage " +
                           std::to_string(order.stage_level) + " order");
  ProcessOutcome out;
  order.escrow.push_back({agent.id, agent.ecosystem, order.stage_payout()});
  if (order.remaining_stages > 0) {
    out.derived = spawn_derived_order(world, std::move(order), agent.position).id;
    return out;
  }
  out.completed = true;
  ++world.ledger().completed_chains;
  for (const auto& entry : order.escrow) {
    auto& eco = ecosystems[entry.ecosystem];
    Agent* recipient = eco.find(entry.agent);
    if (recipient != nullptr) recipient->efficiency.add_gain(world.tick(), entry.amount);
    if (route_payout(eco, recipient, entry.amount)) {
      out.released += entry.amount;
      world.ledger().released_value += entry.amount;
    } else {
      out.forfeited += entry.amount;
      world.ledger().forfeited_value += entry.amount;
    }
  }
  return out;
}

std::vector<KillEvent> resolve_combat(World& world, Ecosystems& ecosystems, EventLog* log) {
  auto& alpha = ecosystems.alpha.agents;
  auto& beta = ecosystems.beta.agents;

  // beta agents sorted by cell for the neighbourhood lookup
  std::vector<std::pair<int, std::size_t>> by_cell;
  by_cell.reserve(beta.size());
  for (std::size_t j = 0; j < beta.size(); ++j)
    if (beta[j].capital > 0.0) by_cell.emplace_back(cell_index(beta[j].position), j);
  std::sort(by_cell.begin(), by_cell.end());

  struct Pair {
    AgentId victim;
    AgentId killer;
    std::size_t a;
    std::size_t b;
  };
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    const Agent& a = alpha[i];
    if (a.capital <= 0.0) continue;
    for (int dy = -1; dy <= 1; ++dy) {
      const int y = a.position.y + dy;
      if (y < 0 || y >= kGridHeight) continue;
      const int lo = cell_index({std::max(a.position.x - 1, 0), y});
      const int hi = cell_index({std::min(a.position.x + 1, kGridWidth - 1), y});
      auto it = std::lower_bound(by_cell.begin(), by_cell.end(), std::pair<int, std::size_t>{lo, 0});
      for (; it != by_cell.end() && it->first <= hi; ++it) {
        const Agent& b = beta[it->second];
        if (a.capital == b.capital) continue;
        const bool alpha_wins = a.capital > b.capital;
        pairs.push_back({alpha_wins ? b.id : a.id, alpha_wins ? a.id : b.id, i, it->second});
      }
    }
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const Pair& l, const Pair& r) { return std::tie(l.victim, l.killer) < std::tie(r.victim, r.killer); });

  std::vector<KillEvent> kills;
  std::vector<bool> alpha_dead(alpha.size(), false), beta_dead(beta.size(), false);
  for (const auto& p : pairs) {
    if (alpha_dead[p.a] || beta_dead[p.b]) continue;
    Agent& a = alpha[p.a];
    Agent& b = beta[p.b];
    if (a.capital == b.capital) continue;
    const bool alpha_wins = a.capital > b.capital;
    Agent& killer = alpha_wins ? a : b;
    Agent& victim = alpha_wins ? b : a;
    const double absorbed = victim.capital;
    killer.capital += absorbed;
    victim.capital = 0.0;
    (alpha_wins ? beta_dead[p.b] : alpha_dead[p.a]) = true;
    auto& killer_eco = ecosystems[killer.ecosystem];
    auto& victim_eco = ecosystems[victim.ecosystem];
    ++killer_eco.kills;
    ++victim_eco.deaths;
    kills.push_back({killer.id, killer.ecosystem, victim.id, absorbed});
    if (log != nullptr) {
      log->add(world.tick(), EventKind::kill, killer.id, killer.ecosystem, "victim " + std::to_string(victim.id));
      log->add(world.tick(), EventKind::death, victim.id, victim.ecosystem, "killed");
    }
  }

  auto sweep = [](std::vector<Agent>& agents, const std::vector<bool>& dead) {
    std::size_t w = 0;
    for (std::size_t r = 0; r < agents.size(); ++r)
      if (!dead[r]) {
        if (w != r) agents[w] = std::move(agents[r]);
        ++w;
      }
    agents.resize(w);
  };
  sweep(alpha, alpha_dead);
  sweep(beta, beta_dead);
  return kills;
}

LifecycleEvents lifecycle(EcosystemState& eco, World& world, const SimParams& params, EventLog* log) {
  LifecycleEvents out;
  const std::size_t existing = eco.agents.size();
  std::vector<bool> dead(existing, false);
  for (std::size_t i = 0; i < existing; ++i) {
    Agent& a = eco.agents[i];
    if (a.capital >= params.reproduction_threshold) {
      const AgentId parent_id = a.id;
      const AgentId child_id = spawn_agent(eco, &a, world, params).id;  // may reallocate
      out.born.push_back(child_id);
      if (log != nullptr) log->add(world.tick(), EventKind::birth, child_id, eco.id, "parent " + std::to_string(parent_id));
    } else if (a.capital <= params.death_threshold) {
      dead[i] = true;
      out.died.push_back(a.id);
      out.written_off += a.capital;
      eco.writeoffs += a.capital;
      ++eco.deaths;
      if (log != nullptr) log->add(world.tick(), EventKind::death, a.id, eco.id, "bankrupt");
    }
  }
  std::size_t w = 0;
  for (std::size_t r = 0; r < eco.agents.size(); ++r)
    if (r >= existing || !dead[r]) {
      if (w != r) eco.agents[w] = std::move(eco.agents[r]);
      ++w;
    }
  eco.agents.resize(w);
  return out;
}

std::vector<RegionId> try_expand(EcosystemState& eco, const SimParams& params) {
  std::vector<RegionId> opened;
  const std::size_t n = eco.agents.size();
  const double capital = eco.total_capital();
  auto open = [&](RegionId r) {
    if (!eco.is_unlocked(r)) {
      eco.unlocked[static_cast<std::size_t>(r)] = true;
      opened.push_back(r);
    }
  };
  if (n >= params.adjacent.min_agents && capital >= params.adjacent.min_capital) {
    open(2);
    open(5);
  }
  if (n >= params.emerging.min_agents && capital >= params.emerging.min_capital) open(3);
  return opened;
}

}  // namespace ecoval
