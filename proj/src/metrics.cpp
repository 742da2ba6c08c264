#include "ecoval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ecoval {

std::string_view to_string(NicheMode m) noexcept {
  return m == NicheMode::attribute ? "attribute" : "efficiency";
}

std::array<std::uint64_t, kAttributeClasses> attribute_census(const EcosystemState& eco) {
  std::array<std::uint64_t, kAttributeClasses> counts{};
  for (const auto& a : eco.agents) ++counts[attribute_class(a.level, region_of(a.position))];
  return counts;
}

double windowed_efficiency(const Agent& agent) {
  return value_efficiency({agent.efficiency.gained(), agent.efficiency.consumed(), agent.efficiency.size()})
      .value_or(0.0);
}

std::optional<NicheDistribution> classify_niches(const EcosystemState& eco, NicheMode mode) {
  if (eco.agents.empty()) return std::nullopt;
  NicheDistribution dist;
  if (mode == NicheMode::attribute) {
    const auto census = attribute_census(eco);
    dist.counts.assign(census.begin(), census.end());
    return dist;
  }

  std::vector<double> eff;
  eff.reserve(eco.agents.size());
  for (const auto& a : eco.agents) eff.push_back(windowed_efficiency(a));
  const auto [lo_it, hi_it] = std::minmax_element(eff.begin(), eff.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!(hi > lo)) {
    dist.counts = {eff.size()};
    return dist;
  }
  const auto bins = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(eff.size()))));
  dist.counts.assign(bins, 0);
  for (double e : eff) {
    auto b = static_cast<std::size_t>((e - lo) / (hi - lo) * static_cast<double>(bins));
    ++dist.counts[std::min(b, bins - 1)];
  }
  return dist;
}

MetricsRecord snapshot(const EcosystemState& eco, const World& world, int tick, NicheMode mode) {
  MetricsRecord rec;
  rec.tick = tick;
  rec.ecosystem = eco.id;
  rec.n_agents = eco.agents.size();
  const auto levels = eco.count_by_level();
  for (int i = 0; i < kMaxLevel; ++i) rec.n_by_level[i] = levels[i];
  if (auto dist = classify_niches(eco, mode)) rec.entropy = shannon_entropy(*dist);
  rec.cum_cost = eco.cum_cost;
  rec.cum_gain = eco.cum_gain;
  rec.value_benefit = value_benefit(eco.cum_gain, eco.cum_cost);
  rec.hub_pool = eco.strategy.hub_pool;
  for (RegionId r = 1; r <= kRegionCount; ++r)
    for (int s = 1; s <= kMaxLevel; ++s) rec.orders_by_region[r - 1] += world.live_count(r, s);
  rec.births = eco.births;
  rec.deaths = eco.deaths;
  rec.kills = eco.kills;
  return rec;
}

std::string LedgerReport::describe() const {
  std::ostringstream os;
  os.precision(12);
  os << "endowments " << endowments << " + released " << released << " vs living " << living_capital
     << " + hub " << hub_pools << " + cost " << cum_cost << " + writeoffs " << writeoffs
     << " + transfers " << reproduction_transfers << " (delta " << capital_delta << "); chains generated "
     << generated_chains << " = completed " << completed_chains << " + expired " << expired_chains
     << " + live " << live_chains;
  return os.str();
}

LedgerReport ledger_audit(const World& world, const Ecosystems& ecosystems, double tolerance) {
  LedgerReport r;
  for (const auto* eco : {&ecosystems.alpha, &ecosystems.beta}) {
    r.endowments += eco->initial_endowments + eco->child_endowments;
    r.living_capital += eco->living_capital();
    r.hub_pools += eco->strategy.hub_pool;
    r.cum_cost += eco->cum_cost;
    r.writeoffs += eco->writeoffs;
    r.reproduction_transfers += eco->child_endowments;
  }
  const auto& ledger = world.ledger();
  r.released = ledger.released_value;
  r.capital_delta = (r.endowments + r.released) -
                    (r.living_capital + r.hub_pools + r.cum_cost + r.writeoffs + r.reproduction_transfers);
  r.capital_balanced = std::abs(r.capital_delta) <= tolerance;

  r.generated_chains = ledger.generated_chains;
  r.completed_chains = ledger.completed_chains;
  r.expired_chains = ledger.expired_chains;
  r.live_chains = world.live_orders().size();
  r.voided_value = ledger.voided_value;
  r.forfeited_value = ledger.forfeited_value;
  r.orders_balanced = r.generated_chains == r.completed_chains + r.expired_chains + r.live_chains;
  return r;
}

}  // namespace ecoval
