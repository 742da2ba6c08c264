#include "ecoval/strategy.hpp"

#include <stdexcept>

#include "ecoval/agents.hpp"

namespace ecoval {

std::string_view to_string(StrategyKind k) noexcept {
  return k == StrategyKind::control ? "control" : "random";
}

bool route_payout(EcosystemState& eco, Agent* agent, double amount) {
  if (amount < 0.0) throw std::logic_error("negative payout");
  if (amount == 0.0) return true;
  if (agent != nullptr) agent->period_profit += amount;
  if (eco.strategy.kind == StrategyKind::control) {
    eco.strategy.hub_pool += amount;
    eco.hub_collected += amount;
  } else {
    if (agent == nullptr) return false;
    agent->capital += amount;
  }
  eco.cum_gain += amount;
  return true;
}

HubTransfer strategy_tick(EcosystemState& eco, int tick) {
  HubTransfer out;
  auto& cfg = eco.strategy;
  if (tick % cfg.hub_period != 0) return out;
  for (auto& a : eco.agents) a.period_profit = 0.0;
  if (cfg.kind != StrategyKind::control || eco.agents.empty()) return out;

  // pool carries over when nobody is alive to receive it
  const double pool = cfg.hub_pool;
  const double share = pool / static_cast<double>(eco.agents.size());
  for (auto& a : eco.agents) a.capital += share;
  out.distributed = pool;
  out.recipients = eco.agents.size();
  eco.hub_distributed += pool;
  cfg.hub_pool = Tally{};
  return out;
}

}  // namespace ecoval
