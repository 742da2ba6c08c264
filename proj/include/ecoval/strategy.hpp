#pragma once

// Operating strategies. Control pools every order payout in a virtual hub
// and splits the pool equally among living agents each hub period. Random
// leaves each agent with its own profits and losses.

#include <string_view>

#include "ecoval/common.hpp"

namespace ecoval {

struct Agent;
struct EcosystemState;

enum class StrategyKind { control, random };

std::string_view to_string(StrategyKind k) noexcept;

struct StrategyConfig {
  StrategyKind kind = StrategyKind::random;
  int hub_period = 10;
  Tally hub_pool;
};

/// Credits a released payout. Returns false when the payout has nowhere to
/// go (random strategy, recipient no longer alive); the caller forfeits it.
/// Throws std::logic_error on a negative amount.
bool route_payout(EcosystemState& eco, Agent* agent, double amount);

struct HubTransfer {
  double distributed = 0.0;
  std::size_t recipients = 0;
};

HubTransfer strategy_tick(EcosystemState& eco, int tick);

}  // namespace ecoval
