#pragma once

// Per-tick observables of an ecosystem (niche entropy, cost, benefit,
// census counts) and the run-wide conservation audit.

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "ecoval/agents.hpp"
#include "ecoval/entropy.hpp"
#include "ecoval/world.hpp"

namespace ecoval {

enum class NicheMode { attribute, efficiency };

std::string_view to_string(NicheMode m) noexcept;

inline constexpr std::size_t kAttributeClasses = kMaxLevel * kRegionCount;

/// Class index of a (level, region) pair in attribute mode.
constexpr std::size_t attribute_class(int level, RegionId region) noexcept {
  return static_cast<std::size_t>((level - 1) * kRegionCount + (region - 1));
}

/// Agent counts per (level, region), indexed by attribute_class.
std::array<std::uint64_t, kAttributeClasses> attribute_census(const EcosystemState& eco);

/// Windowed gained/consumed of one agent; zero when nothing was consumed.
double windowed_efficiency(const Agent& agent);

/// Niche census of the living agents, or nullopt for an empty ecosystem.
/// Efficiency mode bins windowed efficiencies into ceil(sqrt(n)) equal-width
/// bins over [min, max]; identical efficiencies form one class.
std::optional<NicheDistribution> classify_niches(const EcosystemState& eco, NicheMode mode);

struct MetricsRecord {
  int tick = 0;
  Ecosystem ecosystem = Ecosystem::alpha;
  std::uint64_t n_agents = 0;
  std::array<std::uint64_t, kMaxLevel> n_by_level{};
  double entropy = 0.0;
  double cum_cost = 0.0;
  double cum_gain = 0.0;
  double value_benefit = 0.0;
  double hub_pool = 0.0;
  std::array<std::uint64_t, kRegionCount> orders_by_region{};
  std::uint64_t births = 0;
  std::uint64_t deaths = 0;
  std::uint64_t kills = 0;

  bool operator==(const MetricsRecord&) const = default;
};

MetricsRecord snapshot(const EcosystemState& eco, const World& world, int tick, NicheMode mode);

struct LedgerReport {
  // inflows
  double endowments = 0.0;  // initial + child
  double released = 0.0;
  // holdings and outflows
  double living_capital = 0.0;
  double hub_pools = 0.0;
  double cum_cost = 0.0;
  double writeoffs = 0.0;
  double reproduction_transfers = 0.0;  // parent capital handed to children
  double capital_delta = 0.0;           // inflows - (holdings + outflows)

  std::uint64_t generated_chains = 0;
  std::uint64_t completed_chains = 0;
  std::uint64_t expired_chains = 0;
  std::uint64_t live_chains = 0;
  double voided_value = 0.0;
  double forfeited_value = 0.0;

  bool capital_balanced = false;
  bool orders_balanced = false;

  bool ok() const noexcept { return capital_balanced && orders_balanced; }
  std::string describe() const;
};

/// Checks capital conservation across both ecosystems (kill transfers
/// cancel) within `tolerance`, and generated = completed + expired + live.
LedgerReport ledger_audit(const World& world, const Ecosystems& ecosystems, double tolerance = 1e-6);

}  // namespace ecoval
