#pragma once

// Analytic value-entropy model: niche entropy, operating cost, the optimal
// niche partition and the control/random mode cost crossover.
//
// Every function here is pure. Domain violations throw std::domain_error.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace ecoval {

/// Census of node counts per niche class.
struct NicheDistribution {
  std::vector<std::uint64_t> counts;

  std::uint64_t total() const noexcept;
  /// Number of classes with a nonzero count.
  std::size_t occupied() const noexcept;
};

struct EfficiencyRecord {
  double gained = 0.0;
  double consumed = 0.0;
  int window = 1;
};

struct CostModel {
  double k = 1.0;
  double nodes = 1.0;
  double niches = 1.0;
};

struct OperatingCost {
  double management = 0.0;  // c1
  double matching = 0.0;    // c2
  double total = 0.0;
};

struct OptimalPartition {
  double niches = 0.0;     // m1 = sqrt(N)
  double min_cost = 0.0;   // 2k sqrt(N) log2 sqrt(N)
  double entropy = 0.0;    // log2 sqrt(N)
};

struct ModeComparison {
  double niches_control = 1.0;  // m_A
  double niches_random = 2.0;   // m_B
  double demand = 0.0;          // d
};

struct ModeCosts {
  double control = 0.0;  // C_a
  double random = 0.0;   // C_b
};

/// Shannon entropy in bits; zero-count classes contribute nothing.
double shannon_entropy(const NicheDistribution& dist);
double shannon_entropy(std::span<const std::uint64_t> counts);

/// log2(n), the entropy of n equally populated classes.
double max_entropy(std::uint64_t classes);

/// gained / consumed, or nullopt when nothing was consumed.
std::optional<double> value_efficiency(const EfficiencyRecord& rec);

OperatingCost operating_cost(const CostModel& model);

/// v = total gain - operating cost.
constexpr double value_benefit(double total_gain, double cost) noexcept {
  return total_gain - cost;
}

OptimalPartition optimal_partition(double k, double nodes);

/// Integer niche count minimizing the operating cost: the better of
/// floor(sqrt(N)) and ceil(sqrt(N)), lower one on ties.
std::uint64_t integer_optimal_niches(double k, std::uint64_t nodes);

ModeCosts mode_costs(double k, double nodes, const ModeComparison& cmp);

/// Demand quantity d' at which both mode costs are equal.
double demand_dividing_point(double nodes, double niches_control,
                             double niches_random);

}  // namespace ecoval
