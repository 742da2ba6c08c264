#pragma once

// Independent oracles and hand-rolled generators shared by the unit suites
// and the acceptance binary. Nothing here calls into the entropy code paths
// it is used to check.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace ecoval::testing {

// -- oracles

/// Entropy in bits from probabilities, natural log route.
double entropy_oracle(const std::vector<std::uint64_t>& counts);

/// Operating cost k((N/m)log(N/m) + m log m) evaluated term by term.
double cost_oracle(double k, double nodes, double niches);

/// Integer m in [1, N] minimizing cost_oracle by exhaustive scan; lower m on ties.
std::uint64_t brute_force_optimal_niches(double k, std::uint64_t nodes);

/// Golden-section minimum of cost_oracle over real m in [1, N].
double continuous_min_cost(double k, double nodes);

/// Demand at which the two mode costs meet, found by bisection on d.
double bisect_dividing_point(double nodes, double niches_control, double niches_random);

// -- property runs

struct PropertyResult {
  std::string name;
  int cases = 0;
  int failures = 0;
  std::string first_failure;

  bool ok() const { return cases > 0 && failures == 0; }
};

PropertyResult entropy_bound_and_scale(std::uint64_t seed, int cases);
PropertyResult cost_symmetry_at_sqrt(std::uint64_t seed, int cases);
PropertyResult hub_conservation(std::uint64_t seed, int cases);
PropertyResult split_sum(std::uint64_t seed, int cases);
PropertyResult mutation_clamp(std::uint64_t seed, int cases);

std::vector<PropertyResult> all_properties(std::uint64_t seed, int cases);

}  // namespace ecoval::testing
