#include "ecoval/entropy.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ecoval {

namespace {

// x log2 x with the 0 log 0 = 0 convention.
double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

void check_cost_model(double k, double nodes, double niches) {
  if (!(k > 0.0)) throw std::domain_error("cost coefficient k must be > 0");
  if (!(nodes >= 1.0)) throw std::domain_error("node count must be >= 1");
  if (!(niches >= 1.0) || niches > nodes)
    throw std::domain_error("niche count " + std::to_string(niches) +
                            " outside [1, " + std::to_string(nodes) + "]");
}

}  // namespace

std::uint64_t NicheDistribution::total() const noexcept {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

std::size_t NicheDistribution::occupied() const noexcept {
  std::size_t n = 0;
  for (auto c : counts) n += c > 0 ? 1 : 0;
  return n;
}

double shannon_entropy(std::span<const std::uint64_t> counts) {
  const auto total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  if (total == 0) throw std::domain_error("entropy of an empty distribution");
  const double n = static_cast<double>(total);
  double h = 0.0;
  for (auto c : counts) h -= xlog2x(static_cast<double>(c) / n);
  // -0.0 for the single-class case
  return h == 0.0 ? 0.0 : h;
}

double shannon_entropy(const NicheDistribution& dist) {
  return shannon_entropy(std::span<const std::uint64_t>(dist.counts));
}

double max_entropy(std::uint64_t classes) {
  if (classes == 0) throw std::domain_error("max entropy needs at least one class");
  return std::log2(static_cast<double>(classes));
}

std::optional<double> value_efficiency(const EfficiencyRecord& rec) {
  if (!(rec.consumed > 0.0)) return std::nullopt;
  return rec.gained / rec.consumed;
}

OperatingCost operating_cost(const CostModel& model) {
  check_cost_model(model.k, model.nodes, model.niches);
  OperatingCost out;
  out.management = model.k * xlog2x(model.nodes / model.niches);
  out.matching = model.k * xlog2x(model.niches);
  out.total = out.management + out.matching;
  return out;
}

OptimalPartition optimal_partition(double k, double nodes) {
  if (!(k > 0.0)) throw std::domain_error("cost coefficient k must be > 0");
  if (!(nodes >= 1.0)) throw std::domain_error("node count must be >= 1");
  const double root = std::sqrt(nodes);
  return {root, 2.0 * k * xlog2x(root), std::log2(root)};
}

std::uint64_t integer_optimal_niches(double k, std::uint64_t nodes) {
  if (nodes == 0) throw std::domain_error("node count must be >= 1");
  const double n = static_cast<double>(nodes);
  const auto lo = static_cast<std::uint64_t>(std::floor(std::sqrt(n)));
  const auto hi = std::min<std::uint64_t>(lo + 1, nodes);
  const double c_lo = operating_cost({k, n, static_cast<double>(lo)}).total;
  const double c_hi = operating_cost({k, n, static_cast<double>(hi)}).total;
  return c_hi < c_lo ? hi : lo;
}

ModeCosts mode_costs(double k, double nodes, const ModeComparison& cmp) {
  check_cost_model(k, nodes, cmp.niches_control);
  if (!(cmp.niches_random >= 2.0))
    throw std::domain_error("random-mode niche count must be >= 2");
  if (!(cmp.demand >= 0.0)) throw std::domain_error("demand must be >= 0");
  return {k * xlog2x(nodes / cmp.niches_control),
          k * xlog2x(cmp.niches_random) * cmp.demand};
}

double demand_dividing_point(double nodes, double niches_control,
                             double niches_random) {
  if (!(niches_random >= 2.0))
    throw std::domain_error("random-mode niche count must be >= 2");
  check_cost_model(1.0, nodes, niches_control);
  return nodes * (std::log(nodes) - std::log(niches_control)) /
         (niches_control * niches_random * std::log(niches_random));
}

}  // namespace ecoval
