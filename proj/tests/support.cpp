#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ecoval/agents.hpp"
#include "ecoval/entropy.hpp"
#include "ecoval/strategy.hpp"
#include "ecoval/world.hpp"

namespace ecoval::testing {

double entropy_oracle(const std::vector<std::uint64_t>& counts) {
  double total = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  double h = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / total;
    h -= p * std::log(p);
  }
  return h / std::log(2.0);
}

double cost_oracle(double k, double nodes, double niches) {
  const double per = nodes / niches;
  return k * (per * std::log(per) + niches * std::log(niches)) / std::log(2.0);
}

std::uint64_t brute_force_optimal_niches(double k, std::uint64_t nodes) {
  std::uint64_t best = 1;
  double best_cost = cost_oracle(k, static_cast<double>(nodes), 1.0);
  for (std::uint64_t m = 2; m <= nodes; ++m) {
    const double c = cost_oracle(k, static_cast<double>(nodes), static_cast<double>(m));
    if (c < best_cost) {
      best_cost = c;
      best = m;
    }
  }
  return best;
}

double continuous_min_cost(double k, double nodes) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 1.0, b = nodes;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = cost_oracle(k, nodes, x1), f2 = cost_oracle(k, nodes, x2);
  for (int i = 0; i < 200 && b - a > 1e-13 * nodes; ++i) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = cost_oracle(k, nodes, x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = cost_oracle(k, nodes, x2);
    }
  }
  return std::min(f1, f2);
}

double bisect_dividing_point(double nodes, double niches_control, double niches_random) {
  auto gap = [&](double d) {
    const double control = cost_oracle(1.0, nodes / niches_control, 1.0);
    const double random = niches_random * std::log2(niches_random) * d;
    return control - random;
  };
  double lo = 0.0, hi = 1.0;
  while (gap(hi) > 0.0) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (gap(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

template <class... Args>
void fail(PropertyResult& r, Args&&... parts) {
  if (r.failures++ > 0) return;
  std::ostringstream os;
  os.precision(17);
  (os << ... << parts);
  r.first_failure = os.str();
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

}  // namespace

PropertyResult entropy_bound_and_scale(std::uint64_t seed, int cases) {
  PropertyResult r{"entropy bound and scale invariance"};
  std::mt19937_64 gen(seed);
  for (int i = 0; i < cases; ++i, ++r.cases) {
    const auto n = std::uniform_int_distribution<int>(1, 40)(gen);
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(n));
    for (auto& c : counts) c = gen() % 4 == 0 ? 0 : std::uniform_int_distribution<std::uint64_t>(1, 1000)(gen);
    counts[gen() % counts.size()] += 1;
    const auto occupied = static_cast<double>(std::count_if(counts.begin(), counts.end(), [](auto c) { return c > 0; }));
    const double h = shannon_entropy(counts);
    if (h < 0.0 || h > std::log2(occupied) + 1e-12) fail(r, "bound violated: H=", h, " classes=", occupied);
    if (!close(h, entropy_oracle(counts), 1e-12)) fail(r, "oracle mismatch: ", h, " vs ", entropy_oracle(counts));
    const auto scale = std::uniform_int_distribution<std::uint64_t>(2, 1000)(gen);
    auto scaled = counts;
    for (auto& c : scaled) c *= scale;
    if (!close(shannon_entropy(scaled), h, 1e-12)) fail(r, "scale ", scale, " changed H from ", h);
  }
  return r;
}

PropertyResult cost_symmetry_at_sqrt(std::uint64_t seed, int cases) {
  PropertyResult r{"cost symmetry at sqrt(N)"};
  std::mt19937_64 gen(seed);
  for (int i = 0; i < cases; ++i, ++r.cases) {
    const double k = std::uniform_real_distribution<double>(0.01, 100.0)(gen);
    const double nodes = std::uniform_real_distribution<double>(1.0, 1e6)(gen);
    const double root = std::sqrt(nodes);
    const auto at = operating_cost({k, nodes, root});
    if (!close(at.management, at.matching, 1e-9)) fail(r, "c1 ", at.management, " != c2 ", at.matching, " N=", nodes);
    if (!close(at.total, cost_oracle(k, nodes, root), 1e-9)) fail(r, "cost oracle mismatch at N=", nodes);
    const double m = std::uniform_real_distribution<double>(1.0, nodes)(gen);
    if (operating_cost({k, nodes, m}).total < at.total * (1.0 - 1e-12))
      fail(r, "m=", m, " beats sqrt(N) for N=", nodes);
  }
  return r;
}

PropertyResult hub_conservation(std::uint64_t seed, int cases) {
  PropertyResult r{"hub conservation"};
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> amount(0.0, 200.0);
  for (int i = 0; i < cases; ++i, ++r.cases) {
    const int period = std::uniform_int_distribution<int>(1, 20)(gen);
    EcosystemState eco(Ecosystem::alpha, StrategyKind::control, 1, period);
    AgentId next_id = 1;
    double paid_out = 0.0;  // capital that left with removed agents
    double start_capital = 0.0;
    auto add_agent = [&] {
      Agent a;
      a.id = next_id++;
      a.capital = amount(gen);
      start_capital += a.capital;
      eco.agents.push_back(std::move(a));
    };
    const int n0 = std::uniform_int_distribution<int>(0, 30)(gen);
    for (int j = 0; j < n0; ++j) add_agent();

    double routed = 0.0;
    const int ticks = std::uniform_int_distribution<int>(1, 100)(gen);
    for (int t = 0; t < ticks; ++t) {
      const int payouts = std::uniform_int_distribution<int>(0, 5)(gen);
      for (int p = 0; p < payouts; ++p) {
        Agent* to = eco.agents.empty() || gen() % 5 == 0
                        ? nullptr
                        : &eco.agents[gen() % eco.agents.size()];
        const double v = amount(gen);
        if (!route_payout(eco, to, v)) fail(r, "control refused a payout");
        routed += v;
      }
      if (!eco.agents.empty() && gen() % 7 == 0) {
        const auto idx = gen() % eco.agents.size();
        paid_out += eco.agents[idx].capital;
        eco.agents.erase(eco.agents.begin() + static_cast<std::ptrdiff_t>(idx));
      }
      if (gen() % 9 == 0) add_agent();
      const bool had_agents = !eco.agents.empty();
      const auto transfer = strategy_tick(eco, t);
      if (t % period == 0 && had_agents && eco.strategy.hub_pool.value() != 0.0)
        fail(r, "pool not emptied at tick ", t);
      if (transfer.recipients != (t % period == 0 && had_agents ? eco.agents.size() : 0))
        fail(r, "wrong recipient count at tick ", t);
    }
    const double pool = eco.strategy.hub_pool;
    if (!close(eco.hub_collected, routed, 1e-12)) fail(r, "collected ", double(eco.hub_collected), " vs routed ", routed);
    if (!close(eco.hub_collected, eco.hub_distributed + pool, 1e-12))
      fail(r, "collected ", double(eco.hub_collected), " != distributed ", double(eco.hub_distributed), " + pool ", pool);
    const double gained = eco.living_capital() + paid_out - start_capital;
    if (!close(gained, eco.hub_distributed, 1e-9)) fail(r, "agents gained ", gained, " but hub paid ", double(eco.hub_distributed));
  }
  return r;
}

PropertyResult split_sum(std::uint64_t seed, int cases) {
  PropertyResult r{"stage payouts sum to chain value"};
  std::mt19937_64 gen(seed);
  for (int i = 0; i < cases; ++i, ++r.cases) {
    World world(DemandProfile{}, gen());
    Ecosystems ecos{EcosystemState(Ecosystem::alpha, StrategyKind::control, 1),
                    EcosystemState(Ecosystem::beta, StrategyKind::random, 4)};
    for (auto& u : ecos.alpha.unlocked) u = true;
    for (auto& u : ecos.beta.unlocked) u = true;

    const int complexity = std::uniform_int_distribution<int>(1, kMaxLevel)(gen);
    const int value = std::uniform_int_distribution<int>(0, 1000)(gen);
    const Cell at{std::uniform_int_distribution<int>(0, kGridWidth - 1)(gen),
                  std::uniform_int_distribution<int>(0, kGridHeight - 1)(gen)};

    std::vector<std::pair<Ecosystem, AgentId>> workers;
    for (int level = 1; level <= complexity; ++level) {
      auto& eco = gen() % 2 ? ecos.alpha : ecos.beta;
      Agent a;
      a.id = world.next_agent_id();
      a.ecosystem = eco.id;
      a.level = level;
      a.position = at;
      a.capital = 100.0;
      eco.agents.push_back(std::move(a));
      workers.emplace_back(eco.id, eco.agents.back().id);
    }

    Order order;
    order.id = world.next_order_id();
    order.chain_id = order.id;
    order.region = region_of(at);
    order.remaining_stages = complexity - 1;
    order.position = at;
    order.chain_value = value;
    order.split = payout_split(complexity);
    order.expiry_tick = 50;
    ++world.ledger().generated_chains;
    OrderId live = world.insert(order).id;

    double stage_sum = 0.0;
    for (const auto& [e, id] : workers) {
      Order o = world.take(live);
      stage_sum += o.stage_payout();
      const auto out = process_order(*ecos[e].find(id), std::move(o), world, ecos);
      if (out.derived) live = *out.derived;
      if (out.completed && !close(out.released + out.forfeited, value, 1e-12))
        fail(r, "released ", out.released, " of chain value ", value);
    }
    if (!close(stage_sum, value, 1e-12)) fail(r, "stage payouts ", stage_sum, " != ", value, " at complexity ", complexity);
    if (!close(world.ledger().released_value, value, 1e-12))
      fail(r, "ledger released ", double(world.ledger().released_value), " != ", value);
    if (world.ledger().completed_chains != 1 || !world.live_orders().empty()) fail(r, "chain did not complete");
  }
  return r;
}

PropertyResult mutation_clamp(std::uint64_t seed, int cases) {
  PropertyResult r{"mutation stays within trait range"};
  std::mt19937_64 gen(seed);
  World world(DemandProfile{}, seed);
  for (int i = 0; i < cases; ++i, ++r.cases) {
    SimParams params;
    params.trait_lo = std::uniform_int_distribution<int>(1, 5)(gen);
    params.trait_hi = params.trait_lo + std::uniform_int_distribution<int>(0, 6)(gen);
    EcosystemState eco(Ecosystem::beta, StrategyKind::random, 4);
    Agent parent;
    parent.id = world.next_agent_id();
    parent.ecosystem = Ecosystem::beta;
    parent.position = region(4).center;
    parent.capital = 1000.0;
    // bias toward the range ends where clamping matters
    auto trait = [&] {
      switch (gen() % 3) {
        case 0: return params.trait_lo;
        case 1: return params.trait_hi;
        default: return std::uniform_int_distribution<int>(params.trait_lo, params.trait_hi)(gen);
      }
    };
    parent.speed = trait();
    parent.vision = trait();
    eco.agents.push_back(parent);
    const Agent& child = spawn_agent(eco, &eco.agents.front(), world, params);
    for (auto [c, p, what] : {std::tuple{child.speed, parent.speed, "speed"}, {child.vision, parent.vision, "vision"}}) {
      if (c < params.trait_lo || c > params.trait_hi)
        fail(r, what, " ", c, " outside [", params.trait_lo, ",", params.trait_hi, "]");
      if (std::abs(c - p) > 1) fail(r, what, " jumped from ", p, " to ", c);
    }
  }
  return r;
}

std::vector<PropertyResult> all_properties(std::uint64_t seed, int cases) {
  return {entropy_bound_and_scale(seed, cases), cost_symmetry_at_sqrt(seed + 1, cases), hub_conservation(seed + 2, cases),
          split_sum(seed + 3, cases), mutation_clamp(seed + 4, cases)};
}

}  // namespace ecoval::testing
