// Acceptance suite: one PASS/FAIL line per criterion. With arguments, runs
// only the listed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ecoval/entropy.hpp"
#include "ecoval/scenario.hpp"
#include "support.hpp"

using namespace ecoval;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("ecoval_acceptance_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

const std::vector<std::uint64_t> kSeeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};

template <class... Args>
std::string cat(Args&&... parts) {
  std::ostringstream os;
  os.precision(12);
  (os << ... << parts);
  return os.str();
}

Outcome table_exactness() {
  struct Row {
    std::vector<std::uint64_t> counts;
    double niches, entropy, cost;
  };
  const Row rows[] = {{{16}, 1, 0.0, 64.0},
                      {std::vector<std::uint64_t>(16, 1), 16, 4.0, 64.0},
                      {{4, 4, 4, 4}, 4, 2.0, 16.0}};
  double worst = 0.0;
  for (const auto& r : rows) {
    worst = std::max(worst, std::abs(shannon_entropy(r.counts) - r.entropy));
    worst = std::max(worst, std::abs(operating_cost({1.0, 16.0, r.niches}).total - r.cost));
  }
  return {worst <= 1e-12, cat("max deviation ", worst)};
}

Outcome optimal_partition_check() {
  const auto t0 = Clock::now();
  bool ok = true;
  double worst = 0.0;
  std::string where;
  for (double k : {1.0, 2.5}) {
    for (std::uint64_t n : {4u, 9u, 16u, 64u, 256u, 1024u}) {
      const double root = std::sqrt(static_cast<double>(n));
      const auto m = testing::brute_force_optimal_niches(k, n);
      if (m != static_cast<std::uint64_t>(std::floor(root)) && m != static_cast<std::uint64_t>(std::ceil(root))) {
        ok = false;
        where = cat("argmin ", m, " for N=", n);
      }
      const auto p = optimal_partition(k, static_cast<double>(n));
      const double formula = 2.0 * k * root * std::log2(root);
      const double dev = std::max({std::abs(p.min_cost - formula),
                                   std::abs(formula - testing::continuous_min_cost(k, static_cast<double>(n))),
                                   std::abs(p.entropy - testing::entropy_oracle(std::vector<std::uint64_t>(
                                                            static_cast<std::size_t>(root), 1)))});
      worst = std::max(worst, dev);
    }
  }
  const double secs = seconds_since(t0);
  ok = ok && worst <= 1e-9 && secs < 1.0;
  return {ok, cat(where.empty() ? "" : where + "; ", "max deviation ", worst, ", ", secs, " s")};
}

Outcome dividing_point_check() {
  const auto t0 = Clock::now();
  const double exact = demand_dividing_point(16.0, 2.0, 4.0);
  std::mt19937_64 gen(12);
  int agree = 0;
  const int samples = 1000;
  for (int i = 0; i < samples; ++i) {
    const double n = std::uniform_real_distribution<double>(2.0, 1e4)(gen);
    const double m_a = std::uniform_real_distribution<double>(1.0, n)(gen);
    const double m_b = std::uniform_real_distribution<double>(2.0, 100.0)(gen);
    const double d_prime = demand_dividing_point(n, m_a, m_b);
    double d;
    do {
      d = std::uniform_real_distribution<double>(0.0, 2.0 * d_prime + 10.0)(gen);
    } while (std::abs(d - d_prime) <= 1e-9 * (1.0 + d_prime));
    const auto c = mode_costs(1.0, n, {m_a, m_b, d});
    const auto sign = [](double v) { return (v > 0) - (v < 0); };
    agree += sign(c.control - c.random) == sign(d_prime - d);
  }
  const double secs = seconds_since(t0);
  return {std::abs(exact - 3.0) <= 1e-12 && agree == samples && secs < 1.0,
          cat("d'(16,2,4)=", exact, ", sign agreement ", agree, "/", samples, ", ", secs, " s")};
}

Outcome determinism_check() {
  const auto dir = scratch("determinism");
  double slowest = 0.0;
  for (const char* run : {"a", "b"}) {
    const auto t0 = Clock::now();
    const std::string cmd = cat("\"", ECOVAL_CLI_PATH, "\" run --preset case1 --seed 42 --out \"",
                                (dir / run).string(), "\"");
    if (std::system(cmd.c_str()) != 0) return {false, "cli run failed: " + cmd};
    slowest = std::max(slowest, seconds_since(t0));
  }
  bool same = true;
  for (const char* f : {"metrics.csv", "summary.json"}) {
    const auto a = slurp(dir / "a" / f);
    same = same && !a.empty() && a == slurp(dir / "b" / f);
  }
  return {same && slowest < 60.0, cat(same ? "identical" : "outputs differ", ", slowest run ", slowest, " s")};
}

Outcome ledger_check() {
  std::string detail;
  bool ok = true;
  for (const char* preset : {"case1", "case2"}) {
    auto cfg = load_scenario(preset);
    const auto out = run(cfg);
    const bool balanced = out.valid && std::abs(out.ledger.capital_delta) <= 1e-6 &&
                          out.ledger.generated_chains ==
                              out.ledger.completed_chains + out.ledger.expired_chains + out.ledger.live_chains;
    ok = ok && balanced;
    detail += cat(preset, " delta ", out.ledger.capital_delta, "; ");
  }

  auto cfg = load_scenario("case1");
  cfg.ticks = 100;
  RunHooks corrupt;
  corrupt.after_tick = [&](int tick, World&, Ecosystems& ecos) {
    if (tick == cfg.ticks - 1 && !ecos.beta.agents.empty()) ecos.beta.agents.front().capital += 1.0;
  };
  const auto bad = run(cfg, corrupt);
  const bool caught = !bad.valid && std::abs(std::abs(bad.ledger.capital_delta) - 1.0) <= 1e-6;
  detail += cat("injected +1 -> ", caught ? "detected" : "missed", " (delta ", bad.ledger.capital_delta, ")");
  return {ok && caught, detail};
}

Outcome case_sweep(const char* preset, bool ConclusionChecks::*flag) {
  const auto cfg = load_scenario(preset);
  const auto report = sweep(cfg, kSeeds, 1);
  int hits = 0;
  std::string per_seed;
  for (const auto& r : report.runs) {
    const bool hit = r.valid && r.conclusions.*flag;
    hits += hit;
    per_seed += cat(" ", r.seed, hit ? "+" : "-");
  }
  return {hits >= 7, cat(hits, "/", kSeeds.size(), " seeds [", per_seed.substr(1), "] (need >= 7)")};
}

Outcome confinement_check() {
  const auto cfg0 = load_scenario("case1");
  int violations = 0, unlocks = 0;
  std::string first;
  auto note = [&](std::string what) {
    if (violations++ == 0) first = std::move(what);
  };
  for (auto seed : kSeeds) {
    auto cfg = cfg0;
    cfg.seed = seed;
    std::array<std::array<bool, kRegionCount + 1>, 2> was{};
    RunHooks hooks;
    hooks.after_tick = [&](int tick, World&, Ecosystems& ecos) {
      for (const auto* eco : {&ecos.alpha, &ecos.beta}) {
        auto& prev = was[static_cast<int>(eco->id)];
        const std::size_t n = eco->agents.size();
        const double capital = eco->total_capital();
        for (RegionId r : {2, 5}) {
          if (eco->is_unlocked(r) && !prev[r] &&
              (n < cfg.agents.adjacent.min_agents || capital < cfg.agents.adjacent.min_capital))
            note(cat("seed ", seed, " tick ", tick, ": region ", r, " opened at n=", n, " capital=", capital));
        }
        if (eco->is_unlocked(3) && !prev[3] &&
            (n < cfg.agents.emerging.min_agents || capital < cfg.agents.emerging.min_capital))
          note(cat("seed ", seed, " tick ", tick, ": region 3 opened at n=", n, " capital=", capital));
        for (const auto& a : eco->agents) {
          const RegionId r = region_of(a.position);
          if (!eco->is_unlocked(r))
            note(cat("seed ", seed, " tick ", tick, ": ", to_string(eco->id), " agent ", a.id, " in locked region ", r));
        }
        for (RegionId r = 1; r <= kRegionCount; ++r) {
          if (tick > 0 && eco->is_unlocked(r) && !prev[r]) ++unlocks;
          prev[r] = eco->is_unlocked(r);
        }
      }
    };
    run(cfg, hooks);
  }
  return {violations == 0, violations == 0 ? cat(kSeeds.size(), " runs confined, ", unlocks, " unlocks checked")
                                           : cat(violations, " violations; first: ", first)};
}

Outcome recomputation_check() {
  auto cfg = load_scenario("case1");
  cfg.niche_mode = NicheMode::attribute;
  const auto dir = scratch("census");
  export_run(run(cfg), dir);
  std::ifstream metrics_in(dir / "metrics.csv"), census_in(dir / "census.csv");
  const auto metrics = read_metrics_csv(metrics_in);
  const auto census = read_census_csv(census_in);
  if (metrics.size() != census.size() || metrics.empty()) return {false, "row count mismatch"};
  double worst = 0.0;
  for (std::size_t i = 0; i < metrics.size(); ++i) {
    if (census[i].tick != metrics[i].tick || census[i].ecosystem != metrics[i].ecosystem)
      return {false, cat("row ", i, " misaligned")};
    const std::vector<std::uint64_t> counts(census[i].counts.begin(), census[i].counts.end());
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    const double h = total == 0 ? 0.0 : testing::entropy_oracle(counts);
    worst = std::max(worst, std::abs(h - metrics[i].entropy));
  }
  return {worst <= 1e-9, cat(metrics.size(), " rows, max deviation ", worst)};
}

Outcome property_check() {
  bool ok = true;
  std::string detail;
  for (const auto& r : testing::all_properties(20261016, 1000)) {
    ok = ok && r.ok() && r.cases >= 1000;
    detail += cat(r.name, " ", r.cases - r.failures, "/", r.cases, "; ");
    if (!r.ok()) detail += "first failure: " + r.first_failure + "; ";
  }
  return {ok, detail.substr(0, detail.size() - 2)};
}

}  // namespace

int main(int argc, char** argv) {
  setenv("ECOVAL_LOG", "quiet", 1);
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"cost and entropy of the three sixteen-node layouts", table_exactness},
      {"optimal partition", optimal_partition_check},
      {"mode cost dividing point", dividing_point_check},
      {"deterministic run output", determinism_check},
      {"capital and order ledger audit", ledger_check},
      {"stable demand: random mode ahead (V_beta > V_alpha, H_beta >= H_alpha)",
       [] { return case_sweep("case1", &ConclusionChecks::mature_market); }},
      {"demand burst: control mode ahead (C_beta > C_alpha after burst, V_alpha > V_beta)",
       [] { return case_sweep("case2", &ConclusionChecks::emerging_market); }},
      {"confinement until expansion thresholds", confinement_check},
      {"attribute entropy recomputed from census.csv", recomputation_check},
      {"generative property suites", property_check},
  };

  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty())
    for (int i = 1; i <= static_cast<int>(criteria.size()); ++i) selected.push_back(i);

  int failed = 0;
  for (int id : selected) {
    if (id < 1 || id > static_cast<int>(criteria.size())) {
      std::cerr << "no criterion " << id << '\n';
      return 2;
    }
    const auto& [name, check] = criteria[id - 1];
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << id << ". " << name << ": " << o.detail << std::endl;
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
