#include "ecoval/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <limits>
#include <sstream>

namespace ecoval {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// config

namespace {

// Walks a config object, checking keys and types against what is consumed.
class Node {
 public:
  Node(const ordered_json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + ": expected an object");
  }
  ~Node() = default;

  bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }

  Node child(const std::string& key) {
    seen_.push_back(key);
    return Node(j_.at(key), join(key));
  }

  template <class T>
  void read(const std::string& key, T& out) {
    seen_.push_back(key);
    if (!has(key)) return;
    const auto& v = j_.at(key);
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError(join(key) + ": expected a boolean");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw ConfigError(join(key) + ": expected an integer");
      if constexpr (std::is_unsigned_v<T>)
        if (v.get<long long>() < 0) throw ConfigError(join(key) + ": expected a non-negative integer");
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError(join(key) + ": expected a number");
    } else {
      if (!v.is_string()) throw ConfigError(join(key) + ": expected a string");
    }
    out = v.get<T>();
  }

  template <class E>
  void read_enum(const std::string& key, E& out, std::initializer_list<std::pair<const char*, E>> names) {
    std::string s;
    read(key, s);
    if (s.empty()) return;
    for (const auto& [n, e] : names)
      if (s == n) {
        out = e;
        return;
      }
    throw ConfigError(join(key) + ": unknown value '" + s + "'");
  }

  void read_range(const std::string& key, double& lo, double& hi) {
    seen_.push_back(key);
    if (!has(key)) return;
    const auto& v = j_.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
      throw ConfigError(join(key) + ": expected [lo, hi]");
    lo = v[0].get<double>();
    hi = v[1].get<double>();
  }

  void read_range(const std::string& key, int& lo, int& hi) {
    seen_.push_back(key);
    if (!has(key)) return;
    const auto& v = j_.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer())
      throw ConfigError(join(key) + ": expected [lo, hi] integers");
    lo = v[0].get<int>();
    hi = v[1].get<int>();
  }

  void mark(const std::string& key) { seen_.push_back(key); }

  const ordered_json& raw(const std::string& key) {
    seen_.push_back(key);
    return j_.at(key);
  }

  /// Rejects keys nobody asked for.
  void finish() const {
    for (const auto& [key, value] : j_.items())
      if (std::find(seen_.begin(), seen_.end(), key) == seen_.end())
        throw ConfigError(join(key) + ": unknown key");
  }

  std::string join(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  std::string where() const { return path_.empty() ? "<root>" : path_; }

 private:
  const ordered_json& j_;
  std::string path_;
  std::vector<std::string> seen_;
};

ordered_json trend_tree(const RegionTrend& t) {
  ordered_json j;
  j["reference"] = t.reference;
  j["amplitude"] = t.amplitude;
  j["period"] = t.period;
  ordered_json bursts = ordered_json::array();
  for (const auto& [tick, n] : t.bursts) bursts.push_back({{"tick", tick}, {"reference", n}});
  j["bursts"] = bursts;
  return j;
}

}  // namespace

void ScenarioConfig::validate() const {
  agents.validate();
  demand.validate();
  if (ticks < 1) throw ConfigError("ticks must be >= 1");
  if (alpha_strategy.hub_period < 1) throw ConfigError("strategy.alpha.hub_period must be >= 1");
  if (beta_strategy.hub_period < 1) throw ConfigError("strategy.beta.hub_period must be >= 1");
}

ordered_json to_tree(const ScenarioConfig& cfg) {
  ordered_json j;
  j["preset"] = cfg.preset;
  j["ticks"] = cfg.ticks;
  j["seed"] = cfg.seed;

  const auto& a = cfg.agents;
  auto& ja = j["agents"];
  ja["reproduction_threshold"] = a.reproduction_threshold;
  ja["reproduction_punishment_k"] = a.reproduction_punishment_k;
  ja["death_threshold"] = a.death_threshold;
  ja["initial_counts"] = {{"alpha", a.initial_alpha}, {"beta", a.initial_beta}};
  ja["initial_capital"] = {a.capital_lo, a.capital_hi};
  ja["trait_range"] = {a.trait_lo, a.trait_hi};
  ja["initial_levels"] = a.initial_levels == InitialLevels::primary ? "primary" : "random";
  ja["expansion"] = {
      {"adjacent", {{"agents", a.adjacent.min_agents}, {"capital", a.adjacent.min_capital}}},
      {"emerging", {{"agents", a.emerging.min_agents}, {"capital", a.emerging.min_capital}}}};

  const auto& d = cfg.demand;
  auto& jd = j["demand"];
  for (int r = 0; r < kRegionCount; ++r) jd["trends"][std::to_string(r + 1)] = trend_tree(d.trends[r]);
  jd["scatter_radius"] = d.scatter_radius;
  jd["stage_lifetime"] = d.stage_lifetime;
  jd["complexity_mode"] = d.complexity_mode == ComplexityMode::region ? "region" : "random";
  for (int c = 0; c < kMaxLevel; ++c)
    jd["order_value"][std::to_string(c + 1)] = {d.value_by_complexity[c].lo, d.value_by_complexity[c].hi};
  jd["volume_cap"] = d.volume_cap ? ordered_json(*d.volume_cap) : ordered_json(nullptr);
  jd["qos_preference"] = d.qos_preference.empty() ? ordered_json(nullptr) : ordered_json::parse(d.qos_preference);

  auto strat = [](const StrategyConfig& s) {
    return ordered_json{{"kind", std::string(to_string(s.kind))}, {"hub_period", s.hub_period}};
  };
  j["strategy"] = {{"alpha", strat(cfg.alpha_strategy)}, {"beta", strat(cfg.beta_strategy)}};
  j["metrics"] = {{"niche_mode", std::string(to_string(cfg.niche_mode))}, {"window", a.efficiency_window}};
  j["output"] = {{"dir", cfg.out_dir ? ordered_json(*cfg.out_dir) : ordered_json(nullptr)}, {"events", cfg.events}};
  return j;
}

ordered_json preset_tree(std::string_view name) {
  if (name != "case1" && name != "case2")
    throw ConfigError("preset: unknown preset '" + std::string(name) + "' (expected case1 or case2)");
  ScenarioConfig cfg;
  cfg.preset = std::string(name);
  for (int r : {1, 4}) cfg.demand.trends[r - 1] = {200.0, 25.0, 100, {}};
  for (int r : {2, 3, 5}) cfg.demand.trends[r - 1] = {225.0, 30.0, 100, {}};
  if (name == "case2") cfg.demand.trends[2].bursts[280] = 350.0;
  return to_tree(cfg);
}

ScenarioConfig parse_scenario(const ordered_json& tree) {
  ScenarioConfig cfg;
  Node root(tree, "");
  root.read("preset", cfg.preset);
  root.read("ticks", cfg.ticks);
  root.read("seed", cfg.seed);

  if (root.has("agents")) {
    Node n = root.child("agents");
    auto& a = cfg.agents;
    n.read("reproduction_threshold", a.reproduction_threshold);
    n.read("reproduction_punishment_k", a.reproduction_punishment_k);
    n.read("death_threshold", a.death_threshold);
    if (n.has("initial_counts")) {
      Node c = n.child("initial_counts");
      c.read("alpha", a.initial_alpha);
      c.read("beta", a.initial_beta);
      c.finish();
    }
    n.read_range("initial_capital", a.capital_lo, a.capital_hi);
    n.read_range("trait_range", a.trait_lo, a.trait_hi);
    n.read_enum("initial_levels", a.initial_levels,
                {{"primary", InitialLevels::primary}, {"random", InitialLevels::random}});
    if (n.has("expansion")) {
      Node e = n.child("expansion");
      for (auto [key, gate] : {std::pair{"adjacent", &a.adjacent}, std::pair{"emerging", &a.emerging}}) {
        if (!e.has(key)) continue;
        Node g = e.child(key);
        g.read("agents", gate->min_agents);
        g.read("capital", gate->min_capital);
        g.finish();
      }
      e.finish();
    }
    n.finish();
  }

  if (root.has("demand")) {
    Node n = root.child("demand");
    auto& d = cfg.demand;
    if (n.has("trends")) {
      Node t = n.child("trends");
      for (int r = 1; r <= kRegionCount; ++r) {
        const auto key = std::to_string(r);
        if (!t.has(key)) continue;
        Node rt = t.child(key);
        auto& trend = d.trends[r - 1];
        rt.read("reference", trend.reference);
        rt.read("amplitude", trend.amplitude);
        rt.read("period", trend.period);
        if (rt.has("bursts")) {
          const auto& arr = rt.raw("bursts");
          if (!arr.is_array()) throw ConfigError(rt.join("bursts") + ": expected an array");
          trend.bursts.clear();
          for (std::size_t i = 0; i < arr.size(); ++i) {
            Node b(arr[i], rt.join("bursts") + "." + std::to_string(i));
            int tick = 0;
            double ref = trend.reference;
            b.read("tick", tick);
            b.read("reference", ref);
            b.finish();
            trend.bursts[tick] = ref;
          }
        } else {
          rt.mark("bursts");
        }
        rt.finish();
      }
      t.finish();
    }
    n.read("scatter_radius", d.scatter_radius);
    n.read("stage_lifetime", d.stage_lifetime);
    n.read_enum("complexity_mode", d.complexity_mode,
                {{"region", ComplexityMode::region}, {"random", ComplexityMode::random}});
    if (n.has("order_value")) {
      Node v = n.child("order_value");
      for (int c = 1; c <= kMaxLevel; ++c)
        v.read_range(std::to_string(c), d.value_by_complexity[c - 1].lo, d.value_by_complexity[c - 1].hi);
      v.finish();
    }
    if (n.has("volume_cap")) {
      std::uint64_t cap = 0;
      n.read("volume_cap", cap);
      d.volume_cap = cap;
    } else {
      n.mark("volume_cap");
      d.volume_cap.reset();
    }
    n.mark("qos_preference");
    d.qos_preference = n.has("qos_preference") ? n.raw("qos_preference").dump() : std::string{};
    n.finish();
  }

  if (root.has("strategy")) {
    Node n = root.child("strategy");
    for (auto [key, s] : {std::pair{"alpha", &cfg.alpha_strategy}, std::pair{"beta", &cfg.beta_strategy}}) {
      if (!n.has(key)) continue;
      Node sn = n.child(key);
      sn.read_enum("kind", s->kind, {{"control", StrategyKind::control}, {"random", StrategyKind::random}});
      sn.read("hub_period", s->hub_period);
      sn.finish();
    }
    n.finish();
  }

  if (root.has("metrics")) {
    Node n = root.child("metrics");
    n.read_enum("niche_mode", cfg.niche_mode,
                {{"attribute", NicheMode::attribute}, {"efficiency", NicheMode::efficiency}});
    n.read("window", cfg.agents.efficiency_window);
    n.finish();
  }

  if (root.has("output")) {
    Node n = root.child("output");
    if (n.has("dir")) {
      std::string dir;
      n.read("dir", dir);
      cfg.out_dir = dir;
    } else {
      n.mark("dir");
    }
    n.read("events", cfg.events);
    n.finish();
  }
  root.finish();
  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario(std::string_view preset, const std::optional<fs::path>& file) {
  if (!file) return parse_scenario(preset_tree(preset));
  std::ifstream in(*file);
  if (!in) throw ConfigError("config file " + file->string() + ": cannot open");
  ordered_json overlay;
  try {
    overlay = ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file " + file->string() + ": " + e.what());
  }
  if (!overlay.is_object()) throw ConfigError("config file " + file->string() + ": expected an object");
  std::string base(preset);
  if (overlay.contains("preset") && overlay["preset"].is_string()) base = overlay["preset"].get<std::string>();
  ordered_json tree = preset_tree(base);
  tree.merge_patch(overlay);
  tree["preset"] = base;
  return parse_scenario(tree);
}

ScenarioConfig load_scenario(const std::string& source) {
  if (source == "case1" || source == "case2") return load_scenario(source, std::nullopt);
  if (!fs::exists(source)) throw ConfigError("scenario '" + source + "': not a preset and no such file");
  return load_scenario("case1", fs::path(source));
}

// ---------------------------------------------------------------------------
// simulation loop

ConclusionChecks evaluate_conclusions(const std::vector<MetricsRecord>& metrics, std::optional<int> burst_tick) {
  ConclusionChecks out;
  if (metrics.size() < 2) return out;
  const auto& last_a = metrics[metrics.size() - 2];
  const auto& last_b = metrics[metrics.size() - 1];
  const int final_tick = last_a.tick;

  auto distance_to_optimum = [](const MetricsRecord& r) {
    if (r.n_agents == 0) return std::numeric_limits<double>::infinity();
    return std::abs(r.entropy - optimal_partition(1.0, static_cast<double>(r.n_agents)).entropy);
  };
  const double da = distance_to_optimum(last_a);
  const double db = distance_to_optimum(last_b);
  out.optimal_entropy = (da < db && last_a.value_benefit > last_b.value_benefit) ||
                        (db < da && last_b.value_benefit > last_a.value_benefit);

  bool entropy_order = true;
  bool cost_crossed = false;
  const int crossover_from = burst_tick.value_or(-1);
  for (std::size_t i = 0; i + 1 < metrics.size(); i += 2) {
    const auto& a = metrics[i];
    const auto& b = metrics[i + 1];
    if (a.tick > final_tick - 100 && b.entropy < a.entropy) entropy_order = false;
    if (a.tick > crossover_from && b.cum_cost > a.cum_cost) cost_crossed = true;
  }
  out.mature_market = last_b.value_benefit > last_a.value_benefit && entropy_order;
  out.emerging_market = cost_crossed && last_a.value_benefit > last_b.value_benefit;
  return out;
}

namespace {

EcosystemSummary summarize(const EcosystemState& eco, const MetricsRecord& last,
                           const std::vector<std::pair<RegionId, int>>& unlock_ticks) {
  EcosystemSummary s;
  s.n_agents = last.n_agents;
  s.entropy = last.entropy;
  s.cum_cost = last.cum_cost;
  s.cum_gain = last.cum_gain;
  s.value_benefit = last.value_benefit;
  s.hub_pool = last.hub_pool;
  s.births = last.births;
  s.deaths = last.deaths;
  s.kills = last.kills;
  for (RegionId r = 1; r <= kRegionCount; ++r)
    if (eco.is_unlocked(r)) s.unlocked.push_back(r);
  s.unlock_ticks = unlock_ticks;
  return s;
}

std::optional<int> earliest_burst(const DemandProfile& d) {
  std::optional<int> t;
  for (const auto& trend : d.trends)
    if (!trend.bursts.empty()) t = std::min(t.value_or(trend.bursts.begin()->first), trend.bursts.begin()->first);
  return t;
}

}  // namespace

RunOutput run(const ScenarioConfig& config, const RunHooks& hooks) {
  config.validate();
  RunOutput out;
  out.config = config;
  out.events.record_claims = config.events;

  World world(config.demand, config.seed);
  Ecosystems ecos{EcosystemState(Ecosystem::alpha, config.alpha_strategy.kind, 1, config.alpha_strategy.hub_period),
                  EcosystemState(Ecosystem::beta, config.beta_strategy.kind, 4, config.beta_strategy.hub_period)};
  seed_population(ecos.alpha, config.agents.initial_alpha, world, config.agents);
  seed_population(ecos.beta, config.agents.initial_beta, world, config.agents);

  std::vector<std::pair<RegionId, int>> unlock_ticks[2];
  out.metrics.reserve(static_cast<std::size_t>(config.ticks) * 2);
  out.census.reserve(static_cast<std::size_t>(config.ticks) * 2);
  std::vector<std::pair<Ecosystem, AgentId>> order;

  for (int t = 0; t < config.ticks; ++t) {
    world.set_tick(t);
    for (auto* eco : {&ecos.alpha, &ecos.beta})
      for (auto& a : eco->agents) a.efficiency.roll(t);

    replenish_orders(world);

    order.clear();
    for (auto* eco : {&ecos.alpha, &ecos.beta})
      for (const auto& a : eco->agents) order.emplace_back(eco->id, a.id);
    world.rng().shuffle(order);
    for (const auto& [e, id] : order) {
      auto& eco = ecos[e];
      Agent* agent = eco.find(id);
      auto rec = agent_tick(*agent, world, eco, &out.events);
      if (rec.claimed) process_order(*agent, std::move(*rec.claimed), world, ecos);
    }

    resolve_combat(world, ecos, &out.events);
    step_order_lifecycle(world);
    if (!hooks.skip_strategy_tick) {
      strategy_tick(ecos.alpha, t);
      strategy_tick(ecos.beta, t);
    }
    lifecycle(ecos.alpha, world, config.agents, &out.events);
    lifecycle(ecos.beta, world, config.agents, &out.events);
    for (auto* eco : {&ecos.alpha, &ecos.beta}) {
      for (RegionId r : try_expand(*eco, config.agents)) {
        unlock_ticks[static_cast<int>(eco->id)].emplace_back(r, t);
        out.events.add(t, EventKind::unlock, 0, eco->id, "region " + std::to_string(r));
      }
    }
    for (const auto* eco : {&ecos.alpha, &ecos.beta}) {
      out.metrics.push_back(snapshot(*eco, world, t, config.niche_mode));
      out.census.push_back({t, eco->id, attribute_census(*eco)});
    }
    if (hooks.after_tick) hooks.after_tick(t, world, ecos);
  }

  out.ledger = ledger_audit(world, ecos);
  out.valid = out.ledger.ok();
  auto& s = out.summary;
  s.seed = config.seed;
  s.ticks = config.ticks;
  s.burst_tick = earliest_burst(config.demand);
  s.alpha = summarize(ecos.alpha, out.metrics[out.metrics.size() - 2], unlock_ticks[0]);
  s.beta = summarize(ecos.beta, out.metrics.back(), unlock_ticks[1]);
  s.conclusions = evaluate_conclusions(out.metrics, s.burst_tick);
  return out;
}

// ---------------------------------------------------------------------------
// export

namespace {

std::string fmt_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw std::runtime_error("bad number '" + std::string(s) + "'");
  return v;
}

std::uint64_t parse_uint(std::string_view s) {
  std::uint64_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw std::runtime_error("bad integer '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

Ecosystem parse_ecosystem(std::string_view s) {
  if (s == "alpha") return Ecosystem::alpha;
  if (s == "beta") return Ecosystem::beta;
  throw std::runtime_error("bad ecosystem '" + std::string(s) + "'");
}

ordered_json summary_tree(const EcosystemSummary& s) {
  ordered_json j;
  j["n_agents"] = s.n_agents;
  j["entropy"] = s.entropy;
  j["cum_cost"] = s.cum_cost;
  j["cum_gain"] = s.cum_gain;
  j["value_benefit"] = s.value_benefit;
  j["hub_pool"] = s.hub_pool;
  j["births"] = s.births;
  j["deaths"] = s.deaths;
  j["kills"] = s.kills;
  j["unlocked_regions"] = s.unlocked;
  ordered_json ticks = ordered_json::object();
  for (const auto& [r, t] : s.unlock_ticks) ticks[std::to_string(r)] = t;
  j["unlock_ticks"] = ticks;
  return j;
}

ordered_json conclusions_tree(const ConclusionChecks& c) {
  return {{"optimal_entropy", c.optimal_entropy},
          {"mature_market", c.mature_market},
          {"emerging_market", c.emerging_market}};
}

}  // namespace

const std::vector<std::string>& metrics_columns() {
  static const std::vector<std::string> cols{
      "tick",      "ecosystem", "n_agents",  "n_l1",      "n_l2",      "n_l3",     "entropy",
      "cum_cost",  "cum_gain",  "value_benefit", "hub_pool", "orders_r1", "orders_r2", "orders_r3",
      "orders_r4", "orders_r5", "births",    "deaths",    "kills"};
  return cols;
}

void write_metrics_csv(std::ostream& os, const std::vector<MetricsRecord>& rows) {
  const auto& cols = metrics_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  for (const auto& r : rows) {
    os << r.tick << ',' << to_string(r.ecosystem) << ',' << r.n_agents;
    for (auto n : r.n_by_level) os << ',' << n;
    os << ',' << fmt_double(r.entropy) << ',' << fmt_double(r.cum_cost) << ',' << fmt_double(r.cum_gain) << ','
       << fmt_double(r.value_benefit) << ',' << fmt_double(r.hub_pool);
    for (auto n : r.orders_by_region) os << ',' << n;
    os << ',' << r.births << ',' << r.deaths << ',' << r.kills << '\n';
  }
}

std::vector<MetricsRecord> read_metrics_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("metrics.csv: missing header");
  std::vector<MetricsRecord> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != metrics_columns().size()) throw std::runtime_error("metrics.csv: wrong field count");
    MetricsRecord r;
    std::size_t i = 0;
    r.tick = static_cast<int>(parse_uint(f[i++]));
    r.ecosystem = parse_ecosystem(f[i++]);
    r.n_agents = parse_uint(f[i++]);
    for (auto& n : r.n_by_level) n = parse_uint(f[i++]);
    r.entropy = parse_double(f[i++]);
    r.cum_cost = parse_double(f[i++]);
    r.cum_gain = parse_double(f[i++]);
    r.value_benefit = parse_double(f[i++]);
    r.hub_pool = parse_double(f[i++]);
    for (auto& n : r.orders_by_region) n = parse_uint(f[i++]);
    r.births = parse_uint(f[i++]);
    r.deaths = parse_uint(f[i++]);
    r.kills = parse_uint(f[i++]);
    rows.push_back(r);
  }
  return rows;
}

void write_census_csv(std::ostream& os, const std::vector<CensusRow>& rows) {
  os << "tick,ecosystem";
  for (int l = 1; l <= kMaxLevel; ++l)
    for (int r = 1; r <= kRegionCount; ++r) os << ",l" << l << "_r" << r;
  os << '\n';
  for (const auto& row : rows) {
    os << row.tick << ',' << to_string(row.ecosystem);
    for (auto c : row.counts) os << ',' << c;
    os << '\n';
  }
}

std::vector<CensusRow> read_census_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("census.csv: missing header");
  std::vector<CensusRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 2 + kAttributeClasses) throw std::runtime_error("census.csv: wrong field count");
    CensusRow row;
    row.tick = static_cast<int>(parse_uint(f[0]));
    row.ecosystem = parse_ecosystem(f[1]);
    for (std::size_t i = 0; i < kAttributeClasses; ++i) row.counts[i] = parse_uint(f[2 + i]);
    rows.push_back(row);
  }
  return rows;
}

void write_events_csv(std::ostream& os, const EventLog& log, const std::function<AgentId(AgentId)>& label) {
  os << "tick,event,agent_id,ecosystem,detail\n";
  for (const auto& e : log.events) {
    const AgentId id = label && e.agent != 0 ? label(e.agent) : e.agent;
    os << e.tick << ',' << to_string(e.kind) << ',' << id << ',' << to_string(e.ecosystem) << ',' << e.detail
       << '\n';
  }
}

ordered_json summary_json(const RunOutput& out) {
  ordered_json j;
  const auto& s = out.summary;
  j["seed"] = s.seed;
  j["ticks"] = s.ticks;
  j["valid"] = out.valid;
  j["burst_tick"] = s.burst_tick ? ordered_json(*s.burst_tick) : ordered_json(nullptr);
  j["alpha"] = summary_tree(s.alpha);
  j["beta"] = summary_tree(s.beta);
  j["orderings"] = {{"value_beta_gt_alpha", s.beta.value_benefit > s.alpha.value_benefit},
                    {"entropy_beta_ge_alpha", s.beta.entropy >= s.alpha.entropy},
                    {"cost_beta_gt_alpha", s.beta.cum_cost > s.alpha.cum_cost}};
  j["conclusions"] = conclusions_tree(s.conclusions);
  const auto& l = out.ledger;
  j["ledger"] = {{"endowments", l.endowments},
                 {"released_payouts", l.released},
                 {"living_capital", l.living_capital},
                 {"hub_pools", l.hub_pools},
                 {"cum_cost", l.cum_cost},
                 {"writeoffs", l.writeoffs},
                 {"reproduction_transfers", l.reproduction_transfers},
                 {"capital_delta", l.capital_delta},
                 {"capital_balanced", l.capital_balanced},
                 {"generated_chains", l.generated_chains},
                 {"completed_chains", l.completed_chains},
                 {"expired_chains", l.expired_chains},
                 {"live_chains", l.live_chains},
                 {"voided_value", l.voided_value},
                 {"forfeited_value", l.forfeited_value},
                 {"orders_balanced", l.orders_balanced}};
  j["config"] = to_tree(out.config);
  j["config"]["output"].erase("dir");  // where a run is written is not part of the run
  return j;
}

std::vector<fs::path> export_run(const RunOutput& out, const fs::path& dir, const RunHooks& hooks) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  std::vector<fs::path> written;
  auto write = [&](const std::string& name, auto&& body) {
    const fs::path p = dir / name;
    std::ofstream os(p, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + p.string());
    body(os);
    os.flush();
    if (!os) throw std::runtime_error("write failed: " + p.string());
    written.push_back(p);
  };
  write("metrics.csv", [&](std::ostream& os) { write_metrics_csv(os, out.metrics); });
  write("census.csv", [&](std::ostream& os) { write_census_csv(os, out.census); });
  if (out.config.events)
    write("events.csv", [&](std::ostream& os) { write_events_csv(os, out.events, hooks.label); });
  write("summary.json", [&](std::ostream& os) { os << summary_json(out).dump(2) << '\n'; });
  return written;
}

// ---------------------------------------------------------------------------
// sweep

SweepReport sweep(const ScenarioConfig& config, std::span<const std::uint64_t> seeds, unsigned jobs,
                  const std::optional<fs::path>& out_dir) {
  if (seeds.empty()) throw ConfigError("sweep: at least one seed required");
  auto one = [&](std::uint64_t seed) {
    ScenarioConfig c = config;
    c.seed = seed;
    RunOutput out = run(c);
    if (out_dir) export_run(out, *out_dir / ("seed_" + std::to_string(seed)));
    return SeedResult{seed, out.valid, out.summary.alpha, out.summary.beta, out.summary.conclusions};
  };

  SweepReport report;
  report.runs.resize(seeds.size());
  jobs = std::max(1u, jobs);
  for (std::size_t start = 0; start < seeds.size(); start += jobs) {
    std::vector<std::future<SeedResult>> batch;
    const std::size_t end = std::min(seeds.size(), start + jobs);
    for (std::size_t i = start; i < end; ++i)
      batch.push_back(std::async(jobs == 1 ? std::launch::deferred : std::launch::async, one, seeds[i]));
    for (std::size_t i = start; i < end; ++i) report.runs[i] = batch[i - start].get();
  }

  std::size_t opt = 0, mature = 0, emerging = 0, beta_v = 0, alpha_v = 0;
  for (const auto& r : report.runs) {
    if (!r.valid) continue;
    ++report.valid_runs;
    opt += r.conclusions.optimal_entropy;
    mature += r.conclusions.mature_market;
    emerging += r.conclusions.emerging_market;
    beta_v += r.beta.value_benefit > r.alpha.value_benefit;
    alpha_v += r.alpha.value_benefit > r.beta.value_benefit;
  }
  if (report.valid_runs > 0) {
    const double n = static_cast<double>(report.valid_runs);
    report.frac_optimal_entropy = static_cast<double>(opt) / n;
    report.frac_mature_market = static_cast<double>(mature) / n;
    report.frac_emerging_market = static_cast<double>(emerging) / n;
    report.frac_beta_higher_value = static_cast<double>(beta_v) / n;
    report.frac_alpha_higher_value = static_cast<double>(alpha_v) / n;
  }
  return report;
}

ordered_json sweep_json(const SweepReport& report) {
  ordered_json j;
  j["valid_runs"] = report.valid_runs;
  j["fractions"] = {{"optimal_entropy", report.frac_optimal_entropy},
                    {"mature_market", report.frac_mature_market},
                    {"emerging_market", report.frac_emerging_market},
                    {"value_beta_gt_alpha", report.frac_beta_higher_value},
                    {"value_alpha_gt_beta", report.frac_alpha_higher_value}};
  ordered_json runs = ordered_json::array();
  for (const auto& r : report.runs) {
    runs.push_back({{"seed", r.seed},
                    {"valid", r.valid},
                    {"H_alpha", r.alpha.entropy},
                    {"H_beta", r.beta.entropy},
                    {"V_alpha", r.alpha.value_benefit},
                    {"V_beta", r.beta.value_benefit},
                    {"C_alpha", r.alpha.cum_cost},
                    {"C_beta", r.beta.cum_cost},
                    {"n_alpha", r.alpha.n_agents},
                    {"n_beta", r.beta.n_agents},
                    {"conclusions", conclusions_tree(r.conclusions)}});
  }
  j["runs"] = runs;
  return j;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  auto num = [&](std::string_view s) {
    try {
      return parse_uint(s);
    } catch (const std::exception&) {
      throw ConfigError("seeds: bad seed '" + std::string(s) + "'");
    }
  };
  if (auto dots = text.find(".."); dots != std::string::npos) {
    const auto lo = num(std::string_view(text).substr(0, dots));
    const auto hi = num(std::string_view(text).substr(dots + 2));
    if (hi < lo) throw ConfigError("seeds: empty range '" + text + "'");
    for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
  } else {
    for (auto part : split_csv(text)) seeds.push_back(num(part));
  }
  return seeds;
}

// ---------------------------------------------------------------------------
// analyze

std::vector<CensusEntry> read_census_file(std::istream& is) {
  std::vector<CensusEntry> out;
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto f = split_csv(line);
    if (f.size() != 2) throw std::runtime_error("census: expected 'niche,count' in '" + line + "'");
    try {
      out.push_back({std::string(f[0]), parse_uint(f[1])});
    } catch (const std::runtime_error&) {
      if (!first) throw std::runtime_error("census: bad count in '" + line + "'");
    }
    first = false;
  }
  return out;
}

AnalyzeReport analyze(const std::vector<CensusEntry>& census, double k, std::optional<double> niches_control,
                      std::optional<double> niches_random, std::optional<double> total_gain) {
  NicheDistribution dist;
  for (const auto& e : census) dist.counts.push_back(e.count);
  if (dist.total() == 0) throw std::domain_error("census is empty");

  AnalyzeReport r;
  r.nodes = dist.total();
  r.niches = dist.occupied();
  r.entropy = shannon_entropy(dist);
  r.max_entropy = max_entropy(r.niches);
  const double n = static_cast<double>(r.nodes);
  r.optimum = optimal_partition(k, n);
  r.integer_optimum = integer_optimal_niches(k, r.nodes);
  r.cost = operating_cost({k, n, static_cast<double>(r.niches)});
  const double c_at_int = operating_cost({k, n, static_cast<double>(r.integer_optimum)}).total;
  if (std::abs(r.cost.total - c_at_int) <= 1e-9)
    r.position = "at optimum";
  else
    r.position = static_cast<double>(r.niches) < r.optimum.niches ? "below optimum" : "above optimum";
  if (total_gain) {
    r.total_gain = total_gain;
    r.benefit = value_benefit(*total_gain, r.cost.total);
    r.max_benefit = value_benefit(*total_gain, r.optimum.min_cost);
  }
  if (niches_control && niches_random) r.dividing_point = demand_dividing_point(n, *niches_control, *niches_random);
  return r;
}

void print_report(std::ostream& os, const AnalyzeReport& r) {
  os << "nodes: " << r.nodes << '\n'
     << "niches: " << r.niches << '\n'
     << "entropy_bits: " << fmt_double(r.entropy) << '\n'
     << "max_entropy_bits: " << fmt_double(r.max_entropy) << '\n'
     << "optimal_niches: " << fmt_double(r.optimum.niches) << '\n'
     << "optimal_niches_integer: " << r.integer_optimum << '\n'
     << "optimal_entropy_bits: " << fmt_double(r.optimum.entropy) << '\n'
     << "management_cost: " << fmt_double(r.cost.management) << '\n'
     << "matching_cost: " << fmt_double(r.cost.matching) << '\n'
     << "operating_cost: " << fmt_double(r.cost.total) << '\n'
     << "min_cost: " << fmt_double(r.optimum.min_cost) << '\n'
     << "position: " << r.position << '\n';
  if (r.benefit) {
    os << "value_benefit: " << fmt_double(*r.benefit) << '\n'
       << "max_value_benefit: " << fmt_double(*r.max_benefit) << '\n';
  }
  if (r.dividing_point) os << "dividing_point: " << fmt_double(*r.dividing_point) << '\n';
}

}  // namespace ecoval
