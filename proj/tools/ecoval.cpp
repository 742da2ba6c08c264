// ecoval: run, sweep and analyze the value-entropy ecosystem model.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "ecoval/scenario.hpp"

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kConfigError = 2, kAuditError = 3 };

// ECOVAL_LOG=quiet|info|debug
int log_level() {
  const char* v = std::getenv("ECOVAL_LOG");
  if (v == nullptr) return 1;
  const std::string s(v);
  if (s == "quiet") return 0;
  if (s == "debug") return 2;
  return 1;
}

void info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "[ecoval] " << msg << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two competing service ecosystems on a value-entropy model"};
  app.require_subcommand(1);

  std::string preset = "case1";
  std::optional<std::string> config_file;
  std::optional<std::uint64_t> seed;
  std::optional<int> ticks;
  std::string out_dir;
  std::optional<std::string> niche;
  bool events = false;

  auto* run_cmd = app.add_subcommand("run", "Simulate one seed and export metrics.csv, census.csv, summary.json");
  run_cmd->add_option("--preset", preset, "case1 (stable demand) or case2 (emerging-region burst)")
      ->check(CLI::IsMember({"case1", "case2"}));
  run_cmd->add_option("--config", config_file, "JSON overrides merged over the preset")->check(CLI::ExistingFile);
  run_cmd->add_option("--seed", seed, "RNG seed");
  run_cmd->add_option("--ticks", ticks, "Number of ticks");
  run_cmd->add_option("--out", out_dir, "Output directory")->required();
  run_cmd->add_option("--niche", niche, "Niche classifier")->check(CLI::IsMember({"attribute", "efficiency"}));
  run_cmd->add_flag("--events", events, "Also write events.csv");

  std::string seeds_text = "1..10";
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  auto* sweep_cmd = app.add_subcommand("sweep", "Run many seeds and report how often each conclusion holds");
  sweep_cmd->add_option("--preset", preset, "case1 or case2")->check(CLI::IsMember({"case1", "case2"}));
  sweep_cmd->add_option("--config", config_file, "JSON overrides merged over the preset")->check(CLI::ExistingFile);
  sweep_cmd->add_option("--seeds", seeds_text, "Seed range a..b or list a,b,c");
  sweep_cmd->add_option("--ticks", ticks, "Number of ticks");
  sweep_cmd->add_option("--niche", niche, "Niche classifier")->check(CLI::IsMember({"attribute", "efficiency"}));
  sweep_cmd->add_option("--jobs", jobs, "Concurrent runs");
  sweep_cmd->add_option("--out", out_dir, "Output directory")->required();

  std::string census_file;
  double k = 1.0;
  std::optional<double> m_a, m_b, gain;
  auto* analyze_cmd = app.add_subcommand("analyze", "Analytic entropy/cost report for a niche census");
  analyze_cmd->add_option("--census", census_file, "CSV of niche,count")->required()->check(CLI::ExistingFile);
  analyze_cmd->add_option("--k", k, "Cost coefficient per unit time")->required();
  analyze_cmd->add_option("--ma", m_a, "Niche count under control-dominated mode");
  analyze_cmd->add_option("--mb", m_b, "Niche count under random-dominated mode");
  analyze_cmd->add_option("--gain", gain, "Total value gained, for the value benefit");

  CLI11_PARSE(app, argc, argv);

  auto load = [&]() {
    ecoval::ScenarioConfig cfg =
        ecoval::load_scenario(preset, config_file ? std::optional<std::filesystem::path>(*config_file) : std::nullopt);
    if (seed) cfg.seed = *seed;
    if (ticks) cfg.ticks = *ticks;
    if (niche) cfg.niche_mode = *niche == "attribute" ? ecoval::NicheMode::attribute : ecoval::NicheMode::efficiency;
    if (events) cfg.events = true;
    cfg.out_dir = out_dir;
    cfg.validate();
    return cfg;
  };

  try {
    if (*run_cmd) {
      const auto cfg = load();
      info("running " + cfg.preset + " seed " + std::to_string(cfg.seed) + " for " + std::to_string(cfg.ticks) +
           " ticks");
      const auto out = ecoval::run(cfg);
      for (const auto& p : ecoval::export_run(out, out_dir)) info("wrote " + p.string());
      if (!out.valid) {
        std::cerr << "ledger audit failed: " << out.ledger.describe() << '\n';
        return kAuditError;
      }
      return kOk;
    }
    if (*sweep_cmd) {
      const auto cfg = load();
      const auto seeds = ecoval::parse_seed_list(seeds_text);
      info("sweeping " + std::to_string(seeds.size()) + " seeds of " + cfg.preset);
      const auto report = ecoval::sweep(cfg, seeds, jobs, std::filesystem::path(out_dir));
      const auto j = ecoval::sweep_json(report);
      std::ofstream(std::filesystem::path(out_dir) / "sweep.json") << j.dump(2) << '\n';
      std::cout << j["fractions"].dump(2) << '\n';
      return report.valid_runs == report.runs.size() ? kOk : kAuditError;
    }
    if (*analyze_cmd) {
      std::ifstream in(census_file);
      const auto census = ecoval::read_census_file(in);
      ecoval::print_report(std::cout, ecoval::analyze(census, k, m_a, m_b, gain));
      return kOk;
    }
  } catch (const ecoval::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}
