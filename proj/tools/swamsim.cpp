#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "swamsim/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"swamsim - mobile memory-management policy simulator"};
  app.require_subcommand(1);

  std::string scenario, out_dir = "out", policies_csv, profile = "low-end",
              init_out = "scenario.json", trace_out, trace_in;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string policy_name;

  auto* run = app.add_subcommand("run", "Simulate one policy on a scenario");
  run->add_option("--scenario", scenario, "Scenario file (JSON)")->required();
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--seed", seed, "Override the scenario seed")
      ->each([&](const std::string&) { seed_set = true; });
  run->add_option("--policy", policy_name, "Override the scenario policy");
  run->add_option("--trace-out", trace_out, "Export the generated event trace");
  run->add_option("--trace-in", trace_in, "Replay a previously exported trace");

  auto* compare = app.add_subcommand("compare", "Run several policies on one trace");
  compare->add_option("--scenario", scenario, "Scenario file (JSON)")->required();
  compare->add_option("--policies", policies_csv, "Comma-separated policy list")
      ->required();
  compare->add_option("--out", out_dir, "Output directory");
  compare->add_option("--seed", seed, "Override the scenario seed")
      ->each([&](const std::string&) { seed_set = true; });

  auto* validate = app.add_subcommand("validate", "Check a scenario file");
  validate->add_option("--scenario", scenario, "Scenario file (JSON)")->required();

  auto* init = app.add_subcommand("init", "Write a built-in reference scenario");
  init->add_option("--profile", profile, "low-end or high-end");
  init->add_option("--seed", seed, "Scenario seed")
      ->each([&](const std::string&) { seed_set = true; });
  init->add_option("--out", init_out, "Output scenario path");

  CLI11_PARSE(app, argc, argv);

  std::optional<std::uint64_t> seed_override;
  if (seed_set) seed_override = seed;

  if (run->parsed()) {
    std::optional<swamsim::Policy> policy_override;
    if (!policy_name.empty()) {
      swamsim::Policy p;
      if (!swamsim::parse_policy(policy_name, p)) {
        std::cerr << "swamsim: unknown policy: " << policy_name << "\n";
        return 1;
      }
      policy_override = p;
    }
    return swamsim::cmd_run(scenario, out_dir, seed_override, policy_override,
                            trace_out, trace_in);
  }
  if (compare->parsed()) {
    std::vector<std::string> policies;
    std::size_t pos = 0;
    while (pos <= policies_csv.size()) {
      std::size_t comma = policies_csv.find(',', pos);
      if (comma == std::string::npos) comma = policies_csv.size();
      if (comma > pos) policies.push_back(policies_csv.substr(pos, comma - pos));
      pos = comma + 1;
    }
    return swamsim::cmd_compare(scenario, policies, out_dir, seed_override);
  }
  if (validate->parsed()) return swamsim::cmd_validate(scenario);
  if (init->parsed()) return swamsim::cmd_init(profile, seed_set ? seed : 42, init_out);
  return 1;
}
