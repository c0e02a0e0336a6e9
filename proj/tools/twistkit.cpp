// twistkit: symbolic and lattice checks of twisted Poisson (WZW-Poisson)
// structures.
//
// Exit codes: 0 condition holds / test passes, 1 condition fails,
// 2 input or environment error.

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "twistkit/spec_io.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kInputError = 2;

struct RunConfig {
  std::string format = "text";
  std::string spec_path;
  std::vector<std::size_t> sites;
  std::size_t flow_sites = 32;
  double dt = 1e-3;
  std::size_t steps = 100;
  std::uint64_t seed = 1;
  double lambda_scale = 1.0;
};

int run_check(const RunConfig& cfg, twistkit::OutputFormat format) {
  const auto spec = twistkit::load_spec(cfg.spec_path);
  const auto report = twistkit::check(spec);
  std::cout << twistkit::render_report(spec, report, format);
  return report.is_twisted_poisson ? kPass : kFail;
}

int run_structure(const RunConfig& cfg, twistkit::OutputFormat format) {
  const auto spec = twistkit::load_spec(cfg.spec_path);
  const auto h = twistkit::effective_h(spec);
  std::cout << twistkit::render_structure(spec, twistkit::structure_functions(spec.pi, h), format);
  return kPass;
}

int run_lattice(const RunConfig& cfg, twistkit::OutputFormat format) {
  for (auto n : cfg.sites)
    if (n < twistkit::kMinSites || n % 2 != 0)
      throw twistkit::Error(twistkit::ErrorKind::BadSiteCount, "site counts must be even and at least 4");
  const auto spec = twistkit::load_spec(cfg.spec_path);
  const auto study = twistkit::closure_study(spec, cfg.sites, cfg.seed);
  std::cout << twistkit::render_closure(study, format);
  return study.passed() ? kPass : kFail;
}

int run_flow(const RunConfig& cfg, twistkit::OutputFormat format) {
  if (cfg.flow_sites < twistkit::kMinSites || cfg.flow_sites % 2 != 0)
    throw twistkit::Error(twistkit::ErrorKind::BadSiteCount, "site count must be even and at least 4");
  if (!(cfg.dt > 0.0)) throw twistkit::Error(twistkit::ErrorKind::SchemaError, "--dt must be positive");
  const auto spec = twistkit::load_spec(cfg.spec_path);
  const auto result = twistkit::flow_study(spec, cfg.flow_sites, cfg.dt, cfg.steps, cfg.seed, cfg.lambda_scale);
  std::cout << twistkit::render_flow(result, format);
  return result.within_envelope() ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  if (const char* env = std::getenv("TWISTKIT_FORMAT"); env != nullptr && *env != '\0') cfg.format = env;

  CLI::App app{"Symbolic and lattice checks of twisted Poisson structures"};
  app.require_subcommand(1);
  app.add_option("--format", cfg.format, "Output format: text, json or csv (default: $TWISTKIT_FORMAT or text)")
      ->check(CLI::IsMember({"text", "json", "csv"}));

  auto* check = app.add_subcommand("check", "Closedness, Jacobi identity and twisted condition verdicts");
  check->add_option("spec", cfg.spec_path, "Spec file (JSON)")->required();

  auto* structure = app.add_subcommand("structure", "Structure functions of the constraint algebra");
  structure->add_option("spec", cfg.spec_path, "Spec file (JSON)")->required();

  auto* lattice = app.add_subcommand("lattice", "Lattice first-class closure convergence table");
  lattice->add_option("spec", cfg.spec_path, "Spec file (JSON)")->required();
  cfg.sites = {16, 32, 64};
  lattice->add_option("--sites", cfg.sites, "Comma-separated site counts")->delimiter(',');
  lattice->add_option("--seed", cfg.seed, "Seed for loops and test functions");

  auto* flow = app.add_subcommand("flow", "RK4 gauge flow and constraint drift");
  flow->add_option("spec", cfg.spec_path, "Spec file (JSON)")->required();
  flow->add_option("--sites", cfg.flow_sites, "Number of loop sites");
  flow->add_option("--dt", cfg.dt, "Time step");
  flow->add_option("--steps", cfg.steps, "Number of RK4 steps");
  flow->add_option("--seed", cfg.seed, "Seed for the loop and multiplier");
  flow->add_option("--lambda-scale", cfg.lambda_scale, "Scale applied to the Lagrange multiplier (0 freezes the flow)");

  // options may appear before or after the subcommand
  for (auto* sub : {check, structure, lattice, flow}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kInputError;
  }

  try {
    if (cfg.format != "text" && cfg.format != "json" && cfg.format != "csv")
      throw twistkit::Error(twistkit::ErrorKind::SchemaError, "TWISTKIT_FORMAT must be text, json or csv");
    const auto format = twistkit::parse_format(cfg.format);
    if (check->parsed()) return run_check(cfg, format);
    if (structure->parsed()) return run_structure(cfg, format);
    if (lattice->parsed()) return run_lattice(cfg, format);
    return run_flow(cfg, format);
  } catch (const twistkit::Error& e) {
    std::cerr << "twistkit: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "twistkit: " << e.what() << "\n";
    return kInputError;
  }
}
