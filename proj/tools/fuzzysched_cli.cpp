// Command-line front end: schedule, validate, oracle, gen.
//
// Exit codes: 0 success, 1 validation failure, 2 stall, 3 I/O, schema or
// usage error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "fuzzysched/allocate.hpp"
#include "fuzzysched/baseline.hpp"
#include "fuzzysched/errors.hpp"
#include "fuzzysched/generate.hpp"
#include "fuzzysched/model.hpp"
#include "fuzzysched/rating.hpp"
#include "fuzzysched/report.hpp"
#include "fuzzysched/retrograde.hpp"

namespace fs = std::filesystem;
using namespace fsched;

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kStall = 2;
constexpr int kIoError = 3;

struct Overrides {
  std::optional<double> horizon;
  std::optional<double> step;
  std::optional<double> epsilon;
  std::optional<int> max_iters;
  std::optional<std::uint64_t> seed;

  Instance apply(const Instance& instance) const {
    Config c = instance.config();
    if (horizon) c.horizon = *horizon;
    if (step) c.step = *step;
    if (epsilon) c.significance_epsilon = *epsilon;
    if (max_iters) c.max_fixpoint_iters = *max_iters;
    if (seed) c.seed = *seed;
    return instance.with_config(c);
  }
};

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw SchemaError(path.string(), "", std::nullopt, "cannot write file");
  f << content;
  if (!f) throw SchemaError(path.string(), "", std::nullopt, "write failed");
}

bool report_violations(const Instance& instance) {
  const auto violations = validate(instance);
  for (const Violation& v : violations) {
    std::cerr << v.entity << ": " << v.rule << ": " << v.message << '\n';
  }
  return violations.empty();
}

RatingModel load_model(const std::string& rules) {
  return rules.empty() ? default_rating_model() : read_rating_model_file(rules);
}

int cmd_schedule(const std::string& instance_path, const std::string& rules, const std::string& out_dir,
                 const Overrides& overrides, bool verbose, const std::string& gantt) {
  const Instance instance = overrides.apply(read_instance_file(instance_path));
  if (!report_violations(instance)) return kInvalid;
  const RatingModel model = load_model(rules);

  Schedule schedule;
  try {
    schedule = run(instance, model);
  } catch (const StallError& e) {
    std::cerr << "stall: " << e.what() << '\n';
    return kStall;
  }

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw SchemaError(out_dir, "", std::nullopt, "cannot create output directory: " + ec.message());

  json doc = schedule_to_json(schedule);
  if (verbose) {
    doc["arrangement"] = arrangement_to_json(backward_pass(instance));
  } else {
    doc.erase("iteration_log");
  }
  write_file(fs::path(out_dir) / "schedule.json", doc.dump(2) + "\n");

  json metrics = metrics_to_json(instance, schedule);
  metrics["seed"] = instance.config().seed;
  write_file(fs::path(out_dir) / "metrics.json", metrics.dump(2) + "\n");

  if (gantt == "svg") {
    write_file(fs::path(out_dir) / "gantt.svg", gantt_svg(instance, schedule));
  } else if (gantt == "txt") {
    write_file(fs::path(out_dir) / "gantt.txt", gantt_text(instance, schedule));
  }
  std::cout << "scheduled " << schedule.allocations().size() << " activities in "
            << schedule.iteration_log().size() << " iterations; makespan " << schedule.makespan() << '\n';
  return kOk;
}

int cmd_validate(const std::string& instance_path) {
  const Instance instance = read_instance_file(instance_path);
  if (!report_violations(instance)) return kInvalid;
  std::cout << instance_path << ": ok\n";
  return kOk;
}

int cmd_oracle(const std::string& instance_path, const std::string& rules) {
  const Instance instance = read_instance_file(instance_path);
  if (!report_violations(instance)) return kInvalid;
  if (!is_crisp(instance)) {
    std::cerr << instance_path << ": oracles need a crisp instance\n";
    return kInvalid;
  }

  json out;
  out["cpm_backward"] = cpm_backward(instance);
  double optimum = -1.0;
  try {
    const OracleSchedule best = brute_force(instance);
    out["brute_force"] = oracle_to_json(best);
    optimum = best.makespan;
  } catch (const LimitError& e) {
    out["brute_force"] = {{"skipped", e.what()}};
  }
  try {
    const EddResult edd = edd_single_machine(instance);
    out["edd"] = {{"job_order", edd.job_order}, {"max_lateness", edd.max_lateness}};
  } catch (const std::domain_error&) {
    out["edd"] = nullptr;
  }

  try {
    const Schedule schedule = run(instance, load_model(rules));
    out["heuristic"] = metrics_to_json(instance, schedule);
    if (optimum > 0.0) out["makespan_ratio"] = schedule.makespan() / optimum;
  } catch (const StallError& e) {
    std::cerr << "stall: " << e.what() << '\n';
    return kStall;
  }
  std::cout << out.dump(2) << '\n';
  return kOk;
}

int cmd_gen(const GenOptions& options, const std::string& out) {
  const std::string text = instance_to_json(generate_instance(options)).dump(2) + "\n";
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    write_file(out, text);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fuzzy rolling-horizon job-shop scheduler"};
  app.require_subcommand(1);

  std::string instance_path;
  std::string rules;
  std::string out_dir = "out";
  Overrides overrides;
  bool verbose = false;
  std::string gantt = "svg";

  auto* schedule = app.add_subcommand("schedule", "run the scheduler and write schedule.json, metrics.json, gantt");
  schedule->add_option("--instance", instance_path, "instance JSON")->required();
  schedule->add_option("--rules", rules, "rule-base JSON (default: shipped rule base)");
  schedule->add_option("--out", out_dir, "output directory");
  schedule->add_option("--horizon", overrides.horizon, "selection window length");
  schedule->add_option("--step", overrides.step, "window advance per iteration");
  schedule->add_option("--epsilon", overrides.epsilon, "significance epsilon of the recommendation fixpoint");
  schedule->add_option("--max-iters", overrides.max_iters, "fixpoint iteration cap");
  schedule->add_option("--seed", overrides.seed, "seed recorded with the run");
  schedule->add_flag("--verbose", verbose, "include the iteration log and arrangement in schedule.json");
  schedule->add_option("--gantt", gantt, "gantt output")->check(CLI::IsMember({"svg", "txt", "none"}));

  auto* validate_cmd = app.add_subcommand("validate", "check an instance against the model invariants");
  validate_cmd->add_option("--instance", instance_path, "instance JSON")->required();

  auto* oracle = app.add_subcommand("oracle", "run the exact baselines on a crisp instance");
  oracle->add_option("--instance", instance_path, "instance JSON")->required();
  oracle->add_option("--rules", rules, "rule-base JSON for the heuristic comparison");

  GenOptions gen;
  std::string gen_out;
  auto* gen_cmd = app.add_subcommand("gen", "generate a random instance");
  gen_cmd->add_option("--jobs", gen.jobs, "number of jobs")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--activities", gen.activities_per_job, "activities per job")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--resources", gen.resources, "number of resources")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", gen.seed, "random seed");
  gen_cmd->add_option("--spread", gen.spread, "relative fuzziness spread (0 = crisp)")->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--fuzzy-fraction", gen.fuzzy_fraction, "share of fuzzy quantities")
      ->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_option("--max-capable", gen.max_capable, "largest capability set")->check(CLI::PositiveNumber);
  gen_cmd->add_flag("--vary", gen.vary_activities, "draw 1..activities per job");
  gen_cmd->add_option("--out", gen_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kIoError;
  }

  try {
    if (*schedule) return cmd_schedule(instance_path, rules, out_dir, overrides, verbose, gantt);
    if (*validate_cmd) return cmd_validate(instance_path);
    if (*oracle) return cmd_oracle(instance_path, rules);
    if (*gen_cmd) return cmd_gen(gen, gen_out);
  } catch (const SchemaError& e) {
    std::cerr << e.what() << '\n';
    return kIoError;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kIoError;
  }
  return kIoError;
}
