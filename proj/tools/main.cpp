// coreflow: exact solvers for two-stage and multistage assignment-game core
// tracking, plus the counting/SAA tooling around them. JSON reports go to
// stdout, human summaries to stderr. Exit codes: 0 success, 2 invalid input,
// 1 internal assertion failure (a bug, never expected).

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "coreflow/errors.hpp"
#include "coreflow/instance.hpp"
#include "coreflow/report.hpp"
#include "coreflow/saa.hpp"
#include "coreflow/solver.hpp"

namespace {

using namespace coreflow;
namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInvalid = 2;

struct Cli {
  std::string in_path;
  std::string out_path;
  std::string alloc_path;
  std::string dump_network;
  std::string mode_flag;
  bool force = false;
  std::uint64_t seed = 0;
  long long samples = 0;
  std::string accuracy;
  std::string confidence;
  int jobs = 1;
  int left = 3;
  int right = 3;
  std::string density = "1/2";
  int scenario_count = 2;
};

void emit(const std::string& report, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << report;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw ParseError("cannot write " + out_path);
  out << report;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// --mode only overrides the file's mode together with --force; silently
// changing objective semantics is worse than an error.
template <typename Inst>
void apply_mode_override(Inst& inst, const Cli& cli) {
  if (cli.mode_flag.empty()) return;
  const DiffMode wanted = mode_of_string(cli.mode_flag);
  if (wanted == inst.mode) return;
  if (!cli.force) {
    throw ParseError("--mode disagrees with the instance file; pass --force to override");
  }
  inst.mode = wanted;
}

void report_validation_failure(const std::vector<std::string>& violations) {
  json root;
  root["violations"] = violations;
  std::cout << root.dump(2) << "\n";
  for (const auto& v : violations) std::cerr << "invalid: " << v << "\n";
}

std::vector<fs::path> instance_files(const std::string& path) {
  std::vector<fs::path> files;
  if (fs::is_directory(path)) {
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw ParseError("no .json instances under " + path);
  } else {
    files.emplace_back(path);
  }
  return files;
}

std::string solve_one(const fs::path& file, const Cli& cli, bool oracle) {
  InstanceFile parsed = load_instance_file(file.string());
  std::string dot;
  std::string report;
  if (auto* two = std::get_if<TwoStageInstance>(&parsed)) {
    apply_mode_override(*two, cli);
    const SolveResult result =
        oracle ? brute_force_two_stage(*two)
               : solve_two_stage(*two, cli.dump_network.empty() ? nullptr : &dot);
    report = solve_report_json(result, "two-stage");
    std::cerr << file.filename().string() << ": " << solve_summary(result) << "\n";
  } else {
    auto& multi = std::get<MultistageInstance>(parsed);
    apply_mode_override(multi, cli);
    const SolveResult result =
        oracle ? brute_force_multistage(multi)
               : solve_multistage(multi, cli.dump_network.empty() ? nullptr : &dot);
    report = solve_report_json(result, "multistage");
    std::cerr << file.filename().string() << ": " << solve_summary(result) << "\n";
  }
  if (!cli.dump_network.empty() && !dot.empty()) {
    std::ofstream out(cli.dump_network);
    if (!out) throw ParseError("cannot write " + cli.dump_network);
    out << dot;
  }
  return report;
}

// Directory inputs run every instance, optionally on --jobs workers; the
// aggregate report preserves the sorted file order.
int run_solve_like(const Cli& cli, bool oracle) {
  const std::vector<fs::path> files = instance_files(cli.in_path);
  if (!fs::is_directory(cli.in_path)) {
    emit(solve_one(files[0], cli, oracle), cli.out_path);
    return kExitOk;
  }

  std::vector<std::string> reports(files.size());
  std::vector<std::string> errors(files.size());
  std::atomic<std::size_t> next{0};
  const int workers = std::max(1, std::min<int>(cli.jobs, static_cast<int>(files.size())));
  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < files.size(); i = next.fetch_add(1)) {
      try {
        reports[i] = solve_one(files[i], cli, oracle);
      } catch (const std::exception& ex) {
        errors[i] = ex.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  json root = json::array();
  bool failed = false;
  for (std::size_t i = 0; i < files.size(); ++i) {
    json entry;
    entry["file"] = files[i].filename().string();
    if (errors[i].empty()) {
      entry["report"] = json::parse(reports[i]);
    } else {
      entry["error"] = errors[i];
      failed = true;
    }
    root.push_back(std::move(entry));
  }
  emit(root.dump(2) + "\n", cli.out_path);
  return failed ? kExitInvalid : kExitOk;
}

int run_mvc(const Cli& cli) {
  InstanceFile parsed = load_instance_file(cli.in_path);
  auto* multi = std::get_if<MultistageInstance>(&parsed);
  if (!multi) throw ParseError("mvc expects a multistage instance file");
  const MvcResult result = solve_mvc(multi->stages);
  emit(mvc_report_json(result), cli.out_path);
  std::cerr << "mvc cost " << result.cost << " over " << result.covers.size() << " stages\n";
  return kExitOk;
}

int run_saa(const Cli& cli) {
  const SimpleGraph base = parse_edge_list(slurp(cli.in_path));
  const HardnessInstance hardness = build_hardness_instance(base);

  SaaConfig cfg;
  if (cli.samples > 0) cfg.samples = cli.samples;
  if (!cli.accuracy.empty()) cfg.accuracy = rat_of_string(cli.accuracy);
  if (!cli.confidence.empty()) cfg.confidence = rat_of_string(cli.confidence);

  const auto sampler = hardness.sampler();
  const SaaResult result = saa_solve(hardness.stage0, hardness.lambda, *sampler, cfg, cli.seed);

  std::optional<Rational> exact;
  if (base.vertex_count() <= 20) {
    exact = exact_expected_value(result.y_hat, hardness);
  }
  emit(saa_report_json(result, exact), cli.out_path);
  std::cerr << "saa: N=" << result.samples << " empirical "
            << rat_to_string(result.empirical_objective);
  if (exact) std::cerr << " exact " << rat_to_string(*exact);
  std::cerr << "\n";
  return kExitOk;
}

int run_eval(const Cli& cli) {
  InstanceFile parsed = load_instance_file(cli.in_path);
  auto* two = std::get_if<TwoStageInstance>(&parsed);
  if (!two) throw ParseError("eval expects a two-stage instance file");
  apply_mode_override(*two, cli);

  json alloc_json;
  try {
    alloc_json = json::parse(slurp(cli.alloc_path));
  } catch (const json::parse_error& ex) {
    throw ParseError(std::string("allocation file: ") + ex.what());
  }
  if (!alloc_json.is_object()) throw ParseError("allocation file: expected an object");
  Allocation y;
  for (const auto& [name, value] : alloc_json.items()) {
    if (!value.is_string()) throw ParseError("allocation file: values must be fraction strings");
    y.values[name] = rat_of_string(value.get<std::string>());
  }

  const Rational value = evaluate_first_stage(y, *two);
  emit(eval_report_json(value), cli.out_path);
  std::cerr << "value " << rat_to_string(value) << "\n";
  return kExitOk;
}

int run_gen(const Cli& cli) {
  GenParams params;
  params.left_count = cli.left;
  params.right_count = cli.right;
  params.density = rat_of_string(cli.density);
  params.scenario_count = cli.scenario_count;
  if (!cli.mode_flag.empty()) params.mode = mode_of_string(cli.mode_flag);
  const TwoStageInstance inst = gen_random(params, cli.seed);
  if (cli.out_path.empty()) throw ParseError("gen requires --out");
  emit(instance_to_json(inst, cli.seed), cli.out_path);
  json root;
  root["path"] = cli.out_path;
  root["seed"] = cli.seed;
  root["scenarios"] = inst.scenarios.size();
  root["vertices"] = inst.stage0.vertex_count();
  std::cout << root.dump(2) << "\n";
  std::cerr << "wrote " << cli.out_path << "\n";
  return kExitOk;
}

int run_hardness(const Cli& cli) {
  const SimpleGraph base = parse_edge_list(slurp(cli.in_path));
  const HardnessInstance hardness = build_hardness_instance(base);
  if (cli.out_path.empty()) throw ParseError("hardness requires --out");
  const TwoStageInstance inst = explicit_hardness_instance(hardness);
  require_valid(inst);
  emit(instance_to_json(inst), cli.out_path);
  json root;
  root["path"] = cli.out_path;
  root["base_vertices"] = base.vertex_count();
  root["first_stage_vertices"] = hardness.stage0.vertex_count();
  root["scenarios"] = inst.scenarios.size();
  std::cout << root.dump(2) << "\n";
  std::cerr << "wrote " << cli.out_path << "\n";
  return kExitOk;
}

int run_count_vc(const Cli& cli) {
  const SimpleGraph g = parse_edge_list(slurp(cli.in_path));
  const unsigned long long count = count_vertex_covers(g);
  json root;
  root["count"] = count;
  emit(root.dump(2) + "\n", cli.out_path);
  std::cerr << "vertex covers: " << count << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact two-stage / multistage assignment-game core solver"};
  app.require_subcommand(1);

  Cli cli;
  auto add_common = [&](CLI::App* cmd, bool needs_in) {
    auto* in = cmd->add_option("--in", cli.in_path, "input file");
    if (needs_in) in->required();
    cmd->add_option("--out", cli.out_path, "write the report/instance here instead of stdout");
    return cmd;
  };

  auto* solve = add_common(app.add_subcommand("solve", "solve a two-stage instance"), true);
  auto* multistage =
      add_common(app.add_subcommand("multistage", "solve a multistage instance"), true);
  auto* mvc = add_common(
      app.add_subcommand("mvc", "multistage vertex cover over same-bipartition stages"), true);
  auto* saa = add_common(
      app.add_subcommand("saa", "sample-average approximation on a sampled distribution"), true);
  auto* eval = add_common(
      app.add_subcommand("eval", "expected cost of a given first-stage core element"), true);
  auto* oracle = add_common(app.add_subcommand("oracle", "brute-force reference solve"), true);
  auto* gen = add_common(app.add_subcommand("gen", "generate a random instance"), false);
  auto* hardness = add_common(
      app.add_subcommand("hardness", "explicit counting-reduction instance from a base graph"),
      true);
  auto* count_vc =
      add_common(app.add_subcommand("count-vc", "count vertex covers of a plain graph"), true);

  for (CLI::App* cmd : {solve, multistage, oracle, eval}) {
    cmd->add_option("--mode", cli.mode_flag, "abs|pos|neg (overrides the file only with --force)");
    cmd->add_flag("--force", cli.force, "allow --mode to override the file's mode");
  }
  for (CLI::App* cmd : {solve, multistage}) {
    cmd->add_option("--dump-network", cli.dump_network, "write the auxiliary network as DOT");
  }
  for (CLI::App* cmd : {solve, oracle}) {
    cmd->add_option("--jobs", cli.jobs, "parallel workers for directory inputs");
  }
  eval->add_option("--alloc", cli.alloc_path, "allocation JSON (name -> fraction string)")
      ->required();
  saa->add_option("--seed", cli.seed, "RNG seed");
  saa->add_option("--samples", cli.samples, "explicit sample count N");
  saa->add_option("--accuracy", cli.accuracy, "accuracy (fraction string)");
  saa->add_option("--confidence", cli.confidence, "confidence level (fraction string)");
  saa->add_option("--jobs", cli.jobs, "parallel workers");
  gen->add_option("--seed", cli.seed, "RNG seed");
  gen->add_option("--left", cli.left, "first-stage Left vertex count");
  gen->add_option("--right", cli.right, "first-stage Right vertex count");
  gen->add_option("--density", cli.density, "edge density (fraction string in [0,1])");
  gen->add_option("--scenarios", cli.scenario_count, "scenario count");
  gen->add_option("--mode", cli.mode_flag, "abs|pos|neg");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (solve->parsed()) return run_solve_like(cli, false);
    if (oracle->parsed()) return run_solve_like(cli, true);
    if (multistage->parsed()) return run_solve_like(cli, false);
    if (mvc->parsed()) return run_mvc(cli);
    if (saa->parsed()) return run_saa(cli);
    if (eval->parsed()) return run_eval(cli);
    if (gen->parsed()) return run_gen(cli);
    if (hardness->parsed()) return run_hardness(cli);
    if (count_vc->parsed()) return run_count_vc(cli);
    std::cerr << "no subcommand\n";
    return kExitInvalid;
  } catch (const ValidationError& ex) {
    report_validation_failure(ex.violations);
    return kExitInvalid;
  } catch (const InternalError& ex) {
    std::cerr << "internal error: " << ex.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitInvalid;
  }
}
