// Command-line front end: graph generation, reference discovery, probability
// evaluation, PMF assembly and oracle runs.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rsr/io.hpp"
#include "rsr/oracle.hpp"
#include "rsr/sysfn.hpp"
#include "rsr/workflow.hpp"

namespace {

using rsr::io::json;

enum ExitCode { kOk = 0, kUsage = 2, kInput = 3, kRuntime = 4 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  // gen-graph
  int n_nodes = 0;
  double radius = 0.0;
  int max_attempts = 20;
  // shared
  std::string model_path;
  std::vector<std::string> refs_paths;
  std::string out;
  std::string out_trace;
  std::optional<int> threshold;
  bool force = false;
  bool no_boundary_search = false;
  std::string mode = "exact";
  rsr::RunConfig config;
};

json manifest(const std::string& command, const Options& o, const std::string& model_hash) {
  json m = {{"command", command},
            {"tool_version", rsr::io::kToolVersion},
            {"created_at", rsr::io::utc_now()}};
  if (!o.model_path.empty()) m["model"] = o.model_path;
  if (!o.refs_paths.empty()) m["refs"] = o.refs_paths;
  if (!model_hash.empty()) m["model_hash"] = model_hash;
  if (command != "gen-graph") m["config"] = rsr::io::run_config_to_json(o.config);
  return m;
}

void emit(const std::string& path, const json& doc) {
  const std::string text = rsr::io::dump(doc);
  if (path.empty() || path == "-")
    std::cout << text;
  else
    rsr::io::write_file_atomic(path, text);
}

int require_threshold(const Options& o, const rsr::SystemModel& m) {
  const int t = o.threshold.value_or(0);
  if (t < 0 || t > m.n_system_states() - 2)
    throw UsageError("--threshold must lie in [0, " + std::to_string(m.n_system_states() - 2) + "]");
  return t;
}

int cmd_gen_graph(const Options& o) {
  auto g = rsr::random_geometric_graph(o.n_nodes, o.radius, o.config.seed, o.max_attempts);
  json doc = rsr::io::graph_to_json(g);
  doc["format"] = rsr::io::kFormat;
  json m = manifest("gen-graph", o, "");
  m["flags"] = {{"n_nodes", o.n_nodes}, {"radius", o.radius}, {"seed", o.config.seed},
                {"max_attempts", o.max_attempts}};
  doc["manifest"] = m;
  emit(o.out, doc);
  return kOk;
}

int cmd_find_refs(const Options& o) {
  auto loaded = rsr::io::load_model_file(o.model_path);
  const int t = require_threshold(o, loaded.model);
  rsr::RunConfig config = o.config;
  config.boundary_search = !o.no_boundary_search;
  const auto s1 = rsr::stage1_find_references(loaded.model, loaded.distribution, config, t);

  Options with_config = o;
  with_config.config = config;
  json provenance = {{"seed", config.seed},
                     {"threshold", t},
                     {"iterations", s1.iterations},
                     {"converged", s1.converged},
                     {"redundant", s1.redundant},
                     {"phi_evaluations", s1.trace.empty() ? 0 : s1.trace.back().phi_evaluations},
                     {"final_p_unclassified", s1.trace.empty() ? 1.0 : s1.trace.back().p_unclassified},
                     {"manifest", manifest("find-refs", with_config, loaded.hash)}};
  const json doc = rsr::io::reference_file_to_json({&s1.lower, &s1.upper}, loaded.hash, provenance);
  // Both outputs are rendered before either is written.
  const std::string trace = rsr::io::trace_csv(s1.trace);
  emit(o.out, doc);
  if (!o.out_trace.empty()) rsr::io::write_file_atomic(o.out_trace, trace);
  return kOk;
}

int cmd_evaluate(const Options& o) {
  auto loaded = rsr::io::load_model_file(o.model_path);
  const int n = loaded.model.n_components();
  const int m = loaded.model.n_component_states();
  std::optional<rsr::ReferenceSet> lower, upper;
  std::optional<int> threshold = o.threshold;
  for (const auto& path : o.refs_paths) {
    auto file = rsr::io::reference_file_from_json(rsr::io::read_json_file(path), n, m);
    if (file.model_hash != loaded.hash && !o.force)
      throw rsr::io::InputError(path + " was built for model " + file.model_hash + ", not " + loaded.hash +
                                "; pass --force to use it anyway");
    for (auto& set : file.sets) {
      if (threshold && *threshold != set.threshold())
        throw rsr::io::InputError("reference sets disagree on the threshold");
      threshold = set.threshold();
      auto& slot = set.side() == rsr::Side::Lower ? lower : upper;
      if (!slot) {
        slot = std::move(set);
      } else {
        for (const auto& v : set.members()) slot->insert({v, set.side(), set.threshold()});
      }
    }
  }
  Options effective = o;
  effective.threshold = threshold;
  const int t = require_threshold(effective, loaded.model);
  if (!lower) lower.emplace(rsr::Side::Lower, t);
  if (!upper) upper.emplace(rsr::Side::Upper, t);

  const auto report = rsr::stage2_evaluate(loaded.model, loaded.distribution, *lower, *upper, o.config, t);
  json doc = rsr::io::stage2_to_json(report);
  doc["format"] = rsr::io::kFormat;
  doc["manifest"] = manifest("evaluate", o, loaded.hash);
  emit(o.out, doc);
  return kOk;
}

int cmd_pmf(const Options& o) {
  auto loaded = rsr::io::load_model_file(o.model_path);
  const auto result = rsr::multistate_pmf(loaded.model, loaded.distribution, o.config);
  json doc = rsr::io::pmf_to_json(result);
  doc["format"] = rsr::io::kFormat;
  doc["manifest"] = manifest("pmf", o, loaded.hash);
  emit(o.out, doc);
  return kOk;
}

int cmd_oracle(const Options& o) {
  auto loaded = rsr::io::load_model_file(o.model_path);
  json doc;
  doc["format"] = rsr::io::kFormat;
  doc["mode"] = o.mode;
  if (o.mode == "exact") {
    const auto exact = rsr::oracle::exact_probabilities(loaded.model, loaded.distribution);
    doc["cumulative"] = exact.cumulative;
    doc["pmf"] = exact.pmf();
    doc["state_count"] = exact.state_count;
  } else {
    const int t = require_threshold(o, loaded.model);
    const auto mc = rsr::oracle::crude_monte_carlo(loaded.model, loaded.distribution, o.config.H,
                                                   o.config.seed, t);
    doc["threshold"] = t;
    doc["p_lower"] = mc.p_lower;
    doc["p_upper"] = 1.0 - mc.p_lower;
    doc["cov_lower"] = mc.cov ? json(*mc.cov) : json(nullptr);
    doc["H"] = mc.H;
    doc["seed"] = o.config.seed;
  }
  doc["manifest"] = manifest("oracle", o, loaded.hash);
  emit(o.out, doc);
  return kOk;
}

void add_run_flags(CLI::App* sub, Options& o, bool stage1) {
  sub->add_option("--samples,-H", o.config.H, "Samples per batch")->check(CLI::PositiveNumber);
  sub->add_option("--seed", o.config.seed, "Run seed")->envname("RSR_SEED");
  sub->add_option("--chunk", o.config.chunk_size, "Classification chunk size")->check(CLI::PositiveNumber);
  sub->add_option("--threads", o.config.workers, "Worker threads")->check(CLI::PositiveNumber);
  if (stage1) {
    sub->add_option("--eps-u", o.config.eps_u, "Unclassified-probability threshold")->check(CLI::Range(0.0, 1.0));
    sub->add_option("--r-max", o.config.r_max, "Reference-count cap")->check(CLI::PositiveNumber);
    sub->add_option("--parallel", o.config.parallel_searches, "Boundary searches per iteration")
        ->check(CLI::PositiveNumber);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reference-state system reliability: reference discovery and probability estimation"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("gen-graph", "Generate a random geometric graph");
  gen->add_option("--n-nodes", o.n_nodes, "Number of nodes")->required()->check(CLI::Range(2, 1'000'000));
  gen->add_option("--radius", o.radius, "Connection radius in (0, 1]")
      ->required()
      ->check([](const std::string& s) -> std::string {
        try {
          const double r = std::stod(s);
          return r > 0.0 && r <= 1.0 ? "" : "radius must lie in (0, 1]";
        } catch (...) {
          return "radius must be a number";
        }
      });
  gen->add_option("--seed", o.config.seed, "Placement seed")->envname("RSR_SEED");
  gen->add_option("--max-attempts", o.max_attempts, "Placements tried before keeping the largest component")
      ->check(CLI::PositiveNumber);
  gen->add_option("--out,-o", o.out, "Output graph JSON (default stdout)");

  auto* find = app.add_subcommand("find-refs", "Stage 1: discover boundary reference states");
  find->add_option("--model", o.model_path, "Model definition JSON")->required();
  find->add_option("--threshold", o.threshold, "System-state threshold m'");
  add_run_flags(find, o, true);
  find->add_flag("--no-boundary-search", o.no_boundary_search, "Insert raw unclassified samples");
  find->add_option("--out-refs,-o", o.out, "Output reference-set JSON (default stdout)");
  find->add_option("--out-trace", o.out_trace, "Output trace CSV");

  auto* eval = app.add_subcommand("evaluate", "Stage 2: estimate P(S <= m') and P(S >= m'+1)");
  eval->add_option("--model", o.model_path, "Model definition JSON")->required();
  eval->add_option("--refs", o.refs_paths, "Reference-set JSON files");
  eval->add_option("--threshold", o.threshold, "Threshold m' when no reference files are given");
  add_run_flags(eval, o, false);
  eval->add_flag("--force", o.force, "Accept reference files built for a different model");
  eval->add_option("--out-report,-o", o.out, "Output report JSON (default stdout)");

  auto* pmf = app.add_subcommand("pmf", "System-state PMF over all thresholds");
  pmf->add_option("--model", o.model_path, "Model definition JSON")->required();
  add_run_flags(pmf, o, true);
  pmf->add_option("--out,-o", o.out, "Output PMF JSON (default stdout)");

  auto* orc = app.add_subcommand("oracle", "Exact enumeration or crude Monte Carlo");
  orc->add_option("--model", o.model_path, "Model definition JSON")->required();
  orc->add_option("--mode", o.mode, "exact or mc")->check(CLI::IsMember({"exact", "mc"}));
  orc->add_option("--threshold", o.threshold, "Threshold m' for mc mode");
  add_run_flags(orc, o, false);
  orc->add_option("--out,-o", o.out, "Output JSON (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*gen) return cmd_gen_graph(o);
    if (*find) return cmd_find_refs(o);
    if (*eval) return cmd_evaluate(o);
    if (*pmf) return cmd_pmf(o);
    if (*orc) return cmd_oracle(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const rsr::io::InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInput;
  } catch (const rsr::ModelError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInput;
  } catch (const rsr::oracle::TooLarge& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kUsage;
}
