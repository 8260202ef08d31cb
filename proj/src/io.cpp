#include "rsr/io.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace rsr::io {

namespace {

template <typename T>
T required(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InputError(std::string("field '") + key + "': " + e.what());
  }
}

StateVector state_vector_from_json(const json& j, int n_components, int n_states) {
  if (!j.is_array() || static_cast<int>(j.size()) != n_components)
    throw InputError("vector must be an array of " + std::to_string(n_components) + " integers");
  StateVector x(n_components);
  for (int n = 0; n < n_components; ++n) {
    if (!j[n].is_number_integer()) throw InputError("vector entries must be integers");
    const auto v = j[n].get<std::int64_t>();
    if (v < 0 || v >= n_states)
      throw InputError("state " + std::to_string(v) + " outside [0, " + std::to_string(n_states - 1) + "]");
    x[n] = static_cast<State>(v);
  }
  return x;
}

json state_vector_to_json(StateView x) {
  json out = json::array();
  for (State s : x) out.push_back(int{s});
  return out;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

ComponentDistribution distribution_from_json(const json& j, int n_components, int n_states) {
  ComponentDistribution::Table t(n_components, n_states);
  auto fill_row = [&](int n, const json& row) {
    if (!row.is_array() || static_cast<int>(row.size()) != n_states)
      throw InputError("distribution rows must have " + std::to_string(n_states) + " entries");
    for (int m = 0; m < n_states; ++m) {
      if (!row[m].is_number()) throw InputError("distribution entries must be numbers");
      t(n, m) = row[m].get<double>();
    }
  };
  if (j.is_object() && j.contains("every_component")) {
    for (int n = 0; n < n_components; ++n) fill_row(n, j.at("every_component"));
  } else if (j.is_array() && static_cast<int>(j.size()) == n_components) {
    for (int n = 0; n < n_components; ++n) fill_row(n, j[n]);
  } else {
    throw InputError("distribution must be an N x M array or {\"every_component\": [...]}");
  }
  try {
    return ComponentDistribution(std::move(t));
  } catch (const ModelError& e) {
    throw InputError(std::string("distribution: ") + e.what());
  }
}

// Inlines graph_file and fills defaults; returns the implied M_S.
int resolve_system_function(json& fn, const std::filesystem::path& base_dir, int n_components,
                            int n_states) {
  const auto type = required<std::string>(fn, "type");
  if (type == "k_out_of_n") {
    required<int>(fn, "k");
    return n_states;
  }
  if (type == "generator_union") {
    const auto levels = required<json>(fn, "levels");
    if (!levels.is_array() || levels.empty()) throw InputError("generator_union needs at least one level");
    return static_cast<int>(levels.size()) + 1;
  }
  if (type != "single_od_connectivity" && type != "global_connectivity" && type != "edge_disjoint_level")
    throw InputError("unknown system_function type '" + type + "'");

  if (fn.contains("graph_file")) {
    auto path = std::filesystem::path(fn.at("graph_file").get<std::string>());
    if (path.is_relative()) path = base_dir / path;
    fn["graph"] = read_json_file(path);
    fn.erase("graph_file");
  }
  const Graph g = graph_from_json(required<json>(fn, "graph"));
  fn["graph"] = graph_to_json(g);
  if (g.n_edges() != n_components)
    throw InputError("graph has " + std::to_string(g.n_edges()) + " edges but n_components is " +
                     std::to_string(n_components));
  if (type == "single_od_connectivity") {
    if (!fn.contains("origin") || !fn.contains("destination")) {
      const auto [o, d] = select_od_pair(g);
      fn["origin"] = o;
      fn["destination"] = d;
    }
    return 2;
  }
  if (type == "global_connectivity") return 2;
  return required<int>(fn, "max_level") + 1;
}

PerformanceFn build_function(const json& fn, int n_components, int n_states) {
  const auto type = fn.at("type").get<std::string>();
  if (type == "k_out_of_n") return k_out_of_n(fn.at("k").get<int>(), n_components);
  if (type == "generator_union") {
    std::vector<std::vector<StateVector>> levels;
    for (const auto& level : fn.at("levels")) {
      auto& out = levels.emplace_back();
      for (const auto& v : level) out.push_back(state_vector_from_json(v, n_components, n_states));
    }
    return generator_union(std::move(levels));
  }
  const Graph g = graph_from_json(fn.at("graph"));
  if (type == "single_od_connectivity")
    return single_od_connectivity(g, fn.at("origin").get<int>(), fn.at("destination").get<int>());
  if (type == "global_connectivity") return global_connectivity(g);
  return edge_disjoint_level(g, fn.at("max_level").get<int>());
}

}  // namespace

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json graph_to_json(const Graph& graph) {
  json j;
  j["n_nodes"] = graph.n_nodes;
  j["edges"] = json::array();
  for (const auto& [u, v] : graph.edges) j["edges"].push_back({u, v});
  if (!graph.positions.empty()) {
    j["positions"] = json::array();
    for (const auto& p : graph.positions) j["positions"].push_back({p.x, p.y});
  }
  if (graph.provenance) {
    const auto& p = *graph.provenance;
    j["metadata"] = {{"seed", p.seed},
                     {"radius", p.radius},
                     {"requested_nodes", p.requested_nodes},
                     {"attempts", p.attempts},
                     {"largest_component_only", p.largest_component_only}};
  }
  return j;
}

Graph graph_from_json(const json& j) {
  Graph g;
  g.n_nodes = required<int>(j, "n_nodes");
  for (const auto& e : required<json>(j, "edges")) {
    if (!e.is_array() || e.size() != 2) throw InputError("edges must be [u, v] pairs");
    g.edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  if (j.contains("positions"))
    for (const auto& p : j.at("positions")) {
      if (!p.is_array() || p.size() != 2) throw InputError("positions must be [x, y] pairs");
      g.positions.push_back({p[0].get<double>(), p[1].get<double>()});
    }
  if (j.contains("metadata")) {
    const auto& m = j.at("metadata");
    g.provenance = GraphProvenance{m.value("seed", std::uint64_t{0}), m.value("radius", 0.0),
                                   m.value("requested_nodes", 0), m.value("attempts", 0),
                                   m.value("largest_component_only", false)};
  }
  try {
    g.validate();
  } catch (const ModelError& e) {
    throw InputError(std::string("graph: ") + e.what());
  }
  return g;
}

LoadedModel load_model(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw InputError("model definition must be a JSON object");
  json resolved = doc;
  resolved["format"] = kFormat;
  const int n = required<int>(doc, "n_components");
  const int m = required<int>(doc, "n_component_states");
  if (n < 1) throw InputError("n_components must be positive");
  if (m < 1 || m > 256) throw InputError("n_component_states must lie in [1, 256]");

  json fn = required<json>(doc, "system_function");
  const int implied = resolve_system_function(fn, base_dir, n, m);
  resolved["system_function"] = fn;
  if (doc.contains("n_system_states")) {
    if (doc.at("n_system_states").get<int>() != implied)
      throw InputError("n_system_states is " + std::to_string(doc.at("n_system_states").get<int>()) +
                       " but the system function has " + std::to_string(implied) + " states");
  } else {
    resolved["n_system_states"] = implied;
  }
  auto dist = distribution_from_json(required<json>(doc, "distribution"), n, m);
  try {
    SystemModel model(n, m, implied, build_function(fn, n, m));
    return {resolved, std::move(model), std::move(dist), model_hash(resolved)};
  } catch (const ModelError& e) {
    throw InputError(std::string("model: ") + e.what());
  }
}

LoadedModel load_model_file(const std::filesystem::path& path) {
  return load_model(read_json_file(path), path.parent_path());
}

std::string model_hash(const json& resolved) {
  json structural = resolved;
  structural.erase("distribution");
  structural.erase("format");
  if (structural.contains("system_function") && structural["system_function"].contains("graph"))
    structural["system_function"]["graph"].erase("metadata");
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : structural.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return hex64(h);
}

json reference_set_to_json(const ReferenceSet& set) {
  json vectors = json::array();
  for (const auto& v : set.members()) vectors.push_back(state_vector_to_json(v));
  return {{"side", to_string(set.side())},
          {"threshold", set.threshold()},
          {"vectors", vectors},
          {"found_at_iteration", set.found_at()}};
}

ReferenceSet reference_set_from_json(const json& j, int n_components, int n_states) {
  const auto side_name = required<std::string>(j, "side");
  if (side_name != "lower" && side_name != "upper") throw InputError("side must be 'lower' or 'upper'");
  const Side side = side_name == "lower" ? Side::Lower : Side::Upper;
  const int threshold = required<int>(j, "threshold");
  ReferenceSet set(side, threshold);
  const auto vectors = required<json>(j, "vectors");
  std::vector<std::int64_t> found(vectors.size(), -1);
  if (j.contains("found_at_iteration")) {
    found = j.at("found_at_iteration").get<std::vector<std::int64_t>>();
    if (found.size() != vectors.size()) throw InputError("found_at_iteration length mismatch");
  }
  for (std::size_t i = 0; i < vectors.size(); ++i)
    set.insert({state_vector_from_json(vectors[i], n_components, n_states), side, threshold}, found[i]);
  return set;
}

json reference_file_to_json(const std::vector<const ReferenceSet*>& sets, const std::string& model_hash,
                            const json& provenance) {
  json out;
  out["format"] = kFormat;
  out["model_hash"] = model_hash;
  out["reference_sets"] = json::array();
  for (const auto* s : sets) out["reference_sets"].push_back(reference_set_to_json(*s));
  out["provenance"] = provenance;
  return out;
}

ReferenceFile reference_file_from_json(const json& j, int n_components, int n_states) {
  if (required<std::string>(j, "format") != kFormat) throw InputError("unsupported reference file format");
  ReferenceFile out;
  out.model_hash = required<std::string>(j, "model_hash");
  for (const auto& s : required<json>(j, "reference_sets"))
    out.sets.push_back(reference_set_from_json(s, n_components, n_states));
  out.provenance = j.value("provenance", json::object());
  return out;
}

void write_trace_csv(std::ostream& os, const std::vector<TraceRecord>& trace) {
  os << "ref_count,elapsed_s,phi_evals,p_lower,p_upper,p_unclassified,rss_bytes\n";
  char buf[256];
  for (const auto& r : trace) {
    std::snprintf(buf, sizeof buf, "%lld,%.6f,%llu,%.17g,%.17g,%.17g,",
                  static_cast<long long>(r.reference_count), r.elapsed_seconds,
                  static_cast<unsigned long long>(r.phi_evaluations), r.p_lower, r.p_upper,
                  r.p_unclassified);
    os << buf;
    if (r.resident_memory_bytes) os << *r.resident_memory_bytes;
    os << '\n';
  }
}

std::string trace_csv(const std::vector<TraceRecord>& trace) {
  std::ostringstream os;
  write_trace_csv(os, trace);
  return os.str();
}

json run_config_to_json(const RunConfig& c) {
  return {{"H", c.H},
          {"eps_u", c.eps_u},
          {"r_max", c.r_max},
          {"chunk_size", c.chunk_size},
          {"seed", c.seed},
          {"parallel_searches", c.parallel_searches},
          {"workers", c.workers},
          {"boundary_search", c.boundary_search}};
}

json stage2_to_json(const Stage2Report& r) {
  return {{"threshold", r.threshold},
          {"p_lower", r.p_lower},
          {"p_upper", r.p_upper},
          {"cov_lower", optional_number(r.cov_lower)},
          {"cov_upper", optional_number(r.cov_upper)},
          {"H", r.H},
          {"classified_lower", r.classified_lower},
          {"classified_upper", r.classified_upper},
          {"unclassified_resolved", r.unclassified_resolved},
          {"seed", r.seed}};
}

json pmf_to_json(const PmfResult& r) {
  json thresholds = json::array();
  for (std::size_t t = 0; t < r.stage2.size(); ++t) {
    json entry = stage2_to_json(r.stage2[t]);
    const auto& s1 = r.stage1[t];
    entry["stage1"] = {{"iterations", s1.iterations},
                       {"converged", s1.converged},
                       {"redundant", s1.redundant},
                       {"lower_references", s1.lower.size()},
                       {"upper_references", s1.upper.size()},
                       {"final_p_unclassified", s1.trace.empty() ? 0.0 : s1.trace.back().p_unclassified}};
    thresholds.push_back(entry);
  }
  return {{"pmf", r.pmf},
          {"cumulative", r.cumulative},
          {"chain_discrepancy", r.chain_discrepancy},
          {"clamped", r.clamped},
          {"thresholds", thresholds}};
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace rsr::io
