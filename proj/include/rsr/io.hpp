#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rsr/boundary.hpp"
#include "rsr/model.hpp"
#include "rsr/sysfn.hpp"
#include "rsr/workflow.hpp"

namespace rsr::io {

using nlohmann::json;

inline constexpr const char* kFormat = "rsr/1";
inline constexpr const char* kToolVersion = "0.1.0";

/// Malformed or inconsistent input files.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json read_json_file(const std::filesystem::path& path);

/// Writes through a temporary file and renames, so failed runs leave no
/// partial outputs.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Two-space indented, keys sorted, trailing newline.
std::string dump(const json& j);

json graph_to_json(const Graph& graph);
Graph graph_from_json(const json& j);

/// A model definition with graph files inlined and defaults filled in.
struct LoadedModel {
  json resolved;
  SystemModel model;
  ComponentDistribution distribution;
  std::string hash;
};

/// `base_dir` resolves relative `graph_file` entries.
LoadedModel load_model(const json& doc, const std::filesystem::path& base_dir = {});
LoadedModel load_model_file(const std::filesystem::path& path);

/// FNV-1a over the canonical dump of everything except the distribution,
/// so reference sets remain valid when only probabilities change.
std::string model_hash(const json& resolved);

json reference_set_to_json(const ReferenceSet& set);
ReferenceSet reference_set_from_json(const json& j, int n_components, int n_states);

/// A persisted lower/upper pair plus its provenance.
struct ReferenceFile {
  std::vector<ReferenceSet> sets;
  std::string model_hash;
  json provenance;
};

json reference_file_to_json(const std::vector<const ReferenceSet*>& sets, const std::string& model_hash,
                            const json& provenance);
ReferenceFile reference_file_from_json(const json& j, int n_components, int n_states);

/// Columns ref_count,elapsed_s,phi_evals,p_lower,p_upper,p_unclassified,rss_bytes.
void write_trace_csv(std::ostream& os, const std::vector<TraceRecord>& trace);
std::string trace_csv(const std::vector<TraceRecord>& trace);

json run_config_to_json(const RunConfig& config);
json stage2_to_json(const Stage2Report& report);
json pmf_to_json(const PmfResult& result);

/// UTC timestamp, ISO 8601.
std::string utc_now();

}  // namespace rsr::io
