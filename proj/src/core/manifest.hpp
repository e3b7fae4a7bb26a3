#pragma once

// Experiment manifests: a versioned JSON config, validated in full before any
// sampling, dispatched to one experiment kind, with results written as JSONL
// (one record per row) and CSV (same rows, documented columns).

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cantor.hpp"
#include "numeric.hpp"
#include "selection.hpp"

namespace fhl {

using Json = nlohmann::ordered_json;

inline constexpr int kManifestSchema = 1;
inline constexpr const char* kToolVersion = "0.1.0";

/// Experiment kinds accepted by run_manifest, in CLI order.
const std::vector<std::string>& manifest_kinds();

struct ModelConfig {
  std::string kind = "bernoulli";  // bernoulli, prop13, prop14
  std::optional<Rational> gamma;   // bernoulli power law
  std::vector<double> table;       // bernoulli per-level probabilities
  Rational gamma0 = 0;             // prop14
  std::vector<std::int64_t> blocks;  // prop13 n_k; derived from m1 when empty
  std::vector<Rational> t;           // prop13 t_k; default 1 - 2^-k
  std::int64_t m1 = 2;
  std::size_t generations = 0;       // prop13 blocks to derive

  bool operator==(const ModelConfig&) const = default;
};

struct TargetConfig {
  std::string kind = "full";  // full, point, uniform, prop13, prop14, schedule
  Rational x = 0;             // point
  Integer count = 2;          // uniform
  Rational ratio = Rational(1, 2);
  std::size_t depth = 0;
  std::int64_t m1 = 2;        // prop13
  std::vector<Rational> t_seq;
  Rational t = Rational(1, 2);  // prop14
  std::vector<std::int64_t> n;
  std::vector<std::pair<Integer, Rational>> generations;  // schedule

  bool operator==(const TargetConfig&) const = default;
};

struct Manifest {
  int schema = kManifestSchema;
  std::string kind;
  std::uint64_t seed = 0;
  std::uint64_t trials = 1000;
  unsigned workers = 1;
  std::optional<int> level_cap;
  std::optional<ModelConfig> model;
  std::optional<TargetConfig> target;
  Json params = Json::object();  // kind-specific, validated by run_manifest
  std::string out_dir;           // empty: no files
  std::string tool_version = kToolVersion;

  bool operator==(const Manifest&) const = default;
};

/// ConfigInvalid with a "$.field.path" prefix on any unknown key, wrong type
/// or bad value. `kind` overrides (or must agree with) the config's kind.
Manifest parse_manifest(std::string_view text, std::string_view kind = {});
Manifest load_manifest(const std::string& path, std::string_view kind = {});

/// Canonical serialization; parse_manifest(to_json(m).dump()) == m.
Json to_json(const Manifest& m);

/// FNV-1a 64 of the canonical manifest without workers and out_dir, as hex.
/// These two never change results.
std::string manifest_digest(const Manifest& m);

/// The "model" and "target" objects on their own, with the same checks.
ModelConfig parse_model_config(const Json& j);
TargetConfig parse_target_config(const Json& j);

SelectionModel build_model(const ModelConfig& cfg);
TargetSet build_target(const TargetConfig& cfg);
/// The schedule behind a Cantor target. InvalidArgument for full/point.
CantorSchedule build_schedule(const TargetConfig& cfg);

struct RunSummary {
  std::string kind;
  std::string digest;
  std::size_t rows = 0;
  std::size_t failures = 0;
  bool passed = true;
  std::string jsonl;  // full JSONL text
  std::string csv;    // full CSV text
  std::vector<std::string> files;
};

/// Row records as they complete, already serialized as one JSONL line.
using RecordSink = std::function<void(const std::string& line)>;

/// Validates everything (level cap, schedule side conditions, target depth)
/// before sampling, then runs the experiment. Output depends only on the
/// manifest, never on `workers`. Writes <out_dir>/<kind>.jsonl and .csv when
/// out_dir is set.
RunSummary run_manifest(const Manifest& m, const RecordSink& sink = {});

}  // namespace fhl
