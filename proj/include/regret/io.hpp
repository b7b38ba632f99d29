#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "regret/asymptotics.hpp"
#include "regret/montecarlo.hpp"

namespace regret {

/// Inputs of the `bounds` command, all taken from the config's `bounds`
/// section (thresholds are user inputs by design: the regime labels have no
/// canonical cutoffs, so whatever is used must be echoed).
struct BoundsSpec {
  double n = 1000.0;
  std::vector<double> t_list;  ///< empty: a default grid is derived
  double epsilon = 0.0;        ///< <= 0 requests the midpoint rule
  LowerBudget lower_budget;
  double upper_budget = 0.0;
  double delta_threshold = 1e-6;  ///< "delta ~ 0" cutoff
  double b0_threshold = 1e-6;     ///< "B0 ~ 0" cutoff
  double gg_factor = 10.0;  ///< "delta >> 0" iff delta > gg_factor q99/n
  bool have_genbound = false;
  GenBoundInputs genbound;
};

/// A fully parsed run configuration.
struct RunConfig {
  int schema_version = 1;
  ExperimentConfig experiment;  ///< carries the Instance
  BoundsSpec bounds;
  std::string raw_text;         ///< exact config bytes (echoed in manifests)
  std::uint64_t content_hash = 0;  ///< FNV-1a of raw_text
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Summary serialization (schema_version 1, matrices as nested row arrays).
std::string summary_to_json(const AsymptoticSummary& s);
AsymptoticSummary summary_from_json(const std::string& text);

/// CSV of a CRN curve pair and its difference; header is exactly
/// `t,p_eto,ci_eto,p_ieo,ci_ieo,d,ci_d`, values printed with %.17g.
std::string curves_to_csv(const TailCurve& eto, const TailCurve& ieo);

/// Full-fidelity JSON of one curve pair plus its difference curve;
/// raw regrets are included only when `keep_raw` is set.
std::string pair_to_json(const CurvePair& pair, const DiffCurve& diff,
                         bool keep_raw);

std::string scaling_to_json(const ScalingReport& rep);

struct ManifestPhase {
  std::string name;
  double seconds = 0.0;
  std::string status;  ///< "running" | "complete" | "failed" | "skipped"
};

/// Run provenance: written before any long phase starts (status "running")
/// and rewritten at the end with timings and output paths.
struct RunManifest {
  std::string tool_version;
  std::string command;
  std::string config_path;
  std::string config_hash_hex;
  std::string out_dir;
  std::string status;
  std::vector<ManifestPhase> phases;
  std::vector<std::string> outputs;
  std::string config_echo;
  std::vector<std::string> notes;
};

std::string manifest_to_json(const RunManifest& m);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

/// Shortest round-trippable decimal form (%.17g).
std::string format_g17(double v);
std::string hash_hex(std::uint64_t h);

}  // namespace regret
