#pragma once

// End-to-end run: encode, transform, compile, select, train, sweep.

#include "vqf/encoder.hpp"
#include "vqf/evaluate.hpp"
#include "vqf/optimize.hpp"
#include "vqf/sim.hpp"
#include "vqf/transform.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace vqf {

struct RunConfig {
  // instance: either n + bits or a clause file
  std::optional<std::uint64_t> n;
  int bits = 0;
  std::string clause_file;
  int probe_depth = kDefaultProbeDepth;

  std::vector<TransformKind> transforms{std::begin(kAllTransforms), std::end(kAllTransforms)};
  GrobnerCoefficients grobner;
  std::vector<int> p_list{1, 2};
  std::string noise_file;  // loaded into `noise` when set
  NoiseModel noise;
  std::vector<double> levels{0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  long train_shots = 2048;
  long eval_shots = 8192;
  DeConfig de;
  std::uint64_t seed = 7;
  bool reuse_params = false;
  int qubit_budget = 16;
  std::string output_dir = "vqf-out";

  /// Short instance label used in reports.
  std::string instance_id() const;
};

/// Throws InvalidConfig on unknown keys, bad values or an unreadable noise
/// file; relative paths resolve against `base`.
RunConfig run_config_from_json(const nlohmann::json& j, const std::filesystem::path& base = {});
RunConfig load_run_config(const std::filesystem::path& path);

/// Resolved form: the noise model is inlined and the noise file dropped.
nlohmann::json to_json(const RunConfig& cfg);

/// FNV-1a 64 of the resolved config without output_dir, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

/// A stage failure; `code` is the process exit code (2 config, 3 infeasible, 4 runtime).
class StageError : public Error {
 public:
  StageError(std::string stage, int code, const std::string& what)
      : Error(stage + ": " + what), stage_(std::move(stage)), code_(code) {}

  const std::string& stage() const noexcept { return stage_; }
  int code() const noexcept { return code_; }

 private:
  std::string stage_;
  int code_;
};

/// Exit code for an exception escaping a command.
int exit_code_for(const std::exception& e);

ClauseSystem load_instance(const RunConfig& cfg);

struct PipelineResult {
  std::string hash;
  TransformKind selected = TransformKind::Direct;
  std::vector<NrpgReport> reports;
  std::vector<std::filesystem::path> files;
};

/// Writes every artifact into cfg.output_dir. dry_run stops after selection.
PipelineResult run_pipeline(const RunConfig& cfg, int threads, bool dry_run = false);

}  // namespace vqf
