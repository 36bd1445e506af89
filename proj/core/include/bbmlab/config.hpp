#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bbmlab/bore_data.hpp"
#include "bbmlab/diagnostics.hpp"
#include "bbmlab/solver.hpp"

namespace bbm {

enum class PipelineKind { direct, bore_1d, bore_2d };

PipelineKind parse_pipeline_kind(const std::string& name);
std::string to_string(PipelineKind kind);

/// Initial data section. Bore kinds build a periodized profile along x;
/// "gaussian", "sech2" and "zero" give localized data for direct runs.
struct InitConfig {
  std::string kind = "zero";
  double eta_minus = 0.0;
  double eta_plus = 0.0;
  double u_minus = 0.0;
  double u_plus = 0.0;
  double steepness = 1.0;
  double center = 0.0;
  double amplitude = 0.0;
  double width = 1.0;
  /// Localized kinds: start with u = eta (a right-moving pulse at eps = 0).
  bool right_moving = false;
  std::optional<std::filesystem::path> samples_file;

  struct Perturbation {
    double amplitude = 0.0;
    double width = 1.0;
    double center = 0.0;
  };
  std::optional<Perturbation> perturbation;

  bool is_bore() const;
};

struct OutputConfig {
  bool svg = true;
  bool snapshots = false;
};

struct RunConfig {
  PipelineKind pipeline = PipelineKind::direct;
  GridSpec grid;  // the run grid; 2D for the 2d-bore pipeline
  ModelParams params;
  SolverConfig solver;
  LedgerSettings ledger;
  InitConfig init;
  OutputConfig output;
  /// Normalized configuration with every default filled in.
  nlohmann::json echo;

  /// 1D grid along x (the run grid itself in 1D).
  GridSpec line_grid() const;
  void validate() const;
};

/// Parses JSON or TOML text. `origin` names the source in diagnostics; relative
/// paths inside the config resolve against `base_dir`.
RunConfig parse_config(const std::string& text, bool is_json, const std::string& origin = "<config>",
                       const std::filesystem::path& base_dir = {});

/// Format chosen from the extension (".json" is JSON, anything else TOML).
RunConfig load_config(const std::filesystem::path& path);

/// Builds a RunConfig from an already parsed document (JSON object layout).
RunConfig config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});

}  // namespace bbm
