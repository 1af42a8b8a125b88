#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "berrylab/berry_field.hpp"
#include "berrylab/experiments.hpp"
#include "berrylab/functionals.hpp"
#include "berrylab/localization.hpp"

namespace berrylab {

inline constexpr int kRecordSchemaVersion = 1;

enum class ExperimentKind {
  BerryExpectation,
  Marginal,
  Covariance,
  Translation,
  InverseLocalize,
  IlScan,
  StrongIl,
};

const char* experiment_name(ExperimentKind kind);
std::optional<ExperimentKind> experiment_from_name(const std::string& name);
std::vector<std::string> experiment_names();

enum class TargetKind { Radial, Harmonic, PlaneWave, Eigenfunction };

struct TargetSpec {
  TargetKind kind = TargetKind::Radial;
  int degree = 0;
  int index = 1;
  double scale = 1.0;
  Point direction{1.0, 0.0, 0.0};
  double phase = 0.0;
  int degree_cap = kDefaultDegreeCap;
  /// Rescale to unit C^order norm on the experiment grid.
  bool normalize = false;
};

/// Typed view of a validated config. Every field is resolved (defaults filled).
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::BerryExpectation;
  std::uint64_t seed = 1;
  double confidence = 0.99;
  Point point{};
  std::vector<double> separations;
  Point direction{1.0, 0.0, 0.0};
  Point shift{};
  double epsilon = 0.5;
  int order = 1;
  std::vector<double> base_point;
  bool control = false;
  std::size_t control_samples = 2000;

  /// Sampler draws replace the eigenfunction localizations (control runs).
  bool berry_source = false;
  EigenfunctionSequenceSpec sequence;
  SamplingSpec sampling;
  SamplerSpec sampler;
  std::size_t berry_samples = 1000;
  GridSpec grid;
  FunctionalSpec functional;
  TargetSpec target;
  bool frechet = false;
  FrechetParams frechet_params;
  std::string output_directory = "out";

  /// One line per key, "section.key=value", schema order; the hash input.
  std::string canonical;
  /// SHA-256 of canonical, lower-case hex.
  std::string hash;
};

struct ValidationReport {
  bool ok = false;
  std::vector<std::string> errors;
  std::vector<std::string> notices;
  std::optional<ExperimentConfig> config;
};

/// Parses INI text and checks it against the schema. All problems are
/// collected; nothing is thrown for config content.
ValidationReport validate_config_text(const std::string& text);
/// Reads the file (IoError when unreadable) then validates.
ValidationReport validate_config_file(const std::string& path);
/// Validates and throws ConfigError carrying every error on failure.
ExperimentConfig load_config(const std::string& path, std::optional<std::uint64_t> seed_override = std::nullopt);
ExperimentConfig parse_config(const std::string& text, std::optional<std::uint64_t> seed_override = std::nullopt);

std::string sha256_hex(const std::string& data);

/// Experiment catalogue with the schema (keys, defaults, which kinds use them).
std::string experiment_catalogue();

/// Builds the target field for an experiment (eigenfunction targets need the
/// config's sequence and base point).
SourcePtr build_target(const ExperimentConfig& config);

}  // namespace berrylab
