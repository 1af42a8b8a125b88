#pragma once

#include <optional>
#include <string>
#include <vector>

#include "berrylab/config.hpp"
#include "berrylab/errors.hpp"

namespace berrylab {

/// Process exit statuses of the command-line driver.
namespace exit_status {
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kConfig = 2;
inline constexpr int kPrecondition = 3;
inline constexpr int kNumerical = 4;
inline constexpr int kIo = 5;
}  // namespace exit_status

int exit_status_for(ErrorKind kind) noexcept;

struct OutputFile {
  std::string name;
  std::string content;
};

struct RunResult {
  std::string hash;
  /// record.json content (sorted keys, trailing newline).
  std::string record;
  /// summary.csv and plot_*.csv.
  std::vector<OutputFile> files;
  /// One-line human summary.
  std::string headline;
};

inline constexpr const char* kRecordFile = "record.json";
inline constexpr const char* kSummaryFile = "summary.csv";

/// Executes the experiment in memory; nothing touches the file system.
RunResult run_experiment(const ExperimentConfig& config, int threads = 1);

/// Writes record.json and the CSV files into dir (created if absent).
void write_outputs(const RunResult& result, const std::string& dir);

struct CheckReport {
  bool ok = false;
  std::string hash;
  std::vector<std::string> problems;
};

/// Confirms that record.json matches its embedded config, that every listed
/// file embeds the hash, and (if given) that the config file hashes the same.
CheckReport check_outputs(const std::string& dir, const std::optional<std::string>& config_path = std::nullopt);

}  // namespace berrylab
