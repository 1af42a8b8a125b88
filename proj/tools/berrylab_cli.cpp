#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "berrylab/berrylab.h"

namespace {

// One machine-parsable line on stderr, then the matching exit status.
int report_failure(blab_status s) {
  std::string reason = blab_last_error();
  for (char& c : reason) {
    if (c == '\n') c = ' ';
  }
  std::cerr << "error: kind=" << blab_status_name(s) << " reason=" << reason << "\n";
  return blab_exit_code(s);
}

void print_and_free(char* s, std::FILE* stream = stdout) {
  if (s == nullptr) return;
  std::fputs(s, stream);
  blab_string_free(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"berrylab: random-wave localization experiments"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  int threads = 1;

  auto* run = app.add_subcommand("run", "run an experiment config and write its outputs");
  run->add_option("--config", config, "experiment config (INI)")->required();
  run->add_option("--out-dir", out_dir, "output directory (overrides output.directory)");
  run->add_option("--seed", seed, "master seed override");
  run->add_option("--threads", threads, "worker threads (hint)")->check(CLI::PositiveNumber);

  auto* validate = app.add_subcommand("validate", "check a config against the schema without running it");
  validate->add_option("--config", config, "experiment config (INI)")->required();

  auto* list = app.add_subcommand("list-experiments", "print experiment kinds, config keys and defaults");

  auto* check = app.add_subcommand("check", "confirm that an output directory matches its record and config");
  check->add_option("--out-dir", out_dir, "output directory")->required();
  check->add_option("--config", config, "config file to compare against");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*run) {
    char* headline = nullptr;
    const std::uint64_t seed_value = seed.value_or(0);
    const blab_status s = blab_run_file(config.c_str(), out_dir.empty() ? nullptr : out_dir.c_str(),
                                        seed ? &seed_value : nullptr, threads, &headline, nullptr);
    if (s != BLAB_OK) return report_failure(s);
    print_and_free(headline);
    std::cout << "\n";
    return 0;
  }
  if (*validate) {
    char* report = nullptr;
    const blab_status s = blab_config_validate_file(config.c_str(), &report);
    print_and_free(report);
    if (s == BLAB_OK) return 0;
    if (s == BLAB_ERR_CONFIG) return blab_exit_code(s);
    return report_failure(s);
  }
  if (*list) {
    char* text = nullptr;
    const blab_status s = blab_list_experiments(&text);
    if (s != BLAB_OK) return report_failure(s);
    print_and_free(text);
    return 0;
  }
  if (*check) {
    char* report = nullptr;
    const blab_status s = blab_check_outputs(out_dir.c_str(), config.empty() ? nullptr : config.c_str(), &report);
    print_and_free(report);
    if (s == BLAB_OK || s == BLAB_ERR_CONFIG) return blab_exit_code(s);
    return report_failure(s);
  }
  return 1;
}
