// Copyright 2026 The berezin-lab Authors
// SPDX-License-Identifier: Apache-2.0

// berezin-lab: run experiments from a config, list built-ins, emit schedules.
//
// Exit codes: 0 ok, 1 unexpected failure, 2 precondition or config error,
// 3 resource error, 4 stage failure in the translate-supremum selection.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "berezin/errors.hpp"
#include "berezin/experiment.hpp"
#include "berezin/kernels.hpp"
#include "berezin/signal.hpp"

namespace {

void apply_thread_cap() {
  const char* env = std::getenv("BEREZIN_LAB_THREADS");
  if (!env || !*env) return;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1) throw berezin::ConfigError(std::string("BEREZIN_LAB_THREADS must be a positive integer, got ") + env);
  berezin::set_thread_count(static_cast<int>(n));
}

void print_list() {
  std::printf("windows\n");
  for (const std::string& w : berezin::builtin_window_names()) {
    std::printf("  %-24s %s\n", w.c_str(), berezin::builtin_window_description(w).c_str());
  }
  std::printf("geometries\n");
  for (const auto& g : berezin::geometries()) std::printf("  %-24s %s\n", g.name.c_str(), g.description.c_str());
  std::printf("operations\n");
  for (const auto& op : berezin::operations()) {
    std::printf("  %-24s %s%s\n", op.name.c_str(), op.description.c_str(), op.schedule ? " [schedule]" : "");
  }
}

int run(const std::string& path, bool emit) {
  apply_thread_cap();
  const berezin::ExperimentConfig config = berezin::load_config(path);
  if (emit && !berezin::operation_info(config.operation).schedule) {
    throw berezin::ConfigError("emit needs a schedule operation (thinness_report, compactness_proxy, b1w_integral), not " +
                               config.operation);
  }
  const berezin::ExperimentResult result = berezin::run_experiment(config);
  const auto paths = emit ? berezin::write_emit_outputs(config, result) : berezin::write_run_outputs(config, result);
  for (const std::string& p : paths) std::printf("%s\n", p.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"berezin-lab: Berezin quantization experiments"};
  app.require_subcommand(1);
  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "run the operation named in a config file (.json or .toml)");
  run_cmd->add_option("config", config_path, "config file")->required();
  auto* emit_cmd = app.add_subcommand("emit", "write one CSV per schedule plus a combined JSON");
  emit_cmd->add_option("config", config_path, "config file")->required();
  app.add_subcommand("list", "list built-in windows, geometries and operations");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand("list")) {
      print_list();
      return 0;
    }
    return run(config_path, app.got_subcommand("emit"));
  } catch (const berezin::StageFailure& e) {
    std::fprintf(stderr, "stage failure at stage %d (best bound %.17g): %s\n", e.stage(), e.best_bound(), e.what());
    return 4;
  } catch (const berezin::ResourceError& e) {
    std::fprintf(stderr, "resource error: %s\n", e.what());
    return 3;
  } catch (const berezin::InvalidArgument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "unexpected error: %s\n", e.what());
    return 1;
  }
}
