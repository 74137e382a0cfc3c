// Copyright 2026 The berezin-lab Authors
// SPDX-License-Identifier: Apache-2.0

// Experiment configuration (strict JSON / TOML), the operation registry and
// the runner behind the berezin-lab command line.
//
// Config schema (every key optional except where noted):
//   geometry    {kind: finite_gabor, N} | {kind: plane, t_half, w_half, dt, dw}
//               | {kind: affine, a_min, a_max, n_scales, b_half, n_shifts}
//   lattice     plane: {margin} (matched lattice) or {half_width, step};
//               affine: {half_width, step}; finite_gabor: none
//   window      "name" | {name, normalization} | {csv, normalization}
//   symbol      {kind: ball_union, centers, radii} | {kind: strip, axis, center,
//               half_width} | {kind: band, axis, lo, hi} | {kind: predicate,
//               expression} | {kind: constant, value} | {kind: random, seed}
//               | {kind: point, at}
//   operation   required; see operations()
//   parameters  per-operation keys, defaults in operations()
//   thresholds  per-operation keys, defaults in operations()
//   output_dir  default "out"
//   seed        default 1

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "berezin/errors.hpp"
#include "berezin/report.hpp"

namespace berezin {

/// Malformed or unknown configuration content.
class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

struct OperationInfo {
  std::string name;
  std::string description;
  bool schedule = false;  // result is a DecayReport usable by emit
  bool needs_symbol = false;
  report::Json parameters;  // defaults; null means "unset"
  report::Json thresholds;
};

/// Registry in stable (listing) order.
const std::vector<OperationInfo>& operations();
const OperationInfo& operation_info(const std::string& name);

struct GeometryInfo {
  std::string name;
  std::string description;
};
const std::vector<GeometryInfo>& geometries();

struct ExperimentConfig {
  report::Json geometry;
  report::Json lattice;
  report::Json window;
  report::Json symbol;  // null when absent
  std::string operation;
  report::Json parameters;
  report::Json thresholds;
  std::string output_dir = "out";
  std::uint64_t seed = 1;

  /// Normalized config with every default filled in, keys sorted.
  report::Json canonical() const;
  /// FNV-1a over canonical().dump(), as 16 hex digits.
  std::string hash() const;
};

/// Strict: unknown keys at any level and wrongly typed values throw ConfigError.
ExperimentConfig parse_config(const report::Json& document);
/// Reads .json or .toml by extension.
ExperimentConfig load_config(const std::string& path);

struct ExperimentResult {
  report::Json document;  // {"provenance": ..., "result": ...}
  /// (tag, CSV body); tag "" is the primary table.
  std::vector<std::pair<std::string, std::string>> tables;
  /// Two-column schedules for emit: (name, CSV body).
  std::vector<std::pair<std::string, std::string>> schedules;
  /// Dense operator for export_matrix, written as <name>.bin.
  std::optional<Eigen::MatrixXcd> matrix;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

/// Writes the JSON and CSV tables; returns the paths written.
std::vector<std::string> write_run_outputs(const ExperimentConfig& config, const ExperimentResult& result);
/// Writes one CSV per schedule plus a combined JSON. Throws ConfigError for
/// non-schedule operations or empty schedules.
std::vector<std::string> write_emit_outputs(const ExperimentConfig& config, const ExperimentResult& result);

}  // namespace berezin
