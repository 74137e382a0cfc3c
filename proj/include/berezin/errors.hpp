// Copyright 2026 The berezin-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace berezin {

/// Violated precondition: bad shapes, out-of-range parameters, geometry mismatch.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Wavelet whose Calderon integral diverges (nonzero mean).
class NotAdmissible : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Admissibility constants differ between directions; scaling cannot fix that.
class NotNormalizable : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Dense materialization would exceed the configured size cap.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The translate-supremum selection found no candidate meeting a stage bound.
class StageFailure : public std::runtime_error {
 public:
  StageFailure(const std::string& what, int stage, double best_bound)
      : std::runtime_error(what), stage_(stage), best_bound_(best_bound) {}

  int stage() const noexcept { return stage_; }
  double best_bound() const noexcept { return best_bound_; }

 private:
  int stage_;
  double best_bound_;
};

}  // namespace berezin
