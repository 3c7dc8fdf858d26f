// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The iaoverhead Authors

#pragma once

#include <stdexcept>
#include <string>

namespace iaoh {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configuration (network, link, frame or allocation) violates its invariants.
class InvalidConfig : public Error {
 public:
  using Error::Error;
};

/// The antenna/stream configuration admits no interference alignment solution.
class InfeasibleConfig : public Error {
 public:
  using Error::Error;
};

/// Interference spans the full receive space, so no zero-forcing direction exists.
class RankDeficiency : public Error {
 public:
  using Error::Error;
};

/// The overhead budget is smaller than the minimum pilot/feedback lengths.
class InfeasibleBudget : public Error {
 public:
  using Error::Error;
};

/// The stacked feedback-channel estimate is singular.
class SingularFeedbackChannel : public Error {
 public:
  using Error::Error;
};

}  // namespace iaoh
