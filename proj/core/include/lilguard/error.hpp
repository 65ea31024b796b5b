// Copyright 2026 The lilguard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace lilguard {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configuration violates its documented invariants.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A serialized container or compressed sequence is malformed.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the domain of a mathematical operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Exhaustive enumeration would exceed the desk-scale guard.
class EnumerationTooLarge : public Error {
 public:
  using Error::Error;
};

/// A sampler could not produce a member of the source.
class SamplingError : public Error {
 public:
  using Error::Error;
};

/// An operation was invoked on a state machine that no longer accepts it.
class StateError : public Error {
 public:
  using Error::Error;
};

/// Training or corpus data is unusable.
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace lilguard
