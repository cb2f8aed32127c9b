// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace lema {

/// Base class for every error raised by the pipeline.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Bad input record, schema violation, or broken invariant.
class ValidationError : public Error {
  public:
    using Error::Error;
};

/// Malformed line in a line-delimited file. Carries the 1-based line number.
class ParseError : public ValidationError {
  public:
    ParseError(const std::string& file, std::size_t line, const std::string& what)
        : ValidationError(file + ":" + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

/// A record references a question that is not in the corpus.
class IntegrityError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

class IoError : public Error {
  public:
    using Error::Error;
};

/// Retries exhausted or a non-retryable HTTP status.
class TransportError : public Error {
  public:
    TransportError(const std::string& what, int status, int attempts)
        : Error(what), status_(status), attempts_(attempts) {}

    /// Last HTTP status seen; 0 when the connection itself failed.
    int status() const noexcept { return status_; }
    int attempts() const noexcept { return attempts_; }

  private:
    int status_;
    int attempts_;
};

/// 401/403 from an endpoint. Never retried.
class AuthError : public TransportError {
  public:
    using TransportError::TransportError;
};

/// Endpoint asked to do something its capabilities do not include.
class CapabilityError : public Error {
  public:
    using Error::Error;
};

/// Command-line misuse; maps to exit code 2.
class UsageError : public Error {
  public:
    using Error::Error;
};

}  // namespace lema
