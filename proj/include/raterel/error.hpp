#pragma once

#include <stdexcept>
#include <string>

namespace raterel {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inadmissible input data (files, records, labels).
class InputError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration; aborts a whole command rather than a single task.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Transport, authentication or protocol failure talking to a model endpoint.
class EndpointError : public Error {
 public:
  EndpointError(const std::string& what, bool retryable = true)
      : Error(what), retryable_(retryable) {}
  bool retryable() const noexcept { return retryable_; }

 private:
  bool retryable_;
};

// A run store already holds the (config, run, task) being written.
class DuplicateRecord : public Error {
 public:
  using Error::Error;
};

enum class UndefinedReason {
  empty_matrix,  // no unit carries two or more ratings
  no_pairs,      // pair count n is zero
  no_variation,  // every pooled value identical, D_e = 0
};

// Agreement is mathematically undefined for the given data. Never reported as
// a number: callers render it as "n/a" with the diagnostic.
class UndefinedAgreement : public Error {
 public:
  UndefinedAgreement(UndefinedReason reason, const std::string& what)
      : Error(what), reason_(reason) {}
  UndefinedReason reason() const noexcept { return reason_; }

 private:
  UndefinedReason reason_;
};

const char* to_string(UndefinedReason reason) noexcept;

}  // namespace raterel
