#pragma once

#include <stdexcept>
#include <string>

namespace phasechain {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unreadable input, unwritable output.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Input that violates a documented invariant or precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A computation that cannot produce a finite answer (singular scatter
/// matrix, non-converging special function, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Wraps a module failure with the chain and pipeline stage where it happened.
class StageError : public Error {
 public:
  StageError(std::string chain_id, std::string stage, const std::string& what, int exit_code)
      : Error("chain '" + chain_id + "', stage " + stage + ": " + what),
        chain_id_(std::move(chain_id)),
        stage_(std::move(stage)),
        exit_code_(exit_code) {}

  const std::string& chain_id() const noexcept { return chain_id_; }
  const std::string& stage() const noexcept { return stage_; }
  int exit_code() const noexcept { return exit_code_; }

 private:
  std::string chain_id_;
  std::string stage_;
  int exit_code_;
};

}  // namespace phasechain
