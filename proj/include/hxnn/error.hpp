#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace hxnn {

enum class ErrorKind {
  Dimension,
  Parse,
  InvalidArgument,
  NotFound,
  Io,
  Divergence,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what)
      : Error(ErrorKind::Dimension, what) {}
};

/// Parse failure; line() is 1-based, 0 when the error is not tied to a line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(ErrorKind::Parse,
              line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Raised by training when the loss stops being finite. Carries the loss
/// trace of every completed epoch.
class DivergenceError : public Error {
 public:
  DivergenceError(std::size_t epoch, std::vector<double> partial_trace)
      : Error(ErrorKind::Divergence,
              "training diverged: non-finite loss in epoch " +
                  std::to_string(epoch)),
        epoch_(epoch),
        trace_(std::move(partial_trace)) {}

  std::size_t epoch() const noexcept { return epoch_; }
  const std::vector<double>& partial_trace() const noexcept { return trace_; }

 private:
  std::size_t epoch_;
  std::vector<double> trace_;
};

}  // namespace hxnn
