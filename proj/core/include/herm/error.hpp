#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace herm {

using Complex = std::complex<double>;

inline constexpr Complex kI{0.0, 1.0};

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression source. `offset` is a byte offset into the source.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& detail);

  std::size_t offset() const { return offset_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

/// Singular evaluation (division by zero, log of zero). Carries the printed
/// subtree that failed.
class EvalError : public Error {
 public:
  EvalError(const std::string& what, std::string subtree)
      : Error(what + " in `" + subtree + "`"), subtree_(std::move(subtree)) {}
  const std::string& subtree() const { return subtree_; }

 private:
  std::string subtree_;
};

/// Geometric precondition failure: non-positive metric, Jacobi violation,
/// invalid point, unsupported dimension.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Schema or invariant violation in an input document. `location` is a
/// JSON-pointer-style path ("/metric/0/1").
class InputError : public Error {
 public:
  InputError(std::string location, const std::string& detail)
      : Error(location.empty() ? detail : location + ": " + detail), location_(std::move(location)) {}
  const std::string& location() const { return location_; }

 private:
  std::string location_;
};

}  // namespace herm
