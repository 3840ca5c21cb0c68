#pragma once

#include <stdexcept>
#include <string>

namespace binpose {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument violates a documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The model has no visible pixel under the requested pose.
class EmptyProjectionError : public Error {
 public:
  using Error::Error;
};

class DegenerateGeometryError : public Error {
 public:
  using Error::Error;
};

/// ICP could not form enough correspondences.
class RefinementError : public Error {
 public:
  using Error::Error;
};

/// Scene placement gave up before reaching the requested instance count.
class CapacityError : public Error {
 public:
  CapacityError(const std::string& what, int achieved)
      : Error(what), achieved_(achieved) {}
  int achieved() const { return achieved_; }

 private:
  int achieved_;
};

/// A file is missing, truncated or malformed. `file()` names it.
class DataError : public Error {
 public:
  DataError(const std::string& file, const std::string& what)
      : Error(file + ": " + what), file_(file) {}
  const std::string& file() const { return file_; }

 private:
  std::string file_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Training-facing code asked for ground truth that is withheld.
class AccessError : public Error {
 public:
  using Error::Error;
};

}  // namespace binpose
