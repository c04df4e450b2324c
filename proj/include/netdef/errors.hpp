#pragma once

#include <stdexcept>
#include <string>

namespace netdef {

// Base of every fault raised by the library. Invariant violations found by
// validate_network are returned as data and never thrown.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownNode : public Error {
 public:
  explicit UnknownNode(const std::string& id)
      : Error("unknown node id '" + id + "'"), id_(id) {}
  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

// The instance is outside the model class a solver handles
// (e.g. nonzero edge weights passed to the isolated solver).
class ModelMismatch : public Error {
 public:
  using Error::Error;
};

class SizeLimit : public Error {
 public:
  using Error::Error;
};

class InvalidParams : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class NumericalFailure : public Error {
 public:
  using Error::Error;
};

class UnboundedFlow : public Error {
 public:
  using Error::Error;
};

class RoundingInfeasible : public Error {
 public:
  using Error::Error;
};

}  // namespace netdef
