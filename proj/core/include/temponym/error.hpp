#pragma once

#include <stdexcept>
#include <string>

namespace temponym {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Problems with a rule pack: syntax, dangling references, cycles, size.
class PackError : public Error {
 public:
  using Error::Error;
};

// Malformed user input: TSV records, XML, annotation runs, dates.
class InputError : public Error {
 public:
  using Error::Error;
};

// A positive match whose normalization template could not be instantiated.
// This always indicates a bug in the rule pack, never noise in the input.
class NormalizationError : public Error {
 public:
  using Error::Error;
};

}  // namespace temponym
