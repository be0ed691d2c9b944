#pragma once

#include <stdexcept>
#include <string>

namespace mwt {

// Every failure the library reports derives from mwt::Error so callers
// (the CLI in particular) can map them onto exit codes in one place.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// step() was asked to advance a population that already holds a type-m individual.
class AbsorbedState : public Error {
 public:
  using Error::Error;
};

// Total event rate reached zero before absorption (only possible with mu == 0).
class Stalled : public Error {
 public:
  using Error::Error;
};

class Unclassifiable : public Error {
 public:
  using Error::Error;
};

class UnsupportedRegime : public Error {
 public:
  using Error::Error;
};

class OverflowGuard : public Error {
 public:
  using Error::Error;
};

class TruncationCapExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace mwt
