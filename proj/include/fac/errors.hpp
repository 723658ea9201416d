#pragma once

#include <stdexcept>
#include <string>

namespace fac {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonFiniteInput : Error {
  using Error::Error;
};
struct DegenerateRollout : Error {
  using Error::Error;
};
struct NonFiniteState : Error {
  using Error::Error;
};
struct NonFiniteTransition : Error {
  using Error::Error;
};
struct NonFiniteAction : Error {
  using Error::Error;
};
struct EmptyBuffer : Error {
  using Error::Error;
};
struct ShapeMismatch : Error {
  using Error::Error;
};
struct DivergedTraining : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};
struct FormatError : Error {
  using Error::Error;
};
struct CorruptSnapshot : Error {
  using Error::Error;
};
struct EmptyCurve : Error {
  using Error::Error;
};
struct DivisionDegenerate : Error {
  using Error::Error;
};
struct DomainError : Error {
  using Error::Error;
};
struct NotADistribution : Error {
  using Error::Error;
};

}  // namespace fac
