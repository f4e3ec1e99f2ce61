#pragma once

#include <stdexcept>
#include <string>

namespace lcmwarp {

// Base of every error raised by the library. Each subclass maps onto one
// failure category so callers (the CLI in particular) can choose exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// log(kz + c) evaluated at (or numerically at) zero.
class SingularInput : public Error {
 public:
  using Error::Error;
};

// Möbius denominator cz + d vanishes.
class NearSingularity : public Error {
 public:
  using Error::Error;
};

// Parameters that would put the log branch cut or pole inside [-1,1]^2.
class DomainViolation : public Error {
 public:
  using Error::Error;
};

// Transformed coordinates collapse onto a line or a point.
class DegenerateRange : public Error {
 public:
  using Error::Error;
};

class ChannelMismatch : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace lcmwarp
