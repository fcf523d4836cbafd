#pragma once

#include <stdexcept>

namespace pmh {

// Every library failure derives from Error so callers (the CLI in
// particular) can separate domain failures from programming errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : Error {
  using Error::Error;
};

// Constructor-time invariant violations of a measure or sequence.
struct InvalidMeasure : Error {
  using Error::Error;
};

struct DegeneratePosterior : Error {
  using Error::Error;
};

struct InvalidBracket : Error {
  using Error::Error;
};

struct InvalidCounts : Error {
  using Error::Error;
};

struct NoWitness : Error {
  using Error::Error;
};

struct UnknownFigure : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

}  // namespace pmh
