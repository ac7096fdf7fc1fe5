#pragma once

#include <stdexcept>
#include <string>

namespace cr3 {

enum class ErrorCode {
  InvalidArgument,
  DomainError,
  NotGroupElement,
  AlgebraViolation,
  NotNull,
  PointAtInfinity,
  ThroughInfinity,
  NearInfinity,
  NotSpacelike,
  DegenerateDirection,
  LegendrianDirection,
  DegenerateSpan,
  TooFewSamples,
  NotUniform,
  NonTransversal,
  InflectionPresent,
  StepRejected,
  NotClosed,
  NotNatural,
  NoConvergence,
  FrameUnavailable,
  ChiVanishes,
  NotCubeRoot,
  NonIntegerWinding,
  SelfIntersecting,
  CurvesIntersect,
  Unstable,
  NoRoot,
  MultipleRoots,
  Format,
  Io,
};

const char* to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so the
// command line front end can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace cr3
