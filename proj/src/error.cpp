#include "cr3/error.hpp"

namespace cr3 {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NotGroupElement: return "NotGroupElement";
    case ErrorCode::AlgebraViolation: return "AlgebraViolation";
    case ErrorCode::NotNull: return "NotNull";
    case ErrorCode::PointAtInfinity: return "PointAtInfinity";
    case ErrorCode::LegendrianDirection: return "LegendrianDirection";
    case ErrorCode::DegenerateSpan: return "DegenerateSpan";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::NotUniform: return "NotUniform";
    case ErrorCode::NonTransversal: return "NonTransversal";
    case ErrorCode::InflectionPresent: return "InflectionPresent";
    case ErrorCode::StepRejected: return "StepRejected";
    case ErrorCode::NotClosed: return "NotClosed";
    case ErrorCode::NotNatural: return "NotNatural";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NotCubeRoot: return "NotCubeRoot";
    case ErrorCode::NonIntegerWinding: return "NonIntegerWinding";
    case ErrorCode::SelfIntersecting: return "SelfIntersecting";
    case ErrorCode::CurvesIntersect: return "CurvesIntersect";
    case ErrorCode::Unstable: return "Unstable";
    case ErrorCode::NoRoot: return "NoRoot";
    case ErrorCode::MultipleRoots: return "MultipleRoots";
    case ErrorCode::ThroughInfinity: return "ThroughInfinity";
    case ErrorCode::NearInfinity: return "NearInfinity";
    case ErrorCode::NotSpacelike: return "NotSpacelike";
    case ErrorCode::DegenerateDirection: return "DegenerateDirection";
    case ErrorCode::FrameUnavailable: return "FrameUnavailable";
    case ErrorCode::ChiVanishes: return "ChiVanishes";
    case ErrorCode::Format: return "Format";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace cr3
