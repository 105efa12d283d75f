#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sympcap {

enum class ErrorCode {
  kDimension,
  kRepresentation,
  kDomain,
  kSize,
  kNormalization,
  kRank,
  kSmoothness,
  kNonClosure,
  kRefinement,
  kClosure,
  kLemmaViolation,
  kSymmetry,
  kEstimation,
  kSchema,
  kAsymmetry,
  kOriginExterior,
  kConfig,
  kIo,
  kInternal,
};

std::string_view to_string(ErrorCode code);

/// Base exception of the library. Every failure carries a code so that the
/// CLI can map it to a stable diagnostic.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace sympcap
