#include "sympcap/error.hpp"

namespace sympcap {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimension: return "dimension";
    case ErrorCode::kRepresentation: return "representation";
    case ErrorCode::kDomain: return "domain";
    case ErrorCode::kSize: return "size";
    case ErrorCode::kNormalization: return "normalization";
    case ErrorCode::kRank: return "rank";
    case ErrorCode::kSmoothness: return "smoothness";
    case ErrorCode::kNonClosure: return "non-closure";
    case ErrorCode::kRefinement: return "refinement";
    case ErrorCode::kClosure: return "closure";
    case ErrorCode::kLemmaViolation: return "lemma-violation";
    case ErrorCode::kSymmetry: return "symmetry";
    case ErrorCode::kEstimation: return "estimation";
    case ErrorCode::kSchema: return "schema";
    case ErrorCode::kAsymmetry: return "asymmetry";
    case ErrorCode::kOriginExterior: return "origin-exterior";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kInternal: return "internal";
  }
  return "unknown";
}

}  // namespace sympcap
