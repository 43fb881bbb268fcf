#include "odsearch/error.hpp"

namespace odsearch {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kNonMonotonicTimestamps: return "NonMonotonicTimestamps";
    case ErrorCode::kNonFiniteValue: return "NonFiniteValue";
    case ErrorCode::kWindowOutOfRange: return "WindowOutOfRange";
    case ErrorCode::kDatasetTooSmall: return "DatasetTooSmall";
    case ErrorCode::kWindowTooLarge: return "WindowTooLarge";
    case ErrorCode::kPathInaccessible: return "PathInaccessible";
    case ErrorCode::kManifestCorrupt: return "ManifestCorrupt";
    case ErrorCode::kVersionMismatch: return "VersionMismatch";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kDuplicateName: return "DuplicateName";
    case ErrorCode::kEmptyFile: return "EmptyFile";
    case ErrorCode::kUnknownDataset: return "UnknownDataset";
    case ErrorCode::kInvalidRange: return "InvalidRange";
    case ErrorCode::kInvalidName: return "InvalidName";
    case ErrorCode::kTooFewRows: return "TooFewRows";
    case ErrorCode::kDegenerateInput: return "DegenerateInput";
    case ErrorCode::kClusteringFailed: return "ClusteringFailed";
    case ErrorCode::kSingularCovariance: return "SingularCovariance";
    case ErrorCode::kNumericOverflow: return "NumericOverflow";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kHistoryTooSmall: return "HistoryTooSmall";
    case ErrorCode::kEmptyObservations: return "EmptyObservations";
    case ErrorCode::kTooFewSamples: return "TooFewSamples";
    case ErrorCode::kNoLabels: return "NoLabels";
    case ErrorCode::kNoWindows: return "NoWindows";
    case ErrorCode::kSeriesTooShort: return "SeriesTooShort";
    case ErrorCode::kInvalidPeriod: return "InvalidPeriod";
    case ErrorCode::kEmptySeries: return "EmptySeries";
  }
  return "Unknown";
}

}  // namespace odsearch
