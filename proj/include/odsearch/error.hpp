#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace odsearch {

enum class ErrorCode {
  // dataset construction and slicing
  kLengthMismatch,
  kNonMonotonicTimestamps,
  kNonFiniteValue,
  kWindowOutOfRange,
  kDatasetTooSmall,
  kWindowTooLarge,
  // store
  kPathInaccessible,
  kManifestCorrupt,
  kVersionMismatch,
  kParseError,
  kDuplicateName,
  kEmptyFile,
  kUnknownDataset,
  kInvalidRange,
  kInvalidName,
  // detectors
  kTooFewRows,
  kDegenerateInput,
  kClusteringFailed,
  kSingularCovariance,
  kNumericOverflow,
  // search
  kInvalidArgument,
  kDimensionMismatch,
  kHistoryTooSmall,
  kEmptyObservations,
  kTooFewSamples,
  kNoLabels,
  // evaluation / analytics / plotting
  kNoWindows,
  kSeriesTooShort,
  kInvalidPeriod,
  kEmptySeries,
};

std::string_view error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace odsearch
