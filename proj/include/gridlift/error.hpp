#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gridlift {

enum class ErrorCode {
  FileNotFound,
  UnsupportedFormat,
  CorruptImage,
  InvalidArgument,
  InvalidDims,
  IndexOutOfRange,
  DegenerateNeighborhood,
  EmptyMesh,
  InvalidN,
  IoError,
  EmptyInput,
  ParseError,
  DanglingFaceIndex,
  EmptyCloud,
  DimensionMismatch,
  EmptyDataset,
};

std::string_view to_string(ErrorCode code);

/// The single exception type thrown by the library. Callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  Error(ErrorCode code, const std::string& message, std::size_t line);

  ErrorCode code() const noexcept { return code_; }
  /// 1-based source line for ParseError, when known.
  std::optional<std::size_t> line() const noexcept { return line_; }
  /// Pipeline stage that raised the error, empty outside the pipeline.
  const std::string& stage() const noexcept { return stage_; }

  /// Copy of this error annotated with the pipeline stage name, replacing
  /// any earlier stage.
  Error with_stage(std::string stage) const;

 private:
  ErrorCode code_;
  std::string message_;
  std::optional<std::size_t> line_;
  std::string stage_;
};

}  // namespace gridlift
