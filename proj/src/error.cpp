#include "gridlift/error.hpp"

namespace gridlift {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::CorruptImage: return "CorruptImage";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidDims: return "InvalidDims";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DegenerateNeighborhood: return "DegenerateNeighborhood";
    case ErrorCode::EmptyMesh: return "EmptyMesh";
    case ErrorCode::InvalidN: return "InvalidN";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DanglingFaceIndex: return "DanglingFaceIndex";
    case ErrorCode::EmptyCloud: return "EmptyCloud";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      message_(message) {}

Error::Error(ErrorCode code, const std::string& message, std::size_t line)
    : std::runtime_error(std::string(to_string(code)) + " (line " +
                         std::to_string(line) + "): " + message),
      code_(code),
      message_(message),
      line_(line) {}

Error Error::with_stage(std::string stage) const {
  const std::string tagged = "[" + stage + "] " + message_;
  Error annotated = line_ ? Error(code_, tagged, *line_) : Error(code_, tagged);
  annotated.message_ = message_;
  annotated.stage_ = std::move(stage);
  return annotated;
}

}  // namespace gridlift
