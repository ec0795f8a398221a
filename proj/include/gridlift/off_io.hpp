#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "gridlift/mesh.hpp"
#include "gridlift/sampler.hpp"

namespace gridlift {

/// In-memory OFF / nOFF document.
///
/// Three-dimensional documents use the plain "OFF" header; 4D and 5D use
/// "nOFF" followed by a dimension line. Faces list flattened vertex indices.
struct OffDocument {
  int dimension = 3;
  std::vector<double> vertices;  // vertex_count() * dimension values
  std::vector<std::vector<std::uint32_t>> faces;
  std::size_t edge_count = 0;

  std::size_t vertex_count() const noexcept {
    return vertices.size() / static_cast<std::size_t>(dimension);
  }
  bool n_dialect() const noexcept { return dimension != 3; }

  bool operator==(const OffDocument&) const = default;
};

OffDocument to_off_document(const SurfaceMesh& mesh);
OffDocument to_off_document(const DenseCloud& cloud);

/// Canonical text: header, optional dimension line, "V F 0", vertex rows
/// with 9 significant digits separated by single spaces, then face rows
/// "arity i0 i1 ...". Every line ends with '\n'.
/// Throws EmptyInput for a document without vertices.
std::string format_off(const OffDocument& doc);

/// Writes format_off(doc) and returns the byte count. Throws IoError.
std::size_t write_off(const OffDocument& doc, const std::filesystem::path& path);
std::size_t write_off(const SurfaceMesh& mesh, const std::filesystem::path& path);
std::size_t write_off(const DenseCloud& cloud, const std::filesystem::path& path);

/// Parses OFF or nOFF text. '#' starts a comment running to end of line and
/// tokens may be separated by any whitespace. Only triangle and quad faces
/// are accepted.
///
/// Errors: ParseError (with line number), DanglingFaceIndex.
OffDocument parse_off(std::string_view text);

/// Reads and parses a file. Throws FileNotFound / IoError in addition to the
/// parse errors.
OffDocument read_off(const std::filesystem::path& path);

}  // namespace gridlift
