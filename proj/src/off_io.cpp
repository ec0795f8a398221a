#include "gridlift/off_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gridlift/error.hpp"

namespace gridlift {

namespace {

void append_real(std::string& out, double v) {
  if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "non-finite vertex coordinate");
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 9);
  out.append(buf, res.ptr);
}

template <typename Int>
void append_int(std::string& out, Int v) {
  char buf[24];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

struct Token {
  std::string_view text;
  std::size_t line;
};

class Tokenizer {
 public:
  explicit Tokenizer(std::string_view text) : text_(text) {}

  bool next(Token& tok) {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
        ++pos_;
      } else {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && !is_break(text_[pos_])) ++pos_;
        tok = {text_.substr(start, pos_ - start), line_};
        return true;
      }
    }
    return false;
  }

  std::size_t line() const noexcept { return line_; }

 private:
  static bool is_break(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v' || c == '#';
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(text) {}

  Token take(const char* what) {
    Token tok;
    if (!tokens_.next(tok)) {
      throw Error(ErrorCode::ParseError, std::string("unexpected end of file, expected ") + what,
                  tokens_.line());
    }
    return tok;
  }

  template <typename Int>
  Int integer(const char* what) {
    const Token tok = take(what);
    Int v{};
    const auto* end = tok.text.data() + tok.text.size();
    const auto res = std::from_chars(tok.text.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end) {
      throw Error(ErrorCode::ParseError,
                  std::string("expected ") + what + ", got '" + std::string(tok.text) + "'",
                  tok.line);
    }
    return v;
  }

  double real(const char* what) {
    const Token tok = take(what);
    double v = 0.0;
    const auto* end = tok.text.data() + tok.text.size();
    const auto res = std::from_chars(tok.text.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end || !std::isfinite(v)) {
      throw Error(ErrorCode::ParseError,
                  std::string("expected ") + what + ", got '" + std::string(tok.text) + "'",
                  tok.line);
    }
    return v;
  }

  bool at_end() {
    Token tok;
    if (!tokens_.next(tok)) return true;
    trailing_ = tok;
    return false;
  }
  const Token& trailing() const noexcept { return trailing_; }

 private:
  Tokenizer tokens_;
  Token trailing_{};
};

}  // namespace

OffDocument to_off_document(const SurfaceMesh& mesh) {
  OffDocument doc;
  doc.dimension = mesh.cloud.dims();
  doc.vertices.assign(mesh.cloud.coords().begin(), mesh.cloud.coords().end());
  doc.faces.reserve(mesh.face_count());
  for (std::size_t f = 0; f < mesh.face_count(); ++f) {
    const auto face = mesh.face(f);
    doc.faces.emplace_back(face.begin(), face.end());
  }
  return doc;
}

OffDocument to_off_document(const DenseCloud& cloud) {
  OffDocument doc;
  doc.dimension = cloud.dims;
  doc.vertices = cloud.coords;
  return doc;
}

std::string format_off(const OffDocument& doc) {
  if (doc.vertices.empty()) throw Error(ErrorCode::EmptyInput, "nothing to write");
  if (doc.dimension < 3 || doc.dimension > 5 ||
      doc.vertices.size() % static_cast<std::size_t>(doc.dimension) != 0) {
    throw Error(ErrorCode::InvalidDims, "OFF documents carry 3 to 5 coordinates per vertex");
  }
  const std::size_t dims = static_cast<std::size_t>(doc.dimension);

  std::string out;
  out.reserve(doc.vertices.size() * 12 + doc.faces.size() * 24 + 32);
  if (doc.n_dialect()) {
    out += "nOFF\n";
    append_int(out, doc.dimension);
    out += '\n';
  } else {
    out += "OFF\n";
  }
  append_int(out, doc.vertex_count());
  out += ' ';
  append_int(out, doc.faces.size());
  out += " 0\n";

  for (std::size_t v = 0; v < doc.vertex_count(); ++v) {
    for (std::size_t c = 0; c < dims; ++c) {
      if (c != 0) out += ' ';
      append_real(out, doc.vertices[v * dims + c]);
    }
    out += '\n';
  }
  for (const auto& face : doc.faces) {
    append_int(out, face.size());
    for (std::uint32_t idx : face) {
      out += ' ';
      append_int(out, idx);
    }
    out += '\n';
  }
  return out;
}

std::size_t write_off(const OffDocument& doc, const std::filesystem::path& path) {
  const std::string text = format_off(doc);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
  return text.size();
}

std::size_t write_off(const SurfaceMesh& mesh, const std::filesystem::path& path) {
  return write_off(to_off_document(mesh), path);
}

std::size_t write_off(const DenseCloud& cloud, const std::filesystem::path& path) {
  return write_off(to_off_document(cloud), path);
}

OffDocument parse_off(std::string_view text) {
  Parser p(text);
  OffDocument doc;

  const Token header = p.take("OFF header");
  if (header.text == "OFF") {
    doc.dimension = 3;
  } else if (header.text == "nOFF") {
    doc.dimension = p.integer<int>("dimension");
    if (doc.dimension < 3 || doc.dimension > 5) {
      throw Error(ErrorCode::ParseError,
                  "unsupported nOFF dimension " + std::to_string(doc.dimension), header.line);
    }
  } else {
    throw Error(ErrorCode::ParseError, "expected OFF or nOFF, got '" + std::string(header.text) + "'",
                header.line);
  }

  const auto vertex_count = p.integer<std::size_t>("vertex count");
  const auto face_count = p.integer<std::size_t>("face count");
  doc.edge_count = p.integer<std::size_t>("edge count");

  const auto dims = static_cast<std::size_t>(doc.dimension);
  doc.vertices.reserve(std::min(vertex_count, text.size()) * dims);
  for (std::size_t i = 0; i < vertex_count * dims; ++i) {
    doc.vertices.push_back(p.real("vertex coordinate"));
  }

  doc.faces.reserve(std::min(face_count, text.size()));
  for (std::size_t f = 0; f < face_count; ++f) {
    const Token arity_tok = p.take("face arity");
    std::size_t arity = 0;
    const auto* end = arity_tok.text.data() + arity_tok.text.size();
    const auto res = std::from_chars(arity_tok.text.data(), end, arity);
    if (res.ec != std::errc() || res.ptr != end || (arity != 3 && arity != 4)) {
      throw Error(ErrorCode::ParseError,
                  "face arity must be 3 or 4, got '" + std::string(arity_tok.text) + "'",
                  arity_tok.line);
    }
    std::vector<std::uint32_t> face(arity);
    for (auto& idx : face) {
      idx = p.integer<std::uint32_t>("face index");
      if (idx >= vertex_count) {
        throw Error(ErrorCode::DanglingFaceIndex,
                    "face " + std::to_string(f) + " references vertex " + std::to_string(idx) +
                        " of " + std::to_string(vertex_count));
      }
    }
    doc.faces.push_back(std::move(face));
  }

  if (!p.at_end()) {
    throw Error(ErrorCode::ParseError,
                "unexpected trailing token '" + std::string(p.trailing().text) + "'",
                p.trailing().line);
  }
  return doc;
}

OffDocument read_off(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorCode::FileNotFound, path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_off(buf.str());
}

}  // namespace gridlift
