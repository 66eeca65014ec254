#ifndef RANK1_TENSOR_IO_HPP
#define RANK1_TENSOR_IO_HPP

// Plain-text tensor files:
//
//   # optional comment lines
//   3
//   2 2 2
//   1 0 0 0 0 0 0 0
//
// Line 1 is the order d, line 2 the d extents, then the entries in
// row-major order separated by arbitrary whitespace.

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

#include "rank1/tensor.hpp"

namespace rank1 {

namespace detail {

struct Token {
  std::string text;
  std::size_t line;
  std::size_t column;
};

// Splits a line into whitespace-separated tokens with 1-based columns.
inline std::vector<Token> tokenize_line(const std::string& line, std::size_t line_no) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back({line.substr(start, i - start), line_no, start + 1});
  }
  return out;
}

inline bool is_comment(const std::string& line) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos != std::string::npos && line[pos] == '#';
}

inline std::size_t parse_count(const Token& tok, const char* what) {
  std::size_t v = 0;
  const char* first = tok.text.data();
  const char* last = first + tok.text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw ParseError(tok.line, tok.column, std::string("expected ") + what +
                                               ", found '" + tok.text + "'");
  }
  return v;
}

inline double parse_real(const Token& tok) {
  // strtod accepts the usual decimal and exponent forms; from_chars for
  // doubles is not available on every standard library we build with.
  char* end = nullptr;
  const double v = std::strtod(tok.text.c_str(), &end);
  if (end != tok.text.c_str() + tok.text.size()) {
    throw ParseError(tok.line, tok.column, "expected a real number, found '" + tok.text + "'");
  }
  if (!std::isfinite(v)) {
    throw ParseError(tok.line, tok.column, "non-finite entry '" + tok.text + "'");
  }
  return v;
}

}  // namespace detail

inline Tensor read_tensor(std::istream& in) {
  std::vector<std::vector<detail::Token>> lines;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::is_comment(line)) continue;
    auto toks = detail::tokenize_line(line, line_no);
    if (!toks.empty()) lines.push_back(std::move(toks));
  }
  if (lines.empty()) throw ParseError(line_no + 1, 1, "missing tensor order");
  if (lines[0].size() != 1) {
    throw ParseError(lines[0][1].line, lines[0][1].column,
                     "first line must hold only the tensor order");
  }
  const std::size_t d = detail::parse_count(lines[0][0], "tensor order");
  if (d == 0) throw ParseError(lines[0][0].line, lines[0][0].column, "tensor order must be >= 1");
  if (lines.size() < 2) throw ParseError(line_no + 1, 1, "missing extents line");
  if (lines[1].size() != d) {
    const auto& t = lines[1].size() > d ? lines[1][d] : lines[1].back();
    throw ParseError(t.line, t.column,
                     "expected " + std::to_string(d) + " extents, found " +
                         std::to_string(lines[1].size()));
  }
  Shape shape;
  for (const auto& tok : lines[1]) {
    const std::size_t n = detail::parse_count(tok, "positive extent");
    if (n == 0) throw ParseError(tok.line, tok.column, "extent must be positive");
    shape.push_back(n);
  }
  const std::size_t expected = detail::shape_size(shape);
  Vector data;
  data.reserve(expected);
  for (std::size_t l = 2; l < lines.size(); ++l) {
    for (const auto& tok : lines[l]) {
      if (data.size() == expected) {
        throw ParseError(tok.line, tok.column,
                         "too many entries (expected " + std::to_string(expected) + ")");
      }
      data.push_back(detail::parse_real(tok));
    }
  }
  if (data.size() != expected) {
    throw ParseError(line_no + 1, 1,
                     "expected " + std::to_string(expected) + " entries, found " +
                         std::to_string(data.size()));
  }
  return Tensor(std::move(shape), std::move(data));
}

inline Tensor read_tensor_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_tensor(in);
}

inline Tensor parse_tensor(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_tensor(in);
}

// Writes entries with 17 significant digits so that reading back is exact.
// One line per fastest-mode fiber.
inline void write_tensor(std::ostream& out, const Tensor& t) {
  if (t.order() == 0) throw DimensionError("cannot write a scalar tensor");
  out << t.order() << '\n';
  for (std::size_t m = 0; m < t.order(); ++m) {
    out << (m ? " " : "") << t.extent(m);
  }
  out << '\n';
  const std::size_t row = t.shape().back();
  char buf[32];
  for (std::size_t k = 0; k < t.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", t.data()[k]);
    out << buf << ((k + 1) % row == 0 ? '\n' : ' ');
  }
}

inline std::string format_tensor(const Tensor& t) {
  std::ostringstream out;
  write_tensor(out, t);
  return out.str();
}

}  // namespace rank1

#endif  // RANK1_TENSOR_IO_HPP
