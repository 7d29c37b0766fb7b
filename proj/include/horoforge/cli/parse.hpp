#pragma once

#include "horoforge/cli/config.hpp"
#include "horoforge/core/bifunctional.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace horoforge::cli {

/// Syntax error inside a single piece of text; offset is 0-based.
class TextError : public Error {
public:
    TextError(std::size_t offset, const std::string& message) : Error(message), offset(offset) {}
    std::size_t offset;
};

/// Where a piece of text came from, for turning a TextError into a ParseError.
struct TextOrigin {
    std::string source;     // file name or "argument X"
    std::size_t line = 1;
    std::size_t column = 1; // column of the text's first character
};

/// Shortest decimal string that parses back to the same double; "inf", "-inf", "nan" otherwise.
std::string format_number(double value);

/// Whole-string decimal number (leading '+' allowed).
double parse_number(const std::string& text);

/// "a+bi" with optional whitespace: "2i", "-i", "1.5 - 0.25i", "3", "1e-3+2e1i".
Complex parse_complex(const std::string& text);

/// "(1, 2)", "[1,2]" or "1 2"; separators are commas and/or whitespace.
RealVector parse_vector(const std::string& text);

/// JSON [p, q], [p, q, w] or a list of such atoms.
SlopeCurrent parse_slopes(const std::string& text);

/// Parses text in the encoding of domain and validates it against the domain.
/// Facet indices are plain integers, optionally prefixed by '#'.
Point parse_point(const std::string& text, const Domain& domain);

/// parse_point with TextError mapped to a ParseError at origin.
Point parse_point_at(const std::string& text, const Domain& domain, const TextOrigin& origin);

/// Comma-separated numbers, e.g. group data "2,1,1,1".
std::vector<double> parse_number_list(const std::string& text);

/// One point per line; blank lines and lines starting with '#' are skipped.
std::vector<Point> load_points(std::istream& in, const Domain& domain, const std::string& source);
std::vector<Point> load_points_file(const std::string& path, const Domain& domain);

} // namespace horoforge::cli
