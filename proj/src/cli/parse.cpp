#include "horoforge/cli/parse.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>

namespace horoforge::cli {

namespace {

bool space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

std::size_t skip_space(const std::string& s, std::size_t i) {
    while (i < s.size() && space(s[i])) ++i;
    return i;
}

// Reads an unsigned decimal number at i; returns false when none starts there.
bool read_number(const std::string& s, std::size_t& i, double& out) {
    const char* first = s.data() + i;
    const char* last = s.data() + s.size();
    if (first < last && *first == '+') return false; // signs are handled by callers
    const auto [end, ec] = std::from_chars(first, last, out);
    if (ec == std::errc::result_out_of_range) throw TextError(i, "number out of range");
    if (ec != std::errc()) return false;
    if (!std::isfinite(out)) throw TextError(i, "number must be finite");
    i += static_cast<std::size_t>(end - first);
    return true;
}

double read_signed(const std::string& s, std::size_t& i) {
    double sign = 1.0;
    const std::size_t start = i;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        sign = s[i] == '-' ? -1.0 : 1.0;
        ++i;
    }
    double value = 0.0;
    if (!read_number(s, i, value)) throw TextError(start, "expected a number");
    return sign * value;
}

} // namespace

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    std::array<char, 64> buffer{};
    const auto result = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
    return std::string(buffer.data(), result.ptr);
}

double parse_number(const std::string& text) {
    std::size_t i = skip_space(text, 0);
    const double value = read_signed(text, i);
    i = skip_space(text, i);
    if (i != text.size()) throw TextError(i, "unexpected text after number");
    return value;
}

Complex parse_complex(const std::string& text) {
    std::size_t i = skip_space(text, 0);
    if (i == text.size()) throw TextError(i, "empty complex number");
    bool have_real = false;
    bool have_imag = false;
    double re = 0.0;
    double im = 0.0;
    bool first = true;
    while (i < text.size()) {
        const std::size_t term_start = i;
        double sign = 1.0;
        if (text[i] == '+' || text[i] == '-') {
            sign = text[i] == '-' ? -1.0 : 1.0;
            i = skip_space(text, i + 1);
        } else if (!first) {
            throw TextError(i, "expected '+' or '-' between terms");
        }
        double magnitude = 1.0;
        const bool have_number = read_number(text, i, magnitude);
        i = skip_space(text, i);
        if (i < text.size() && text[i] == 'i') {
            if (have_imag) throw TextError(term_start, "imaginary part given twice");
            have_imag = true;
            im = sign * magnitude;
            i = skip_space(text, i + 1);
        } else {
            if (!have_number) throw TextError(i, "expected a number or 'i'");
            if (i < text.size() && text[i] != '+' && text[i] != '-') {
                throw TextError(i, std::string("unexpected '") + text[i] + "'");
            }
            if (have_real) throw TextError(term_start, "real part given twice");
            have_real = true;
            re = sign * magnitude;
        }
        first = false;
    }
    return {re, im};
}

RealVector parse_vector(const std::string& text) {
    std::size_t begin = skip_space(text, 0);
    std::size_t end = text.size();
    while (end > begin && space(text[end - 1])) --end;
    if (begin < end && (text[begin] == '(' || text[begin] == '[')) {
        const char close = text[begin] == '(' ? ')' : ']';
        if (text[end - 1] != close) throw TextError(end - 1, std::string("expected '") + close + "'");
        ++begin;
        --end;
    }
    const std::string body = text.substr(0, end);
    RealVector out;
    std::size_t i = begin;
    bool expect_value = true;
    while (true) {
        i = skip_space(text, i);
        if (i >= end) break;
        if (text[i] == ',') {
            if (expect_value) throw TextError(i, "expected a number before ','");
            expect_value = true;
            ++i;
            continue;
        }
        out.push_back(read_signed(body, i));
        expect_value = false;
    }
    if (out.empty()) throw TextError(begin, "empty vector");
    if (expect_value) throw TextError(end, "trailing ','");
    return out;
}

SlopeCurrent parse_slopes(const std::string& text) {
    nlohmann::json value;
    try {
        value = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw TextError(e.byte > 0 ? e.byte - 1 : 0, "malformed slope list (expected JSON [p, q, w])");
    }
    auto atom = [](const nlohmann::json& entry) {
        if (!entry.is_array() || entry.size() < 2 || entry.size() > 3) {
            throw TextError(0, "each slope is [p, q] or [p, q, w]");
        }
        for (const auto& x : entry) {
            if (!x.is_number()) throw TextError(0, "slope entries must be numbers");
        }
        return SlopeAtom{entry[0].get<double>(), entry[1].get<double>(),
                         entry.size() == 3 ? entry[2].get<double>() : 1.0};
    };
    if (!value.is_array() || value.empty()) throw TextError(0, "expected a JSON array of slopes");
    std::vector<SlopeAtom> atoms;
    if (value[0].is_array()) {
        for (const auto& entry : value) atoms.push_back(atom(entry));
    } else {
        atoms.push_back(atom(value));
    }
    return SlopeCurrent(std::move(atoms));
}

Point parse_point(const std::string& text, const Domain& domain) {
    Point point;
    switch (domain.encoding) {
    case Encoding::real_vector: point = parse_vector(text); break;
    case Encoding::complex_upper_half_plane: point = parse_complex(text); break;
    case Encoding::facet_index: {
        std::size_t i = skip_space(text, 0);
        if (i < text.size() && text[i] == '#') ++i;
        std::size_t index = 0;
        const char* first = text.data() + i;
        const char* last = text.data() + text.size();
        const auto [end, ec] = std::from_chars(first, last, index);
        if (ec != std::errc()) throw TextError(i, "expected a facet index");
        const std::size_t after = skip_space(text, static_cast<std::size_t>(end - text.data()));
        if (after != text.size()) throw TextError(after, "unexpected text after facet index");
        point = FacetIndex{index};
        break;
    }
    case Encoding::slope_current: point = parse_slopes(text); break;
    case Encoding::real_parameter: point = RealParameter{parse_number(text)}; break;
    }
    domain.validate(point);
    return point;
}

Point parse_point_at(const std::string& text, const Domain& domain, const TextOrigin& origin) {
    try {
        return parse_point(text, domain);
    } catch (const TextError& e) {
        throw ParseError(origin.source, origin.line, origin.column + e.offset, e.what());
    } catch (const InvalidPointError& e) {
        throw ParseError(origin.source, origin.line, origin.column, std::string("invalid point: ") + e.what());
    } catch (const DomainMismatchError& e) {
        throw ParseError(origin.source, origin.line, origin.column, std::string("wrong point type: ") + e.what());
    }
}

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> out;
    for (const auto& [piece, offset] : split_trimmed(text, ',')) {
        try {
            out.push_back(parse_number(piece));
        } catch (const TextError& e) {
            throw TextError(offset + e.offset, e.what());
        }
    }
    if (out.empty()) throw TextError(0, "expected comma-separated numbers");
    return out;
}

std::vector<Point> load_points(std::istream& in, const Domain& domain, const std::string& source) {
    std::vector<Point> points;
    std::string line;
    for (std::size_t number = 1; std::getline(in, line); ++number) {
        const std::size_t start = skip_space(line, 0);
        if (start == line.size() || line[start] == '#') continue;
        std::size_t end = line.size();
        while (end > start && space(line[end - 1])) --end;
        points.push_back(parse_point_at(line.substr(start, end - start), domain, {source, number, start + 1}));
    }
    return points;
}

std::vector<Point> load_points_file(const std::string& path, const Domain& domain) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open points file '" + path + "'");
    return load_points(in, domain, path);
}

} // namespace horoforge::cli
