#include "horoforge/core/point.hpp"

#include "horoforge/core/errors.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace horoforge {

namespace {

bool same_direction(const SlopeAtom& a, const SlopeAtom& b) {
    const double cross = a.p * b.q - a.q * b.p;
    const double scale = std::hypot(a.p, a.q) * std::hypot(b.p, b.q);
    return std::abs(cross) <= 1e-12 * scale;
}

// Shortest text that reads back as the same double.
std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    std::array<char, 64> buffer{};
    const auto result = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
    return std::string(buffer.data(), result.ptr);
}

} // namespace

SlopeCurrent::SlopeCurrent(std::vector<SlopeAtom> atoms) {
    for (const SlopeAtom& atom : atoms) {
        if (!std::isfinite(atom.p) || !std::isfinite(atom.q) || !std::isfinite(atom.w)) {
            throw InvalidPointError("slope current: non-finite atom");
        }
        if (atom.p == 0.0 && atom.q == 0.0) {
            throw InvalidPointError("slope current: slope (0,0) is not a direction");
        }
        if (!(atom.w > 0.0)) {
            throw InvalidPointError("slope current: weights must be strictly positive");
        }
        bool merged = false;
        for (SlopeAtom& kept : atoms_) {
            if (same_direction(kept, atom)) {
                // atom = k * kept as vectors; |k| = |atom| / |kept|
                const double k = std::hypot(atom.p, atom.q) / std::hypot(kept.p, kept.q);
                kept.w += k * atom.w;
                merged = true;
                break;
            }
        }
        if (!merged) {
            atoms_.push_back(atom);
        }
    }
}

SlopeCurrent SlopeCurrent::single(double p, double q, double w) { return SlopeCurrent({{p, q, w}}); }

SlopeCurrent SlopeCurrent::scaled(double factor) const {
    if (!(factor > 0.0)) {
        throw InvalidPointError("slope current: scale factor must be positive");
    }
    SlopeCurrent result = *this;
    for (SlopeAtom& atom : result.atoms_) {
        atom.w *= factor;
    }
    return result;
}

std::string_view encoding_name(Encoding encoding) {
    switch (encoding) {
    case Encoding::real_vector:
        return "real-vector";
    case Encoding::complex_upper_half_plane:
        return "complex-upper-half-plane";
    case Encoding::facet_index:
        return "facet-index";
    case Encoding::slope_current:
        return "slope-current";
    case Encoding::real_parameter:
        return "real-parameter";
    }
    return "unknown";
}

bool approximately_equal(const Point& a, const Point& b, double tol) {
    if (a.index() != b.index()) return false;
    switch (encoding_of(a)) {
    case Encoding::real_vector: {
        const auto& u = std::get<RealVector>(a);
        const auto& v = std::get<RealVector>(b);
        if (u.size() != v.size()) return false;
        for (std::size_t i = 0; i < u.size(); ++i) {
            if (std::abs(u[i] - v[i]) > tol) return false;
        }
        return true;
    }
    case Encoding::complex_upper_half_plane:
        return std::abs(std::get<Complex>(a).real() - std::get<Complex>(b).real()) <= tol &&
               std::abs(std::get<Complex>(a).imag() - std::get<Complex>(b).imag()) <= tol;
    case Encoding::facet_index:
        return std::get<FacetIndex>(a) == std::get<FacetIndex>(b);
    case Encoding::slope_current: {
        const auto& u = std::get<SlopeCurrent>(a).atoms();
        const auto& v = std::get<SlopeCurrent>(b).atoms();
        if (u.size() != v.size()) return false;
        for (std::size_t i = 0; i < u.size(); ++i) {
            if (std::abs(u[i].p - v[i].p) > tol || std::abs(u[i].q - v[i].q) > tol || std::abs(u[i].w - v[i].w) > tol) {
                return false;
            }
        }
        return true;
    }
    case Encoding::real_parameter:
        return std::abs(std::get<RealParameter>(a).value - std::get<RealParameter>(b).value) <= tol;
    }
    return false;
}

std::string to_string(const Point& point) {
    struct Visitor {
        std::string operator()(const RealVector& v) const {
            std::string out = "(";
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i > 0) out += ", ";
                out += format_double(v[i]);
            }
            return out + ")";
        }
        std::string operator()(const Complex& z) const {
            std::string out = format_double(z.real());
            out += z.imag() < 0 ? "-" : "+";
            out += format_double(std::abs(z.imag()));
            return out + "i";
        }
        std::string operator()(FacetIndex f) const { return "#" + std::to_string(f.value); }
        std::string operator()(const SlopeCurrent& c) const {
            std::string out = "[";
            for (std::size_t i = 0; i < c.atoms().size(); ++i) {
                const SlopeAtom& a = c.atoms()[i];
                if (i > 0) out += ", ";
                out += "[" + format_double(a.p) + ", " + format_double(a.q) + ", " + format_double(a.w) + "]";
            }
            return out + "]";
        }
        std::string operator()(RealParameter t) const { return format_double(t.value); }
    };
    return std::visit(Visitor{}, point);
}

} // namespace horoforge
