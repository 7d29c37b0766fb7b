#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace horoforge {

using Complex = std::complex<double>;
using RealVector = std::vector<double>;

struct FacetIndex {
    std::size_t value = 0;
    friend bool operator==(FacetIndex, FacetIndex) = default;
};

struct RealParameter {
    double value = 0.0;
    friend bool operator==(RealParameter, RealParameter) = default;
};

struct SlopeAtom {
    double p = 0.0;
    double q = 0.0;
    double w = 1.0;
    friend bool operator==(const SlopeAtom&, const SlopeAtom&) = default;
};

/// Finitely supported weighted set of torus directions (a weighted multicurve).
///
/// Atoms pointing along the same unoriented direction are merged on
/// construction: (p,q,w) and (k p, k q, w') become (p, q, w + |k| w'), which
/// preserves both intersection numbers and flat lengths.
class SlopeCurrent {
public:
    SlopeCurrent() = default;
    explicit SlopeCurrent(std::vector<SlopeAtom> atoms);

    static SlopeCurrent single(double p, double q, double w = 1.0);

    const std::vector<SlopeAtom>& atoms() const noexcept { return atoms_; }
    std::size_t size() const noexcept { return atoms_.size(); }
    bool empty() const noexcept { return atoms_.empty(); }

    SlopeCurrent scaled(double factor) const;

    friend bool operator==(const SlopeCurrent&, const SlopeCurrent&) = default;

private:
    std::vector<SlopeAtom> atoms_;
};

enum class Encoding : std::size_t {
    real_vector = 0,
    complex_upper_half_plane = 1,
    facet_index = 2,
    slope_current = 3,
    real_parameter = 4,
};

// Alternative order matches Encoding.
using Point = std::variant<RealVector, Complex, FacetIndex, SlopeCurrent, RealParameter>;

inline Encoding encoding_of(const Point& point) { return static_cast<Encoding>(point.index()); }

std::string_view encoding_name(Encoding encoding);

/// Coordinate-wise comparison within an absolute tolerance; false across encodings.
bool approximately_equal(const Point& a, const Point& b, double tol);

/// Human-readable, round-trippable rendering (complex as "a+bi", vectors as "(x, y)").
std::string to_string(const Point& point);

} // namespace horoforge
