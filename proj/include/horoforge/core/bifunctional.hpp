#pragma once

#include "horoforge/core/group_element.hpp"
#include "horoforge/core/point.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace horoforge {

/// Declares which points a factor of a bifunctional accepts.
struct Domain {
    Encoding encoding = Encoding::real_vector;
    std::size_t dimension = 0;   // real-vector only; 0 accepts any length
    std::size_t facet_count = 0; // facet-index only
    std::string label;
    // Geometry-specific validity check; throws InvalidPointError.
    std::function<void(const Point&)> extra_check;

    /// Throws DomainMismatchError on a wrong encoding, InvalidPointError on a bad value.
    void validate(const Point& point) const;

    bool same_as(const Domain& other) const;
};

struct SearchConfig {
    std::size_t initial_grid_size = 64;
    std::size_t local_search_steps = 400;
    double step_shrink = 0.5;
    std::size_t restarts = 3;
    std::uint64_t seed = 1;

    void validate() const;
};

enum class WitnessProvenance { user, grid, refined };

struct WitnessSet {
    std::vector<Point> points;
    WitnessProvenance provenance = WitnessProvenance::user;
};

/// Real coordinates on the N factor, used by derivative-free refinement.
struct WitnessChart {
    // Empty result: the point has no coordinates in this chart.
    std::function<std::optional<std::vector<double>>(const Point&)> to_coords;
    std::function<Point(std::span<const double>)> from_coords;
    double initial_step = 0.1;
};

/// Row-major matrix entries describing a group element (2x2 for the planar models).
using GroupData = std::vector<double>;

/// A real-valued map I: M x N -> R together with optional geometry hooks.
struct Bifunctional {
    std::string name;
    Domain m_domain;
    Domain n_domain;
    // Raw evaluation; callers should go through evaluate() for domain checks.
    std::function<double(const Point&, const Point&)> eval;

    // Optional hooks. Empty std::function / std::nullopt means "not provided".
    std::function<double(const Point&, const Point&)> oracle_d_m;
    std::function<WitnessSet(const Point& x, const Point& y, const SearchConfig&)> witness_grid;
    std::optional<WitnessChart> chart;
    std::function<GroupElement(const GroupData&)> action_builder;

    bool has_oracle() const noexcept { return static_cast<bool>(oracle_d_m); }
    bool same_factors() const { return m_domain.same_as(n_domain); }
};

} // namespace horoforge
