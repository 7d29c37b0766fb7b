#pragma once

#include "horoforge/core/bifunctional.hpp"

#include <istream>
#include <string>
#include <vector>

namespace horoforge::geometry {

struct Facet {
    RealVector normal; // unit outward normal
    double offset = 0.0; // <normal, v> <= offset for every vertex
};

/// Bounded convex polytope given by vertices; facets are derived on construction.
///
/// Vertices that are not extreme are allowed and simply end up on no facet.
class ConvexPolytope {
public:
    // Throws InvalidPointError when the hull has empty interior.
    explicit ConvexPolytope(std::vector<RealVector> vertices);

    std::size_t dimension() const noexcept { return dimension_; }
    const std::vector<RealVector>& vertices() const noexcept { return vertices_; }
    const std::vector<Facet>& facets() const noexcept { return facets_; }

    /// Smallest distance from x to a facet hyperplane; positive iff x is interior.
    double interior_margin(const RealVector& x) const;

private:
    std::size_t dimension_ = 0;
    std::vector<RealVector> vertices_;
    std::vector<Facet> facets_;
};

/// M = interior points, N = facet indices, I(x, H) = log dist(x, H).
/// The witness set is the whole facet list, so the distance is exact and no chart is offered.
Bifunctional funk_polytope(const ConvexPolytope& polytope);

/// log(|x - a| / |y - a|) with a the exit point of the ray from x through y; 0 when x = y.
double funk_closed_form(const ConvexPolytope& polytope, const RealVector& x, const RealVector& y);

/// One vertex per line, whitespace-separated decimals; blank lines and '#' comments skipped.
/// Errors name the offending line.
ConvexPolytope load_polytope(std::istream& in);
ConvexPolytope load_polytope_file(const std::string& path);

} // namespace horoforge::geometry
