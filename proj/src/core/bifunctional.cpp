#include "horoforge/core/bifunctional.hpp"

#include "horoforge/core/errors.hpp"

#include <cmath>
#include <string>

namespace horoforge {

void Domain::validate(const Point& point) const {
    if (encoding_of(point) != encoding) {
        throw DomainMismatchError("expected " + std::string(encoding_name(encoding)) + " for domain '" + label +
                                  "', got " + std::string(encoding_name(encoding_of(point))));
    }
    switch (encoding) {
    case Encoding::real_vector: {
        const auto& v = std::get<RealVector>(point);
        if (dimension != 0 && v.size() != dimension) {
            throw DomainMismatchError("domain '" + label + "' expects dimension " + std::to_string(dimension) +
                                      ", got " + std::to_string(v.size()));
        }
        for (double c : v) {
            if (!std::isfinite(c)) throw InvalidPointError("non-finite coordinate");
        }
        break;
    }
    case Encoding::complex_upper_half_plane: {
        const auto& z = std::get<Complex>(point);
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || !(z.imag() > 0.0)) {
            throw InvalidPointError("upper half-plane point needs finite coordinates and Im > 0, got " +
                                    to_string(point));
        }
        break;
    }
    case Encoding::facet_index:
        if (std::get<FacetIndex>(point).value >= facet_count) {
            throw InvalidPointError("facet index " + std::to_string(std::get<FacetIndex>(point).value) +
                                    " out of range for " + std::to_string(facet_count) + " facets");
        }
        break;
    case Encoding::slope_current:
        if (std::get<SlopeCurrent>(point).empty()) {
            throw InvalidPointError("empty slope current");
        }
        break;
    case Encoding::real_parameter:
        if (!std::isfinite(std::get<RealParameter>(point).value)) {
            throw InvalidPointError("non-finite real parameter");
        }
        break;
    }
    if (extra_check) {
        extra_check(point);
    }
}

bool Domain::same_as(const Domain& other) const {
    return encoding == other.encoding && dimension == other.dimension && facet_count == other.facet_count;
}

void SearchConfig::validate() const {
    if (initial_grid_size == 0 || local_search_steps == 0 || restarts == 0) {
        throw Error("search config: grid size, local search steps and restarts must be positive");
    }
    if (!(step_shrink > 0.0 && step_shrink < 1.0)) {
        throw Error("search config: step_shrink must lie in (0, 1)");
    }
}

} // namespace horoforge
