#pragma once

#include "horoforge/cli/config.hpp"
#include "horoforge/core/bifunctional.hpp"
#include "horoforge/geometries/torus.hpp"

#include <functional>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace horoforge::cli {

/// A named geometry the CLI can run.
///
/// build reads its own [geometry] keys from the config. The samplers feed
/// the invariance verb; leave them empty when random points make no sense.
struct GeometryEntry {
    std::string name;
    std::string description;
    std::function<Bifunctional(const Config&)> build;
    // Landmark texts in the M encoding; the first is the basepoint.
    std::vector<std::string> default_landmarks;
    std::function<Point(const Bifunctional&, std::mt19937_64&)> sample_m;
    std::function<Point(const Bifunctional&, std::mt19937_64&)> sample_n;
    // Extra named quantities for the distance report, given x, y and the computed lower bound.
    std::function<std::vector<std::pair<std::string, double>>(const Point&, const Point&, double,
                                                              const SearchConfig&)>
        distance_extras;
};

/// "reflected", "direct", "inverse-transpose" or "transpose"; throws UsageError otherwise.
geometry::SlopeConvention parse_convention(const std::string& name);

class GeometryRegistry {
public:
    /// euclidean, minsky, funk, torus-e1, torus-e2, torus-thurston.
    static GeometryRegistry with_builtins();

    /// Registers a custom geometry; throws UsageError on a duplicate name.
    void add(GeometryEntry entry);
    /// Throws UsageError listing the known names.
    const GeometryEntry& find(const std::string& name) const;
    std::vector<std::string> names() const;

private:
    std::map<std::string, GeometryEntry> entries_;
};

} // namespace horoforge::cli
