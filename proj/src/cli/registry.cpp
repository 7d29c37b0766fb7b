#include "horoforge/cli/registry.hpp"

#include "horoforge/cli/parse.hpp"
#include "horoforge/geometries/euclidean.hpp"
#include "horoforge/geometries/funk.hpp"
#include "horoforge/geometries/minsky.hpp"
#include "horoforge/metric/metric_engine.hpp"

#include <filesystem>

namespace horoforge::cli {

namespace {

// Portable uniform draw; std distributions differ between standard libraries.
double uniform(std::mt19937_64& rng, double lo, double hi) {
    const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * unit;
}

long long integer(std::mt19937_64& rng, long long lo, long long hi) {
    return lo + static_cast<long long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

std::size_t positive_size(const Config& config, const std::string& key, long long fallback) {
    const long long value = config.get_int("geometry", key, fallback);
    if (value <= 0) config.fail_at(*config.find("geometry", key), 0, "'" + key + "' must be positive");
    return static_cast<std::size_t>(value);
}

geometry::ConvexPolytope polytope_from(const Config& config) {
    if (const ConfigValue* path = config.find("geometry", "polytope")) {
        if (config.has("geometry", "vertices")) {
            config.fail_at(*path, 0, "give either 'polytope' or 'vertices', not both");
        }
        std::filesystem::path file(path->text);
        if (file.is_relative() && !config.directory().empty()) file = std::filesystem::path(config.directory()) / file;
        return geometry::load_polytope_file(file.string());
    }
    if (const ConfigValue* list = config.find("geometry", "vertices")) {
        std::vector<RealVector> vertices;
        for (const auto& [piece, offset] : split_trimmed(list->text, ';')) {
            try {
                vertices.push_back(parse_vector(piece));
            } catch (const TextError& e) {
                config.fail_at(*list, offset + e.offset, e.what());
            }
        }
        try {
            return geometry::ConvexPolytope(std::move(vertices));
        } catch (const InvalidPointError& e) {
            config.fail_at(*list, 0, e.what());
        }
    }
    return geometry::ConvexPolytope({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
}

Bifunctional torus(const Config& config, geometry::TorusKind kind) {
    Bifunctional result = geometry::make_torus_bifunctional(kind, positive_size(config, "liouville_dirs",
                                                                                geometry::kDefaultLiouvilleDirections));
    if (const ConfigValue* value = config.find("geometry", "convention")) {
        geometry::SlopeConvention convention{};
        try {
            convention = parse_convention(value->text);
        } catch (const UsageError& e) {
            config.fail_at(*value, 0, e.what());
        }
        result.action_builder = [convention](const GroupData& data) {
            return geometry::sl2z_action(geometry::SL2Z::from_group_data(data), convention);
        };
    }
    return result;
}

Point torus_point(const Bifunctional&, std::mt19937_64& rng) {
    return Complex(uniform(rng, -1.0, 1.0), uniform(rng, 0.5, 2.5));
}

Point torus_slope(const Bifunctional&, std::mt19937_64& rng) {
    while (true) {
        const long long p = integer(rng, -5, 5);
        const long long q = integer(rng, -5, 5);
        if (p != 0 || q != 0) return SlopeCurrent::single(static_cast<double>(p), static_cast<double>(q));
    }
}

GeometryEntry torus_entry(const std::string& name, const std::string& description, geometry::TorusKind kind) {
    GeometryEntry entry;
    entry.name = name;
    entry.description = description;
    entry.build = [kind](const Config& config) { return torus(config, kind); };
    entry.default_landmarks = {"i", "2i", "1+i", "-0.5+0.7i", "0.3+1.8i"};
    entry.sample_m = torus_point;
    entry.sample_n = kind == geometry::TorusKind::e2 ? torus_point : torus_slope;
    if (kind == geometry::TorusKind::e2) {
        // Lower-bound comparison d_E2(X, Y) >= d_thurston(Y, X); reported, not enforced.
        entry.distance_extras = [](const Point& x, const Point& y, double lower_bound, const SearchConfig& search) {
            const Bifunctional thurston = geometry::make_torus_bifunctional(geometry::TorusKind::thurston_like);
            const DistanceEstimate reverse = distance(thurston, y, x, search);
            return std::vector<std::pair<std::string, double>>{
                {"thurston_reverse", reverse.lower_bound},
                {"thurston_reverse_witness_count", static_cast<double>(reverse.witness_count)},
                {"lower_bound_margin", lower_bound - reverse.lower_bound},
            };
        };
    }
    return entry;
}

} // namespace

geometry::SlopeConvention parse_convention(const std::string& name) {
    using geometry::SlopeConvention;
    for (SlopeConvention c : {SlopeConvention::reflected, SlopeConvention::direct,
                              SlopeConvention::inverse_transpose, SlopeConvention::transpose}) {
        if (name == geometry::convention_name(c)) return c;
    }
    throw UsageError("unknown slope convention '" + name +
                     "' (expected reflected, direct, inverse-transpose or transpose)");
}

GeometryRegistry GeometryRegistry::with_builtins() {
    GeometryRegistry registry;

    GeometryEntry euclidean;
    euclidean.name = "euclidean";
    euclidean.description = "inner product against unit directions on R^dim ([geometry] dim, default 2)";
    euclidean.build = [](const Config& config) { return geometry::euclidean_inner(positive_size(config, "dim", 2)); };
    euclidean.default_landmarks = {"(0, 0)", "(1, 0)", "(0, 1)", "(-1, 0)", "(0, -1)"};
    euclidean.sample_m = [](const Bifunctional& b, std::mt19937_64& rng) -> Point {
        RealVector x(b.m_domain.dimension);
        for (double& v : x) v = uniform(rng, -3.0, 3.0);
        return x;
    };
    euclidean.sample_n = [](const Bifunctional& b, std::mt19937_64& rng) -> Point {
        RealVector u(b.n_domain.dimension);
        double norm = 0.0;
        while (norm < 1e-3) {
            norm = 0.0;
            for (double& v : u) {
                v = uniform(rng, -1.0, 1.0);
                norm += v * v;
            }
        }
        return u;
    };
    registry.add(std::move(euclidean));

    GeometryEntry minsky;
    minsky.name = "minsky";
    minsky.description = "upper half-plane with I(x+iy, t) = log(y + (t+x)^2/y)";
    minsky.build = [](const Config&) { return geometry::minsky_half_plane(); };
    minsky.default_landmarks = {"i", "2i", "1+i", "-1+0.5i", "3i"};
    minsky.sample_m = [](const Bifunctional&, std::mt19937_64& rng) -> Point {
        return Complex(uniform(rng, -3.0, 3.0), uniform(rng, 0.2, 5.0));
    };
    minsky.sample_n = [](const Bifunctional&, std::mt19937_64& rng) -> Point {
        return RealParameter{uniform(rng, -5.0, 5.0)};
    };
    registry.add(std::move(minsky));

    GeometryEntry funk;
    funk.name = "funk";
    funk.description = "Funk geometry of a polytope ([geometry] polytope = FILE or vertices = v1; v2; ...)";
    funk.build = [](const Config& config) { return geometry::funk_polytope(polytope_from(config)); };
    funk.default_landmarks = {"(0, 0)", "(0.5, 0)", "(0, 0.5)", "(-0.5, -0.5)"};
    registry.add(std::move(funk));

    registry.add(torus_entry("torus-e1", "torus points vs slopes, I = (1/2) log Ext", geometry::TorusKind::e1));
    registry.add(torus_entry("torus-e2", "torus points as Liouville currents vs torus points",
                             geometry::TorusKind::e2));
    registry.add(torus_entry("torus-thurston", "torus points vs slopes, I = log flat length",
                             geometry::TorusKind::thurston_like));
    return registry;
}

void GeometryRegistry::add(GeometryEntry entry) {
    if (entry.name.empty() || !entry.build) throw UsageError("a geometry needs a name and a build function");
    const std::string name = entry.name;
    if (!entries_.emplace(name, std::move(entry)).second) throw UsageError("geometry '" + name + "' already registered");
}

const GeometryEntry& GeometryRegistry::find(const std::string& name) const {
    const auto it = entries_.find(name);
    if (it != entries_.end()) return it->second;
    std::string known;
    for (const auto& [key, entry] : entries_) known += (known.empty() ? "" : ", ") + key;
    throw UsageError("unknown geometry '" + name + "' (known: " + known + ")");
}

std::vector<std::string> GeometryRegistry::names() const {
    std::vector<std::string> out;
    for (const auto& [key, entry] : entries_) out.push_back(key);
    return out;
}

} // namespace horoforge::cli
