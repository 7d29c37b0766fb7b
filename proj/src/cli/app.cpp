#include "horoforge/cli/app.hpp"

#include "horoforge/cli/parse.hpp"
#include "horoforge/dynamics/dynamics.hpp"
#include "horoforge/geometries/euclidean.hpp"
#include "horoforge/verify/acceptance.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#ifndef HOROFORGE_E2_BASELINE
#define HOROFORGE_E2_BASELINE ""
#endif

namespace horoforge::cli {

namespace {

using Json = nlohmann::ordered_json;

struct Globals {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_path;
    std::string format;
    std::string geometry;
};

struct Context {
    const Config& config;
    const GeometryRegistry& registry;
    std::uint64_t seed = 1;
    bool seed_given = false; // verify keeps its own default seed otherwise
    std::string format;
    std::string geometry;
};


Json number(double value) {
    if (std::isfinite(value)) return value;
    return format_number(value);
}

std::string csv_field(const std::string& text) {
    if (text.find_first_of(",\"\n") == std::string::npos) return text;
    std::string quoted = "\"";
    for (char c : text) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    return quoted + "\"";
}

void csv_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << csv_field(fields[i]);
    out << '\n';
}

std::string count(std::size_t n) { return std::to_string(n); }

Json header(const std::string& verb, const Context& ctx) {
    Json doc;
    doc["schema"] = kSchema;
    doc["verb"] = verb;
    doc["geometry"] = ctx.geometry;
    doc["seed"] = ctx.seed;
    return doc;
}

// Metadata lines of a CSV report; lines starting with '#' are comments for most CSV readers.
void csv_meta(std::ostream& out, const std::string& verb, const Context& ctx,
              const std::vector<std::pair<std::string, std::string>>& extra = {}) {
    out << "# schema: " << kSchema << '\n';
    out << "# verb: " << verb << '\n';
    if (!ctx.geometry.empty()) out << "# geometry: " << ctx.geometry << '\n';
    out << "# seed: " << ctx.seed << '\n';
    for (const auto& [key, value] : extra) out << "# " << key << ": " << value << '\n';
}


long long int_at_least(const Config& config, const std::string& section, const std::string& key,
                       long long fallback, long long minimum) {
    const long long value = config.get_int(section, key, fallback);
    if (value < minimum) {
        config.fail_at(*config.find(section, key), 0, "'" + key + "' must be at least " + std::to_string(minimum));
    }
    return value;
}

double positive(const Config& config, const std::string& section, const std::string& key, double fallback) {
    const double value = config.get_double(section, key, fallback);
    if (!(value > 0.0)) config.fail_at(*config.find(section, key), 0, "'" + key + "' must be positive");
    return value;
}

SearchConfig search_config(const Context& ctx) {
    SearchConfig search;
    search.initial_grid_size = static_cast<std::size_t>(int_at_least(ctx.config, "search", "grid", 64, 1));
    search.local_search_steps = static_cast<std::size_t>(int_at_least(ctx.config, "search", "steps", 400, 0));
    search.step_shrink = ctx.config.get_double("search", "shrink", 0.5);
    if (!(search.step_shrink > 0.0 && search.step_shrink < 1.0)) {
        ctx.config.fail_at(*ctx.config.find("search", "shrink"), 0, "'shrink' must lie in (0, 1)");
    }
    search.restarts = static_cast<std::size_t>(int_at_least(ctx.config, "search", "restarts", 3, 0));
    search.seed = ctx.seed;
    search.validate();
    return search;
}

Json search_json(const SearchConfig& search) {
    Json doc;
    doc["grid"] = search.initial_grid_size;
    doc["steps"] = search.local_search_steps;
    doc["shrink"] = number(search.step_shrink);
    doc["restarts"] = search.restarts;
    return doc;
}

const GeometryEntry& geometry_entry(const Context& ctx) {
    if (ctx.geometry.empty()) throw UsageError("no geometry selected (use --geometry NAME or [geometry] name)");
    return ctx.registry.find(ctx.geometry);
}

TextOrigin argument(const std::string& name) { return {"argument " + name, 1, 1}; }

std::shared_ptr<const LandmarkSet> landmark_set(const Context& ctx, const GeometryEntry& entry,
                                                const Bifunctional& bifunctional) {
    std::vector<Point> points;
    if (const ConfigValue* list = ctx.config.find("landmarks", "points")) {
        for (const auto& [piece, offset] : split_trimmed(list->text, ';')) {
            const TextOrigin origin{ctx.config.source(), list->line, list->column + offset};
            points.push_back(parse_point_at(piece, bifunctional.m_domain, origin));
        }
    } else {
        for (const std::string& text : entry.default_landmarks) {
            points.push_back(parse_point_at(text, bifunctional.m_domain, {"default landmarks", 1, 1}));
        }
    }
    if (points.empty()) throw UsageError("no landmarks (set [landmarks] points)");
    const long long base = int_at_least(ctx.config, "landmarks", "basepoint", 0, 0);
    if (static_cast<std::size_t>(base) >= points.size()) {
        ctx.config.fail_at(*ctx.config.find("landmarks", "basepoint"), 0,
                           "basepoint index out of range (have " + count(points.size()) + " landmarks)");
    }
    try {
        return std::make_shared<const LandmarkSet>(std::move(points), static_cast<std::size_t>(base));
    } catch (const InvalidPointError& e) {
        if (const ConfigValue* list = ctx.config.find("landmarks", "points")) ctx.config.fail_at(*list, 0, e.what());
        throw;
    }
}

// "a,b,c,d" through the geometry's action, or "shift:v1,v2,..." for a Euclidean translation.
GroupElement parse_group(const std::string& text, const Bifunctional& bifunctional, const TextOrigin& origin) {
    try {
        if (text.rfind("shift:", 0) == 0) {
            if (bifunctional.m_domain.encoding != Encoding::real_vector) {
                throw UsageError("shift: needs a geometry whose points are real vectors");
            }
            RealVector offset;
            try {
                offset = parse_vector(text.substr(6));
            } catch (const TextError& e) {
                throw TextError(6 + e.offset, e.what());
            }
            bifunctional.m_domain.validate(offset);
            return geometry::euclidean_translation(offset);
        }
        const std::vector<double> data = parse_number_list(text);
        if (!bifunctional.action_builder) {
            throw UnsupportedOperationError("geometry '" + bifunctional.name + "' has no group action");
        }
        return bifunctional.action_builder(data);
    } catch (const TextError& e) {
        throw ParseError(origin.source, origin.line, origin.column + e.offset, e.what());
    } catch (const InvalidPointError& e) {
        throw ParseError(origin.source, origin.line, origin.column, std::string("invalid group element: ") + e.what());
    }
}


Point scale_point(const Point& p, double factor) {
    struct Visitor {
        double f;
        Point operator()(const RealVector& v) const {
            RealVector out(v);
            for (double& x : out) x *= f;
            return out;
        }
        Point operator()(const Complex& z) const { return z * f; }
        Point operator()(const FacetIndex&) const { throw UnsupportedOperationError("cannot scale a facet index"); }
        Point operator()(const SlopeCurrent& c) const { return c.scaled(f); }
        Point operator()(const RealParameter& t) const { return RealParameter{t.value * f}; }
    };
    return std::visit(Visitor{factor}, p);
}

Point shift_point(const Point& p, const Point& step, double k) {
    if (const auto* v = std::get_if<RealVector>(&p)) {
        const auto& s = std::get<RealVector>(step);
        RealVector out(*v);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += k * s[i];
        return out;
    }
    if (const auto* z = std::get_if<Complex>(&p)) return *z + k * std::get<Complex>(step);
    if (const auto* t = std::get_if<RealParameter>(&p)) return RealParameter{t->value + k * std::get<RealParameter>(step).value};
    throw UnsupportedOperationError("shift: sequences need vectors, complex numbers or real parameters");
}

struct Sequence {
    std::function<Point(std::size_t)> at;
    std::string description;
};

// const:P | scale:P:F | shift:P:V | orbit:GROUP:P, all points in N.
Sequence parse_sequence(const std::string& spec, const Bifunctional& bifunctional) {
    const TextOrigin origin = argument("SEQ");
    const std::size_t colon = spec.find(':');
    if (colon == std::string::npos) {
        throw ParseError(origin.source, 1, 1, "expected const:P, scale:P:F, shift:P:V or orbit:GROUP:P");
    }
    const std::string kind = spec.substr(0, colon);
    const std::string rest = spec.substr(colon + 1);
    auto at = [&](std::size_t offset) { return TextOrigin{origin.source, 1, colon + 2 + offset}; };
    const Domain& domain = bifunctional.n_domain;

    if (kind == "const") {
        const Point p = parse_point_at(rest, domain, at(0));
        return {[p](std::size_t) { return p; }, "constant " + to_string(p)};
    }
    if (kind == "scale" || kind == "shift") {
        const std::size_t split = rest.rfind(':');
        if (split == std::string::npos) throw ParseError(origin.source, 1, spec.size() + 1, "expected ':' and a step");
        const Point p = parse_point_at(rest.substr(0, split), domain, at(0));
        const std::string step_text = rest.substr(split + 1);
        if (kind == "scale") {
            double factor = 0.0;
            try {
                factor = parse_number(step_text);
            } catch (const TextError& e) {
                throw ParseError(origin.source, 1, at(split + 1).column + e.offset, e.what());
            }
            scale_point(p, 1.0); // rejects facet indices up front
            return {[p, factor](std::size_t k) { return scale_point(p, std::pow(factor, static_cast<double>(k))); },
                    "scale " + to_string(p) + " by " + format_number(factor) + "^k"};
        }
        Domain step_domain = domain;
        step_domain.extra_check = nullptr; // steps need not be valid points themselves
        const Point step = parse_point_at(step_text, step_domain, at(split + 1));
        shift_point(p, step, 0.0);
        return {[p, step](std::size_t k) { return shift_point(p, step, static_cast<double>(k)); },
                "shift " + to_string(p) + " by k * " + to_string(step)};
    }
    if (kind == "orbit") {
        const std::size_t split = rest.find(':');
        if (split == std::string::npos) throw ParseError(origin.source, 1, spec.size() + 1, "expected ':' and a point");
        const GroupElement g = parse_group(rest.substr(0, split), bifunctional, at(0));
        const Point p = parse_point_at(rest.substr(split + 1), domain, at(split + 1));
        return {[g, p](std::size_t k) { return g.act_n(p, static_cast<int>(k)); },
                "orbit of " + to_string(p) + " under " + rest.substr(0, split)};
    }
    throw ParseError(origin.source, 1, 1, "unknown sequence kind '" + kind + "' (const, scale, shift, orbit)");
}


void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw UsageError("cannot write '" + path + "'");
    file << text;
    if (!file) throw UsageError("failed writing '" + path + "'");
}

std::string resolve_format(const Context& ctx, const std::string& fallback) {
    return ctx.format.empty() ? fallback : ctx.format;
}


int cmd_distance(const Context& ctx, const std::string& x_text, const std::string& y_text, std::ostringstream& out) {
    const GeometryEntry& entry = geometry_entry(ctx);
    const Bifunctional bifunctional = entry.build(ctx.config);
    const Point x = parse_point_at(x_text, bifunctional.m_domain, argument("X"));
    const Point y = parse_point_at(y_text, bifunctional.m_domain, argument("Y"));
    const SearchConfig search = search_config(ctx);
    const DistanceEstimate estimate = distance(bifunctional, x, y, search);
    std::vector<std::pair<std::string, double>> extras;
    if (entry.distance_extras) extras = entry.distance_extras(x, y, estimate.lower_bound, search);

    const std::optional<double> gap = estimate.oracle_gap();
    if (resolve_format(ctx, "json") == "json") {
        Json doc = header("distance", ctx);
        doc["x"] = to_string(x);
        doc["y"] = to_string(y);
        doc["lower_bound"] = number(estimate.lower_bound);
        doc["oracle"] = estimate.oracle_value ? number(*estimate.oracle_value) : Json(nullptr);
        doc["gap"] = gap ? number(*gap) : Json(nullptr);
        doc["argmax_witness"] = to_string(estimate.argmax_witness);
        doc["argmax_index"] = estimate.argmax_index;
        doc["iterations"] = estimate.refinement_iterations;
        doc["witness_count"] = estimate.witness_count;
        doc["refinement_supported"] = estimate.refinement_supported;
        doc["stabilized"] = estimate.stabilized;
        doc["search"] = search_json(search);
        for (const auto& [key, value] : extras) doc[key] = number(value);
        out << doc.dump(2) << '\n';
    } else {
        csv_meta(out, "distance", ctx);
        std::vector<std::string> head{"x", "y", "lower_bound", "oracle", "gap", "argmax_witness",
                                      "argmax_index", "iterations", "witness_count", "stabilized"};
        std::vector<std::string> row{to_string(x),
                                     to_string(y),
                                     format_number(estimate.lower_bound),
                                     estimate.oracle_value ? format_number(*estimate.oracle_value) : "",
                                     gap ? format_number(*gap) : "",
                                     to_string(estimate.argmax_witness),
                                     count(estimate.argmax_index),
                                     count(estimate.refinement_iterations),
                                     count(estimate.witness_count),
                                     estimate.stabilized ? "true" : "false"};
        for (const auto& [key, value] : extras) {
            head.push_back(key);
            row.push_back(format_number(value));
        }
        csv_row(out, head);
        csv_row(out, row);
    }
    return exit_ok;
}

int cmd_matrix(const Context& ctx, const std::string& points_path, bool symmetrize_flag, std::ostringstream& out) {
    const GeometryEntry& entry = geometry_entry(ctx);
    const Bifunctional bifunctional = entry.build(ctx.config);
    const std::vector<Point> points = load_points_file(points_path, bifunctional.m_domain);
    if (points.empty()) throw UsageError("points file '" + points_path + "' has no points");
    const SearchConfig search = search_config(ctx);
    const double asymmetry_tol = positive(ctx.config, "matrix", "asymmetry_tol", 1e-6);
    const bool symmetrized = symmetrize_flag || ctx.config.get_bool("matrix", "symmetrize", false);

    const std::size_t n = points.size();
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    std::vector<std::vector<std::size_t>> witnesses(n, std::vector<std::size_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue; // sup of I(x,z) - I(x,z) is exactly 0
            const DistanceEstimate e = distance(bifunctional, points[i], points[j], search);
            d[i][j] = e.lower_bound;
            witnesses[i][j] = e.witness_count;
        }
    }
    struct Flag {
        std::size_t i, j;
        double forward, backward;
    };
    std::vector<Flag> flags;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (std::abs(d[i][j] - d[j][i]) > asymmetry_tol) flags.push_back({i, j, d[i][j], d[j][i]});
        }
    }

    if (resolve_format(ctx, "csv") == "json") {
        Json doc = header("matrix", ctx);
        doc["points"] = Json::array();
        for (const Point& p : points) doc["points"].push_back(to_string(p));
        Json rows = Json::array();
        Json sym = Json::array();
        Json counts = Json::array();
        for (std::size_t i = 0; i < n; ++i) {
            Json row = Json::array();
            Json sym_row = Json::array();
            for (std::size_t j = 0; j < n; ++j) {
                row.push_back(number(d[i][j]));
                sym_row.push_back(number(symmetrize(d[i][j], d[j][i])));
            }
            rows.push_back(row);
            sym.push_back(sym_row);
            counts.push_back(witnesses[i]);
        }
        doc["distances"] = rows;
        if (symmetrized) doc["symmetrized"] = sym;
        doc["witness_counts"] = counts;
        doc["asymmetry_tol"] = number(asymmetry_tol);
        doc["asymmetric_pairs"] = Json::array();
        for (const Flag& f : flags) {
            Json pair;
            pair["from"] = f.i;
            pair["to"] = f.j;
            pair["forward"] = number(f.forward);
            pair["backward"] = number(f.backward);
            doc["asymmetric_pairs"].push_back(pair);
        }
        doc["search"] = search_json(search);
        out << doc.dump(2) << '\n';
        return exit_ok;
    }

    csv_meta(out, "matrix", ctx,
             {{"points", count(n)}, {"asymmetry_tol", format_number(asymmetry_tol)}, {"asymmetric_pairs", count(flags.size())}});
    for (std::size_t i = 0; i < n; ++i) out << "# point " << i << ": " << to_string(points[i]) << '\n';
    for (const Flag& f : flags) {
        out << "# asymmetric: " << f.i << " -> " << f.j << " = " << format_number(f.forward) << ", " << f.j << " -> "
            << f.i << " = " << format_number(f.backward) << '\n';
    }
    std::vector<std::string> head{"block", "from"};
    for (std::size_t j = 0; j < n; ++j) head.push_back(count(j));
    csv_row(out, head);
    auto block = [&](const std::string& name, auto value) {
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<std::string> row{name, count(i)};
            for (std::size_t j = 0; j < n; ++j) row.push_back(value(i, j));
            csv_row(out, row);
        }
    };
    block("directed", [&](std::size_t i, std::size_t j) { return format_number(d[i][j]); });
    if (symmetrized) {
        block("symmetrized", [&](std::size_t i, std::size_t j) { return format_number(symmetrize(d[i][j], d[j][i])); });
    }
    block("witnesses", [&](std::size_t i, std::size_t j) { return count(witnesses[i][j]); });
    return exit_ok;
}

int cmd_boundary(const Context& ctx, const std::string& spec, std::ostringstream& out) {
    const GeometryEntry& entry = geometry_entry(ctx);
    const Bifunctional bifunctional = entry.build(ctx.config);
    const Sequence sequence = parse_sequence(spec, bifunctional);
    const auto landmarks = landmark_set(ctx, entry, bifunctional);
    const double tol = positive(ctx.config, "boundary", "tol", 1e-8);
    const auto k_max = static_cast<std::size_t>(int_at_least(ctx.config, "boundary", "k_max", 60, 1));
    const BoundaryLimit result = boundary_limit(bifunctional, sequence.at, landmarks, tol, k_max);

    if (resolve_format(ctx, "csv") == "json") {
        Json doc = header("boundary", ctx);
        doc["sequence"] = sequence.description;
        doc["landmarks"] = Json::array();
        for (const Point& p : landmarks->points()) doc["landmarks"].push_back(to_string(p));
        doc["landmark_count"] = landmarks->size();
        doc["basepoint"] = landmarks->basepoint_index();
        doc["tol"] = number(tol);
        doc["k_max"] = k_max;
        doc["iterations"] = result.iterations;
        doc["trajectory"] = Json::array();
        for (const auto& values : result.trajectory) {
            Json row = Json::array();
            for (double v : values) row.push_back(number(v));
            doc["trajectory"].push_back(row);
        }
        doc["step_differences"] = Json::array();
        for (double v : result.step_differences) doc["step_differences"].push_back(number(v));
        doc["converged"] = result.converged();
        if (result.limit) {
            Json limit = Json::array();
            for (double v : result.limit->values()) limit.push_back(number(v));
            doc["limit"] = limit;
        } else {
            doc["limit"] = nullptr;
        }
        doc["oscillation"] = number(result.oscillation);
        out << doc.dump(2) << '\n';
    } else {
        csv_meta(out, "boundary", ctx,
                 {{"sequence", sequence.description},
                  {"landmark_count", count(landmarks->size())},
                  {"basepoint", count(landmarks->basepoint_index())},
                  {"tol", format_number(tol)},
                  {"k_max", count(k_max)},
                  {"iterations", count(result.iterations)},
                  {"converged", result.converged() ? "true" : "false"}});
        csv_row(out, {"iterate", "landmark", "point", "value"});
        const auto& points = landmarks->points();
        for (std::size_t k = 0; k < result.trajectory.size(); ++k) {
            for (std::size_t l = 0; l < points.size(); ++l) {
                csv_row(out, {count(k), count(l), to_string(points[l]), format_number(result.trajectory[k][l])});
            }
        }
        if (result.limit) {
            for (std::size_t l = 0; l < points.size(); ++l) {
                csv_row(out, {"limit", count(l), to_string(points[l]), format_number((*result.limit)[l])});
            }
        } else {
            csv_row(out, {"divergent", "", "oscillation", format_number(result.oscillation)});
        }
    }
    return result.converged() ? exit_ok : exit_check_failed;
}

Json translation_json(const TranslationEstimate& estimate, std::size_t witness_count) {
    Json doc;
    doc["method"] = method_name(estimate.method);
    doc["values"] = Json::array();
    for (const auto& [n, v] : estimate.values) doc["values"].push_back(Json::array({n, number(v)}));
    doc["estimate"] = number(estimate.extrapolated);
    doc["gap"] = number(estimate.gap);
    doc["negative_sampled"] = estimate.negative_sampled;
    doc["witness_count"] = witness_count;
    return doc;
}

void translation_csv(std::ostream& out, const TranslationEstimate& estimate, std::size_t witness_count) {
    const std::string method = method_name(estimate.method);
    for (const auto& [n, v] : estimate.values) csv_row(out, {method, std::to_string(n), format_number(v), "", ""});
    csv_row(out, {method, "estimate", format_number(estimate.extrapolated), format_number(estimate.gap),
                  count(witness_count)});
}

int cmd_translation(const Context& ctx, const std::string& group_text, const std::string& x_text,
                    const std::optional<std::string>& y_text, std::ostringstream& out) {
    const GeometryEntry& entry = geometry_entry(ctx);
    const Bifunctional bifunctional = entry.build(ctx.config);
    const GroupElement g = parse_group(group_text, bifunctional, argument("GROUP"));
    const Point x = parse_point_at(x_text, bifunctional.m_domain, argument("X"));
    std::optional<Point> y;
    if (y_text) y = parse_point_at(*y_text, bifunctional.n_domain, argument("Y"));
    const int n = static_cast<int>(int_at_least(ctx.config, "translation", "n", 12, 1));
    const SearchConfig search = search_config(ctx);

    std::size_t witness_count = 0;
    const DistanceMap metric = [&](const Point& a, const Point& b) {
        const DistanceEstimate e = distance(bifunctional, a, b, search);
        witness_count = std::max(witness_count, e.witness_count);
        return e.lower_bound;
    };
    const TranslationEstimate by_metric = translation_length_metric(metric, g, x, iterate_range(n));
    std::optional<TranslationEstimate> by_functional;
    if (y) by_functional = translation_length_functional(bifunctional, g, x, *y, iterate_range(n));

    if (resolve_format(ctx, "json") == "json") {
        Json doc = header("translation", ctx);
        doc["group"] = group_text;
        doc["x"] = to_string(x);
        doc["y"] = y ? Json(to_string(*y)) : Json(nullptr);
        doc["n"] = n;
        doc["metric"] = translation_json(by_metric, witness_count);
        doc["functional"] = by_functional ? translation_json(*by_functional, 1) : Json(nullptr);
        doc["search"] = search_json(search);
        out << doc.dump(2) << '\n';
    } else {
        csv_meta(out, "translation", ctx,
                 {{"group", group_text}, {"x", to_string(x)}, {"y", y ? to_string(*y) : ""}, {"n", std::to_string(n)}});
        csv_row(out, {"method", "n", "value", "gap", "witness_count"});
        translation_csv(out, by_metric, witness_count);
        if (by_functional) translation_csv(out, *by_functional, 1);
    }
    return exit_ok;
}

int cmd_invariance(const Context& ctx, const std::string& group_text, std::ostringstream& out) {
    const GeometryEntry& entry = geometry_entry(ctx);
    const Bifunctional bifunctional = entry.build(ctx.config);
    const GroupElement g = parse_group(group_text, bifunctional, argument("GROUP"));
    if (!entry.sample_m || !entry.sample_n) {
        throw UnsupportedOperationError("geometry '" + entry.name + "' has no random samplers");
    }
    const auto samples = static_cast<std::size_t>(int_at_least(ctx.config, "invariance", "samples", 50, 1));
    const double tol = positive(ctx.config, "invariance", "tol", 1e-9);
    std::mt19937_64 rng(ctx.seed);
    std::vector<std::pair<Point, Point>> pairs;
    for (std::size_t k = 0; k < samples; ++k) {
        Point m = entry.sample_m(bifunctional, rng);
        Point n = entry.sample_n(bifunctional, rng);
        pairs.emplace_back(std::move(m), std::move(n));
    }
    const double defect = invariance_defect(bifunctional, g, pairs);
    const bool passed = defect <= tol;

    if (resolve_format(ctx, "json") == "json") {
        Json doc = header("invariance", ctx);
        doc["group"] = group_text;
        doc["samples"] = samples;
        doc["defect"] = number(defect);
        doc["tol"] = number(tol);
        doc["passed"] = passed;
        out << doc.dump(2) << '\n';
    } else {
        csv_meta(out, "invariance", ctx, {{"group", group_text}});
        csv_row(out, {"samples", "defect", "tol", "passed"});
        csv_row(out, {count(samples), format_number(defect), format_number(tol), passed ? "true" : "false"});
    }
    return passed ? exit_ok : exit_check_failed;
}

struct VerifyFlags {
    std::string only;
    std::string convention;
    std::optional<double> tolerance;
    std::string baseline;
    std::string write_baseline;
    bool timing = false;
};

std::vector<int> parse_only(const std::string& text) {
    std::vector<int> ids;
    const TextOrigin origin = argument("--only");
    for (const auto& [piece, offset] : split_trimmed(text, ',')) {
        double value = 0.0;
        try {
            value = parse_number(piece);
        } catch (const TextError& e) {
            throw ParseError(origin.source, 1, offset + e.offset + 1, e.what());
        }
        if (value != std::floor(value) || value < 1 || value > verify::kCriterionCount) {
            throw ParseError(origin.source, 1, offset + 1,
                             "criterion ids run from 1 to " + std::to_string(verify::kCriterionCount));
        }
        ids.push_back(static_cast<int>(value));
    }
    return ids;
}

int cmd_verify(const Context& ctx, const VerifyFlags& flags, std::ostringstream& out, std::ostream& err) {
    verify::VerifyOptions options;
    if (ctx.seed_given) options.seed = ctx.seed;
    options.only = parse_only(flags.only);
    if (!flags.convention.empty()) options.convention_override = parse_convention(flags.convention);
    if (flags.tolerance) {
        if (!(*flags.tolerance > 0.0)) throw UsageError("--tolerance must be positive");
        options.tolerance_override = flags.tolerance;
    }
    options.baseline_out = flags.write_baseline;
    options.baseline_reference = flags.baseline;
    if (options.baseline_reference.empty() && flags.write_baseline.empty() &&
        std::filesystem::exists(HOROFORGE_E2_BASELINE)) {
        options.baseline_reference = HOROFORGE_E2_BASELINE;
    }

    const std::vector<verify::CriterionResult> results = verify::run_acceptance(options);
    const bool json = resolve_format(ctx, "json") == "json";
    if (!json) {
        std::vector<std::string> head{"id", "name", "passed", "measured", "tolerance", "witness_count",
                                      "landmark_count", "detail"};
        if (flags.timing) head.push_back("seconds");
        csv_row(out, head);
    }
    std::size_t passed = 0;
    for (const verify::CriterionResult& r : results) {
        passed += r.passed ? 1 : 0;
        err << verify::format_line(r) << '\n';
        if (json) {
            Json line;
            line["schema"] = kSchema;
            line["verb"] = "verify";
            line["seed"] = options.seed;
            line["id"] = r.id;
            line["name"] = r.name;
            line["passed"] = r.passed;
            line["measured"] = number(r.measured);
            line["tolerance"] = number(r.tolerance);
            line["witness_count"] = r.witness_count;
            line["landmark_count"] = r.landmark_count;
            line["detail"] = r.detail;
            if (flags.timing) line["seconds"] = number(r.seconds);
            out << line.dump() << '\n';
        } else {
            std::vector<std::string> row{std::to_string(r.id),  r.name, r.passed ? "true" : "false",
                                         format_number(r.measured), format_number(r.tolerance),
                                         count(r.witness_count), count(r.landmark_count), r.detail};
            if (flags.timing) row.push_back(format_number(r.seconds));
            csv_row(out, row);
        }
    }
    err << passed << "/" << results.size() << " criteria passed\n";
    return passed == results.size() ? exit_ok : exit_check_failed;
}

} // namespace

const Config::Schema& config_schema() {
    static const Config::Schema schema{
        {"geometry", {"name", "dim", "polytope", "vertices", "liouville_dirs", "convention"}},
        {"search", {"grid", "steps", "shrink", "restarts"}},
        {"landmarks", {"points", "basepoint"}},
        {"boundary", {"tol", "k_max"}},
        {"translation", {"n"}},
        {"invariance", {"samples", "tol"}},
        {"matrix", {"asymmetry_tol", "symmetrize"}},
        {"run", {"seed", "format", "out"}},
        {"plugin", {"*"}},
    };
    return schema;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const GeometryRegistry& registry) {
    CLI::App app{"Distances, horofunctions and translation lengths from bifunctionals.", "horoforge"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals globals;
    std::string geometries;
    for (const std::string& name : registry.names()) geometries += (geometries.empty() ? "" : ", ") + name;
    app.add_option("--config", globals.config_path, "Config file (sections of key = value lines)");
    app.add_option("--seed", globals.seed, "Seed for witness grids and sampling");
    app.add_option("--out", globals.out_path, "Write the report here instead of stdout");
    app.add_option("--format", globals.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--geometry", globals.geometry, "Geometry name: " + geometries);

    std::string x_text, y_text, points_path, spec, group_text;
    std::optional<std::string> y_optional;
    bool symmetrize_flag = false;
    VerifyFlags verify_flags;

    CLI::App* distance_cmd = app.add_subcommand("distance", "Lower bound for the distance from X to Y");
    distance_cmd->add_option("X", x_text, "Start point")->required();
    distance_cmd->add_option("Y", y_text, "End point")->required();

    CLI::App* matrix_cmd = app.add_subcommand("matrix", "All directed distances between points in a file");
    matrix_cmd->add_option("POINTS", points_path, "One point per line")->required();
    matrix_cmd->add_flag("--symmetrize", symmetrize_flag, "Also emit max(d(x,y), d(y,x))");

    CLI::App* boundary_cmd = app.add_subcommand("boundary", "Horofunction trajectory of a witness sequence");
    boundary_cmd->add_option("SEQ", spec, "const:P | scale:P:F | shift:P:V | orbit:GROUP:P")->required();

    CLI::App* translation_cmd = app.add_subcommand("translation", "Translation length of a group element");
    translation_cmd->add_option("GROUP", group_text, "Matrix entries a,b,c,d or shift:v")->required();
    translation_cmd->add_option("X", x_text, "Basepoint in M")->required();
    translation_cmd->add_option("Y", y_optional, "Witness in N for the functional estimate");

    CLI::App* invariance_cmd = app.add_subcommand("invariance", "Max change of I under a group element");
    invariance_cmd->add_option("GROUP", group_text, "Matrix entries a,b,c,d")->required();

    CLI::App* verify_cmd = app.add_subcommand("verify", "Run the acceptance criteria");
    verify_cmd->add_option("--only", verify_flags.only, "Comma-separated criterion ids");
    verify_cmd->add_option("--convention", verify_flags.convention, "Slope rule for the invariance checks");
    verify_cmd->add_option("--tolerance", verify_flags.tolerance, "Replace every main tolerance");
    verify_cmd->add_option("--baseline", verify_flags.baseline, "Reference CSV for the stored E2 values");
    verify_cmd->add_option("--write-baseline", verify_flags.write_baseline, "Write the achieved E2 values here");
    verify_cmd->add_flag("--timing", verify_flags.timing, "Include run times (output is then not reproducible)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        std::ostringstream diagnostics;
        const int code = app.exit(e, out, diagnostics);
        err << diagnostics.str();
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        Config config = globals.config_path.empty() ? Config() : Config::load(globals.config_path);
        config.require_known(config_schema());

        Context ctx{config, registry, 1, false, "", ""};
        const long long config_seed = int_at_least(config, "run", "seed", 1, 0);
        ctx.seed = globals.seed ? *globals.seed : static_cast<std::uint64_t>(config_seed);
        ctx.seed_given = globals.seed.has_value() || config.has("run", "seed");
        ctx.format = globals.format.empty() ? config.get_string("run", "format", "") : globals.format;
        if (!ctx.format.empty() && ctx.format != "csv" && ctx.format != "json") {
            config.fail_at(*config.find("run", "format"), 0, "format must be csv or json");
        }
        ctx.geometry = globals.geometry.empty() ? config.get_string("geometry", "name", "") : globals.geometry;
        // A config's out path is relative to the config file; a command-line path is taken as given.
        std::string out_path = globals.out_path;
        if (out_path.empty() && config.has("run", "out")) {
            std::filesystem::path path(config.get_string("run", "out", ""));
            if (path.is_relative() && !config.directory().empty()) path = std::filesystem::path(config.directory()) / path;
            out_path = path.string();
        }

        std::ostringstream report;
        int code = exit_ok;
        if (*distance_cmd) {
            code = cmd_distance(ctx, x_text, y_text, report);
        } else if (*matrix_cmd) {
            code = cmd_matrix(ctx, points_path, symmetrize_flag, report);
        } else if (*boundary_cmd) {
            code = cmd_boundary(ctx, spec, report);
        } else if (*translation_cmd) {
            code = cmd_translation(ctx, group_text, x_text, y_optional, report);
        } else if (*invariance_cmd) {
            code = cmd_invariance(ctx, group_text, report);
        } else if (*verify_cmd) {
            code = cmd_verify(ctx, verify_flags, report, err);
        }
        emit(report.str(), out_path, out);
        return code;
    } catch (const ParseError& e) {
        err << "horoforge: " << e.what() << '\n';
    } catch (const UsageError& e) {
        err << "horoforge: " << e.what() << '\n';
    } catch (const DomainMismatchError& e) {
        err << "horoforge: geometry mismatch: " << e.what() << '\n';
    } catch (const Error& e) {
        err << "horoforge: error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        err << "horoforge: unexpected error: " << e.what() << '\n';
    }
    return exit_usage;
}

} // namespace horoforge::cli
