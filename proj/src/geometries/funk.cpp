#include "horoforge/geometries/funk.hpp"

#include "horoforge/core/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <numeric>
#include <sstream>

namespace horoforge::geometry {

namespace {

constexpr double kSideTol = 1e-9;

double dot(const RealVector& a, const RealVector& b) { return std::inner_product(a.begin(), a.end(), b.begin(), 0.0); }

// Calls visit(indices) for every k-subset of {0..n-1} in lexicographic order.
template <typename Visit>
void for_each_subset(std::size_t n, std::size_t k, Visit&& visit) {
    if (k > n) return;
    std::vector<std::size_t> indices(k);
    std::iota(indices.begin(), indices.end(), 0);
    while (true) {
        visit(indices);
        std::size_t i = k;
        while (i > 0 && indices[i - 1] == n - k + i - 1) --i;
        if (i == 0) return;
        ++indices[i - 1];
        for (std::size_t j = i; j < k; ++j) indices[j] = indices[j - 1] + 1;
    }
}

bool same_facet(const Facet& a, const Facet& b) {
    double gap = std::abs(a.offset - b.offset);
    for (std::size_t i = 0; i < a.normal.size(); ++i) gap = std::max(gap, std::abs(a.normal[i] - b.normal[i]));
    return gap <= 1e-9;
}

} // namespace

ConvexPolytope::ConvexPolytope(std::vector<RealVector> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.empty()) throw InvalidPointError("polytope: no vertices");
    dimension_ = vertices_.front().size();
    if (dimension_ == 0) throw InvalidPointError("polytope: zero-dimensional vertices");
    for (const RealVector& v : vertices_) {
        if (v.size() != dimension_) throw InvalidPointError("polytope: vertices have different dimensions");
        for (double c : v) {
            if (!std::isfinite(c)) throw InvalidPointError("polytope: non-finite vertex coordinate");
        }
    }
    const auto d = static_cast<Eigen::Index>(dimension_);

    // Every facet hyperplane passes through d affinely independent vertices.
    for_each_subset(vertices_.size(), dimension_, [&](const std::vector<std::size_t>& subset) {
        Eigen::MatrixXd system(d, d + 1);
        for (Eigen::Index r = 0; r < d; ++r) {
            const RealVector& v = vertices_[subset[static_cast<std::size_t>(r)]];
            for (Eigen::Index c = 0; c < d; ++c) system(r, c) = v[static_cast<std::size_t>(c)];
            system(r, d) = -1.0;
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
        const Eigen::MatrixXd kernel = lu.kernel();
        if (kernel.cols() != 1) return;
        Eigen::VectorXd normal = kernel.col(0).head(d);
        double offset = kernel(d, 0);
        const double length = normal.norm();
        if (length < 1e-12) return;
        normal /= length;
        offset /= length;

        int above = 0;
        int below = 0;
        for (const RealVector& v : vertices_) {
            double side = -offset;
            for (Eigen::Index c = 0; c < d; ++c) side += normal(c) * v[static_cast<std::size_t>(c)];
            if (side > kSideTol) ++above;
            if (side < -kSideTol) ++below;
        }
        if (above > 0 && below > 0) return;
        if (above > 0) {
            normal = -normal;
            offset = -offset;
        }
        Facet facet{RealVector(normal.data(), normal.data() + d), offset};
        for (const Facet& existing : facets_) {
            if (same_facet(existing, facet)) return;
        }
        facets_.push_back(std::move(facet));
    });

    RealVector centroid(dimension_, 0.0);
    for (const RealVector& v : vertices_) {
        for (std::size_t i = 0; i < dimension_; ++i) centroid[i] += v[i] / static_cast<double>(vertices_.size());
    }
    if (facets_.size() < dimension_ + 1 || !(interior_margin(centroid) > kSideTol)) {
        throw InvalidPointError("polytope has empty interior");
    }
}

double ConvexPolytope::interior_margin(const RealVector& x) const {
    double margin = std::numeric_limits<double>::infinity();
    for (const Facet& facet : facets_) margin = std::min(margin, facet.offset - dot(facet.normal, x));
    return margin;
}

Bifunctional funk_polytope(const ConvexPolytope& polytope) {
    auto shared = std::make_shared<const ConvexPolytope>(polytope);
    Bifunctional result;
    result.name = "funk";
    result.m_domain.encoding = Encoding::real_vector;
    result.m_domain.dimension = polytope.dimension();
    result.m_domain.label = "polytope interior";
    result.m_domain.extra_check = [shared](const Point& point) {
        if (!(shared->interior_margin(std::get<RealVector>(point)) > 0.0)) {
            throw InvalidPointError("point " + to_string(point) + " is not inside the polytope");
        }
    };
    result.n_domain.encoding = Encoding::facet_index;
    result.n_domain.facet_count = polytope.facets().size();
    result.n_domain.label = "polytope facets";
    result.eval = [shared](const Point& point, const Point& facet_point) {
        const Facet& facet = shared->facets()[std::get<FacetIndex>(facet_point).value];
        return std::log(facet.offset - dot(facet.normal, std::get<RealVector>(point)));
    };
    result.oracle_d_m = [shared](const Point& x, const Point& y) {
        return funk_closed_form(*shared, std::get<RealVector>(x), std::get<RealVector>(y));
    };
    result.witness_grid = [shared](const Point&, const Point&, const SearchConfig&) {
        WitnessSet all;
        all.provenance = WitnessProvenance::grid;
        for (std::size_t i = 0; i < shared->facets().size(); ++i) all.points.emplace_back(FacetIndex{i});
        return all;
    };
    return result;
}

double funk_closed_form(const ConvexPolytope& polytope, const RealVector& x, const RealVector& y) {
    if (x.size() != polytope.dimension() || y.size() != polytope.dimension()) {
        throw DomainMismatchError("funk_closed_form: dimension mismatch");
    }
    if (!(polytope.interior_margin(x) > 0.0) || !(polytope.interior_margin(y) > 0.0)) {
        throw InvalidPointError("funk_closed_form: points must be interior");
    }
    if (x == y) return 0.0;
    RealVector direction(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) direction[i] = y[i] - x[i];

    // Ray x + s (y - x) leaves the polytope at the smallest positive crossing s*.
    // Then |x - a| / |y - a| = s* / (s* - 1).
    double exit = std::numeric_limits<double>::infinity();
    for (const Facet& facet : polytope.facets()) {
        const double speed = dot(facet.normal, direction);
        if (speed <= 0.0) continue;
        exit = std::min(exit, (facet.offset - dot(facet.normal, x)) / speed);
    }
    return std::log(exit / (exit - 1.0));
}

ConvexPolytope load_polytope(std::istream& in) {
    std::vector<RealVector> vertices;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        RealVector vertex;
        std::string token;
        while (fields >> token) {
            std::size_t used = 0;
            double value = 0.0;
            try {
                value = std::stod(token, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != token.size()) {
                throw InvalidPointError("polytope line " + std::to_string(line_number) + ": cannot parse '" + token +
                                        "' as a number");
            }
            vertex.push_back(value);
        }
        if (vertex.empty()) continue;
        if (!vertices.empty() && vertex.size() != vertices.front().size()) {
            throw InvalidPointError("polytope line " + std::to_string(line_number) + ": expected " +
                                    std::to_string(vertices.front().size()) + " coordinates, found " +
                                    std::to_string(vertex.size()));
        }
        vertices.push_back(std::move(vertex));
    }
    return ConvexPolytope(std::move(vertices));
}

ConvexPolytope load_polytope_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open polytope file '" + path + "'");
    return load_polytope(in);
}

} // namespace horoforge::geometry
