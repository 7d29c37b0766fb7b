#include "horoforge/geometries/euclidean.hpp"

#include "horoforge/core/errors.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace horoforge::geometry {

namespace {

double norm(const RealVector& v) { return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0)); }

double distance_between(const RealVector& a, const RealVector& b) {
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        total += d * d;
    }
    return std::sqrt(total);
}

RealVector difference(const RealVector& a, const RealVector& b) {
    RealVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

Domain vector_domain(std::size_t dim, std::string label) {
    Domain domain;
    domain.encoding = Encoding::real_vector;
    domain.dimension = dim;
    domain.label = std::move(label);
    return domain;
}

WitnessChart vector_chart() {
    WitnessChart chart;
    chart.to_coords = [](const Point& point) -> std::optional<std::vector<double>> {
        const auto* v = std::get_if<RealVector>(&point);
        if (v == nullptr) return std::nullopt;
        return *v;
    };
    chart.from_coords = [](std::span<const double> coords) -> Point { return RealVector(coords.begin(), coords.end()); };
    chart.initial_step = 0.1;
    return chart;
}

RealVector random_gaussian(std::mt19937_64& rng, std::size_t dim) {
    std::normal_distribution<double> normal;
    RealVector v(dim);
    for (double& c : v) c = normal(rng);
    return v;
}

RealVector apply(const std::vector<double>& matrix, const RealVector& v) {
    const std::size_t dim = v.size();
    RealVector out(dim, 0.0);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) out[r] += matrix[r * dim + c] * v[c];
    }
    return out;
}

std::vector<double> transpose(std::size_t dim, const std::vector<double>& matrix) {
    std::vector<double> out(matrix.size());
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) out[c * dim + r] = matrix[r * dim + c];
    }
    return out;
}

} // namespace

Bifunctional euclidean_inner(std::size_t dim) {
    if (dim == 0) throw InvalidPointError("euclidean_inner: dimension must be positive");
    Bifunctional result;
    result.name = "euclidean";
    result.m_domain = vector_domain(dim, "R^" + std::to_string(dim));
    result.n_domain = vector_domain(dim, "nonzero directions in R^" + std::to_string(dim));
    result.n_domain.extra_check = [](const Point& point) {
        if (norm(std::get<RealVector>(point)) == 0.0) {
            throw InvalidPointError("euclidean witness must be a nonzero vector");
        }
    };
    result.eval = [](const Point& x, const Point& u) {
        const auto& xv = std::get<RealVector>(x);
        const auto& uv = std::get<RealVector>(u);
        return std::inner_product(xv.begin(), xv.end(), uv.begin(), 0.0) / norm(uv);
    };
    result.oracle_d_m = [](const Point& x, const Point& y) {
        return distance_between(std::get<RealVector>(x), std::get<RealVector>(y));
    };
    result.witness_grid = [dim](const Point& x, const Point& y, const SearchConfig& config) {
        WitnessSet grid;
        grid.provenance = WitnessProvenance::grid;
        const RealVector direction = difference(std::get<RealVector>(x), std::get<RealVector>(y));
        const double length = norm(direction);
        if (length > 0.0) {
            RealVector unit = direction;
            for (double& c : unit) c /= length;
            grid.points.emplace_back(std::move(unit));
        }
        std::mt19937_64 rng(config.seed);
        while (grid.points.size() < config.initial_grid_size + (length > 0.0 ? 1 : 0)) {
            RealVector v = random_gaussian(rng, dim);
            const double n = norm(v);
            if (n == 0.0) continue;
            for (double& c : v) c /= n;
            grid.points.emplace_back(std::move(v));
        }
        return grid;
    };
    result.chart = vector_chart();
    result.action_builder = [dim](const GroupData& data) { return euclidean_rotation(dim, data); };
    return result;
}

Bifunctional euclidean_metric(std::size_t dim) {
    if (dim == 0) throw InvalidPointError("euclidean_metric: dimension must be positive");
    Bifunctional result;
    result.name = "euclidean-metric";
    result.m_domain = vector_domain(dim, "R^" + std::to_string(dim));
    result.n_domain = result.m_domain;
    result.eval = [](const Point& x, const Point& z) {
        return distance_between(std::get<RealVector>(x), std::get<RealVector>(z));
    };
    result.oracle_d_m = result.eval;
    result.witness_grid = [dim](const Point& x, const Point& y, const SearchConfig& config) {
        WitnessSet grid;
        grid.provenance = WitnessProvenance::grid;
        grid.points.push_back(x);
        grid.points.push_back(y);
        std::mt19937_64 rng(config.seed);
        for (std::size_t k = 0; k < config.initial_grid_size; ++k) {
            grid.points.emplace_back(random_gaussian(rng, dim));
        }
        return grid;
    };
    result.chart = vector_chart();
    result.action_builder = [dim](const GroupData& data) { return euclidean_rotation(dim, data); };
    return result;
}

GroupElement euclidean_rotation(std::size_t dim, const std::vector<double>& matrix) {
    if (matrix.size() != dim * dim) {
        throw InvalidPointError("euclidean rotation needs " + std::to_string(dim * dim) + " entries");
    }
    const std::vector<double> inverse = transpose(dim, matrix);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            double entry = 0.0;
            for (std::size_t k = 0; k < dim; ++k) entry += matrix[r * dim + k] * inverse[k * dim + c];
            if (std::abs(entry - (r == c ? 1.0 : 0.0)) > 1e-9) {
                throw InvalidPointError("euclidean rotation: matrix is not orthogonal");
            }
        }
    }
    auto make = [](std::vector<double> m) {
        return [m = std::move(m)](const Point& p) -> Point { return apply(m, std::get<RealVector>(p)); };
    };
    return GroupElement("rotation", make(matrix), make(matrix), make(inverse), make(inverse));
}

GroupElement euclidean_translation(const std::vector<double>& offset) {
    auto shift = [](std::vector<double> v, double sign) {
        return [v = std::move(v), sign](const Point& p) -> Point {
            RealVector out = std::get<RealVector>(p);
            if (out.size() != v.size()) throw DomainMismatchError("translation: dimension mismatch");
            for (std::size_t i = 0; i < out.size(); ++i) out[i] += sign * v[i];
            return out;
        };
    };
    auto identity = [](const Point& p) { return p; };
    return GroupElement("translation", shift(offset, 1.0), identity, shift(offset, -1.0), identity);
}

} // namespace horoforge::geometry
