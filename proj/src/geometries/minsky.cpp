#include "horoforge/geometries/minsky.hpp"

#include "horoforge/core/errors.hpp"
#include "horoforge/geometries/torus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace horoforge::geometry {

namespace {

// Keeps tan() finite at the ends of the chart.
constexpr double kChartLimit = std::numbers::pi / 2 - 1e-12;

Point move_witness(double a, double b, double c, double d, const Point& point) {
    const double boundary = -std::get<RealParameter>(point).value;
    const double denominator = c * boundary + d;
    if (denominator == 0.0) {
        throw InvalidPointError("Mobius map sends the witness to infinity");
    }
    return RealParameter{-(a * boundary + b) / denominator};
}

Point move_point(double a, double b, double c, double d, const Point& point) {
    const Complex z = std::get<Complex>(point);
    const Complex denominator = c * z + d;
    return Complex(((a * z + b) / denominator).real(), z.imag() / std::norm(denominator));
}

} // namespace

Bifunctional minsky_half_plane() {
    Bifunctional result;
    result.name = "minsky";
    result.m_domain.encoding = Encoding::complex_upper_half_plane;
    result.m_domain.label = "upper half-plane";
    result.n_domain.encoding = Encoding::real_parameter;
    result.n_domain.label = "real line";
    result.eval = [](const Point& point, const Point& witness) {
        const Complex z = std::get<Complex>(point);
        const double shifted = std::get<RealParameter>(witness).value + z.real();
        return std::log(z.imag() + shifted * shifted / z.imag());
    };
    result.oracle_d_m = [](const Point& x, const Point& y) {
        return hyperbolic_distance(std::get<Complex>(x), std::get<Complex>(y));
    };
    result.witness_grid = [](const Point&, const Point&, const SearchConfig& config) {
        WitnessSet grid;
        grid.provenance = WitnessProvenance::grid;
        grid.points.emplace_back(RealParameter{0.0});
        const std::size_t count = std::max<std::size_t>(2, config.initial_grid_size / 2);
        for (std::size_t k = 0; k < count; ++k) {
            const double exponent = -3.0 + 15.0 * static_cast<double>(k) / static_cast<double>(count - 1);
            const double t = std::pow(10.0, exponent);
            grid.points.emplace_back(RealParameter{t});
            grid.points.emplace_back(RealParameter{-t});
        }
        return grid;
    };
    // The sup can sit at t = infinity (y far above x), so search in atan(t).
    WitnessChart chart;
    chart.to_coords = [](const Point& point) -> std::optional<std::vector<double>> {
        const auto* t = std::get_if<RealParameter>(&point);
        if (t == nullptr) return std::nullopt;
        return std::vector<double>{std::atan(t->value)};
    };
    chart.from_coords = [](std::span<const double> coords) -> Point {
        return RealParameter{std::tan(std::clamp(coords[0], -kChartLimit, kChartLimit))};
    };
    chart.initial_step = 0.1;
    result.chart = chart;
    result.action_builder = [](const GroupData& data) {
        if (data.size() != 4) throw InvalidPointError("Mobius element needs 4 entries");
        return minsky_action(data[0], data[1], data[2], data[3]);
    };
    return result;
}

GroupElement minsky_action(double a, double b, double c, double d) {
    if (std::abs(a * d - b * c - 1.0) > 1e-9) {
        throw InvalidPointError("Mobius element must have determinant 1");
    }
    std::ostringstream label;
    label.precision(17);
    label << "[[" << a << "," << b << "],[" << c << "," << d << "]]";
    auto on_m = [](double a, double b, double c, double d) {
        return [=](const Point& p) { return move_point(a, b, c, d, p); };
    };
    auto on_n = [](double a, double b, double c, double d) {
        return [=](const Point& p) { return move_witness(a, b, c, d, p); };
    };
    return GroupElement(label.str(), on_m(a, b, c, d), on_n(a, b, c, d), on_m(d, -b, -c, a), on_n(d, -b, -c, a));
}

} // namespace horoforge::geometry
