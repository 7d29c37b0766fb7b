#include "horoforge/geometries/torus.hpp"

#include "horoforge/core/errors.hpp"
#include "nnls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <numeric>
#include <string>

namespace horoforge::geometry {

namespace {

constexpr double kPi = std::numbers::pi;

struct Vec2 {
    double x;
    double y;
};

// Inverse of the unimodular map T with flat length at tau equal to |T v|:
// T = [[1, Re tau], [0, Im tau]] / sqrt(Im tau).
Vec2 unit_circle_to_tau_frame(Complex tau, Vec2 v) {
    const double s = std::sqrt(tau.imag());
    return {s * v.x - tau.real() / s * v.y, v.y / s};
}

double cross(Vec2 u, Vec2 v) { return u.x * v.y - u.y * v.x; }

std::string matrix_label(const SL2Z& m) {
    return "[[" + std::to_string(m.a) + "," + std::to_string(m.b) + "],[" + std::to_string(m.c) + "," +
           std::to_string(m.d) + "]]";
}

Domain torus_domain(std::string label) {
    Domain domain;
    domain.encoding = Encoding::complex_upper_half_plane;
    domain.label = std::move(label);
    return domain;
}

Domain slope_domain() {
    Domain domain;
    domain.encoding = Encoding::slope_current;
    domain.label = "slope currents";
    return domain;
}

WitnessChart direction_chart() {
    WitnessChart chart;
    chart.to_coords = [](const Point& point) -> std::optional<std::vector<double>> {
        const auto* current = std::get_if<SlopeCurrent>(&point);
        if (current == nullptr || current->size() != 1) return std::nullopt;
        const SlopeAtom& atom = current->atoms().front();
        return std::vector<double>{std::atan2(atom.q, atom.p)};
    };
    chart.from_coords = [](std::span<const double> coords) -> Point {
        return SlopeCurrent::single(std::cos(coords[0]), std::sin(coords[0]));
    };
    chart.initial_step = kPi / 64.0;
    return chart;
}

WitnessSet direction_grid(const SearchConfig& config) {
    WitnessSet grid;
    grid.provenance = WitnessProvenance::grid;
    const std::size_t count = config.initial_grid_size;
    for (std::size_t k = 0; k < count; ++k) {
        const double theta = kPi * static_cast<double>(k) / static_cast<double>(count);
        grid.points.emplace_back(SlopeCurrent::single(std::cos(theta), std::sin(theta)));
    }
    return grid;
}

// Z-net hugging the boundary: near each boundary point r the height scales with
// (1 + r^2) so every boundary direction is approached at a comparable visual angle.
WitnessSet boundary_net(const SearchConfig& config) {
    WitnessSet grid;
    grid.provenance = WitnessProvenance::grid;
    const std::size_t angles = std::max<std::size_t>(4, config.initial_grid_size / 4);
    for (double height : {1.0, 0.1, 0.01, 0.001}) {
        for (std::size_t k = 0; k < angles; ++k) {
            const double phi = -kPi / 2 + kPi * (static_cast<double>(k) + 0.5) / static_cast<double>(angles);
            const double r = std::tan(phi);
            grid.points.emplace_back(Complex(r, height * (1.0 + r * r)));
        }
    }
    for (double height : {10.0, 100.0, 1000.0}) {
        grid.points.emplace_back(Complex(0.0, height));
    }
    return grid;
}

WitnessChart half_plane_chart() {
    WitnessChart chart;
    chart.to_coords = [](const Point& point) -> std::optional<std::vector<double>> {
        const auto* z = std::get_if<Complex>(&point);
        if (z == nullptr) return std::nullopt;
        return std::vector<double>{z->real(), std::log(z->imag())};
    };
    chart.from_coords = [](std::span<const double> coords) -> Point {
        return Complex(coords[0], std::exp(std::clamp(coords[1], -28.0, 28.0)));
    };
    chart.initial_step = 0.25;
    return chart;
}

std::function<GroupElement(const GroupData&)> sl2z_builder() {
    return [](const GroupData& data) { return sl2z_action(SL2Z::from_group_data(data)); };
}

} // namespace

SL2Z SL2Z::checked(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
    if (a * d - b * c != 1) {
        throw InvalidPointError("matrix [[" + std::to_string(a) + "," + std::to_string(b) + "],[" + std::to_string(c) +
                                "," + std::to_string(d) + "]] is not unimodular (det != 1)");
    }
    return {a, b, c, d};
}

SL2Z SL2Z::from_group_data(const GroupData& data) {
    if (data.size() != 4) {
        throw InvalidPointError("SL(2,Z) element needs 4 entries");
    }
    std::int64_t entries[4];
    for (std::size_t i = 0; i < 4; ++i) {
        const double rounded = std::round(data[i]);
        if (std::abs(rounded - data[i]) > 1e-9) {
            throw InvalidPointError("SL(2,Z) entries must be integers");
        }
        entries[i] = static_cast<std::int64_t>(rounded);
    }
    return checked(entries[0], entries[1], entries[2], entries[3]);
}

SL2Z SL2Z::operator*(const SL2Z& rhs) const {
    return {a * rhs.a + b * rhs.c, a * rhs.b + b * rhs.d, c * rhs.a + d * rhs.c, c * rhs.b + d * rhs.d};
}

SL2Z SL2Z::power(int n) const {
    SL2Z base = n >= 0 ? *this : inverse();
    SL2Z result;
    for (int i = 0; i < std::abs(n); ++i) {
        result = result * base;
    }
    return result;
}

double SL2Z::top_eigenvalue() const {
    const double t = std::abs(static_cast<double>(trace()));
    if (t <= 2.0) return 1.0;
    return (t + std::sqrt(t * t - 4.0)) / 2.0;
}

Complex mobius(const SL2Z& m, Complex tau) {
    const Complex numerator = static_cast<double>(m.a) * tau + static_cast<double>(m.b);
    const Complex denominator = static_cast<double>(m.c) * tau + static_cast<double>(m.d);
    // Im of the image is Im(tau)/|c tau + d|^2; computing it directly keeps full relative precision.
    const double imag = tau.imag() / std::norm(denominator);
    return {(numerator / denominator).real(), imag};
}

const char* convention_name(SlopeConvention convention) {
    switch (convention) {
    case SlopeConvention::reflected:
        return "reflected";
    case SlopeConvention::direct:
        return "direct";
    case SlopeConvention::inverse_transpose:
        return "inverse-transpose";
    case SlopeConvention::transpose:
        return "transpose";
    }
    return "unknown";
}

SlopeCurrent act_on_slopes(const SL2Z& m, const SlopeCurrent& current, SlopeConvention convention) {
    const double a = static_cast<double>(m.a);
    const double b = static_cast<double>(m.b);
    const double c = static_cast<double>(m.c);
    const double d = static_cast<double>(m.d);
    std::vector<SlopeAtom> atoms;
    atoms.reserve(current.size());
    for (const SlopeAtom& atom : current.atoms()) {
        const double p = atom.p;
        const double q = atom.q;
        switch (convention) {
        case SlopeConvention::reflected:
            atoms.push_back({a * p - b * q, -c * p + d * q, atom.w});
            break;
        case SlopeConvention::direct:
            atoms.push_back({a * p + b * q, c * p + d * q, atom.w});
            break;
        case SlopeConvention::inverse_transpose:
            atoms.push_back({d * p - c * q, -b * p + a * q, atom.w});
            break;
        case SlopeConvention::transpose:
            atoms.push_back({a * p + c * q, b * p + d * q, atom.w});
            break;
        }
    }
    return SlopeCurrent(std::move(atoms));
}

GroupElement sl2z_action(const SL2Z& matrix, SlopeConvention convention) {
    auto make_map = [convention](SL2Z m) {
        return [m, convention](const Point& point) -> Point {
            if (const auto* tau = std::get_if<Complex>(&point)) return mobius(m, *tau);
            if (const auto* current = std::get_if<SlopeCurrent>(&point)) return act_on_slopes(m, *current, convention);
            throw DomainMismatchError("SL(2,Z) acts on torus points and slope currents only");
        };
    };
    const SL2Z inverse = matrix.inverse();
    return GroupElement(matrix_label(matrix), make_map(matrix), make_map(matrix), make_map(inverse),
                        make_map(inverse));
}

Complex axis_apex(const SL2Z& m) {
    if (!m.is_hyperbolic() || m.c == 0) {
        throw InvalidPointError("axis_apex: " + matrix_label(m) + " is not hyperbolic");
    }
    // Fixed points solve c t^2 + (d - a) t - b = 0.
    const double a = static_cast<double>(m.a);
    const double b = static_cast<double>(m.b);
    const double c = static_cast<double>(m.c);
    const double d = static_cast<double>(m.d);
    const double discriminant = (d - a) * (d - a) + 4.0 * b * c;
    const double center = (a - d) / (2.0 * c);
    const double radius = std::sqrt(discriminant) / (2.0 * std::abs(c));
    return {center, radius};
}

double hyperbolic_distance(Complex z1, Complex z2) {
    return 2.0 * std::asinh(std::abs(z1 - z2) / (2.0 * std::sqrt(z1.imag() * z2.imag())));
}

double torus_flat_length(Complex tau, const SlopeCurrent& current) {
    double total = 0.0;
    for (const SlopeAtom& atom : current.atoms()) {
        total += atom.w * std::abs(atom.p + atom.q * tau);
    }
    return total / std::sqrt(tau.imag());
}

double torus_extremal_length(Complex tau, const SlopeCurrent& current) {
    double total = 0.0;
    for (const SlopeAtom& atom : current.atoms()) {
        total += atom.w * std::abs(atom.p + atom.q * tau);
    }
    return total * total / tau.imag();
}

double torus_intersection(const SlopeCurrent& first, const SlopeCurrent& second) {
    double total = 0.0;
    for (const SlopeAtom& u : first.atoms()) {
        for (const SlopeAtom& v : second.atoms()) {
            total += u.w * v.w * std::abs(u.p * v.q - u.q * v.p);
        }
    }
    return total;
}

double minsky_inequality_gap(Complex tau, const SlopeCurrent& alpha, const SlopeCurrent& current) {
    if (alpha.size() != 1) {
        throw InvalidPointError("minsky_inequality_gap: alpha must be a single weighted slope");
    }
    return std::sqrt(torus_extremal_length(tau, alpha)) * std::sqrt(torus_extremal_length(tau, current)) -
           torus_intersection(alpha, current);
}

double torus_systole(Complex tau) {
    // Lagrange-Gauss reduction of the lattice Z + tau Z, tracking integer coefficients.
    struct LatticeVector {
        std::int64_t p;
        std::int64_t q;
    };
    auto value = [tau](LatticeVector v) { return static_cast<double>(v.p) + static_cast<double>(v.q) * tau; };
    LatticeVector u{1, 0};
    LatticeVector v{0, 1};
    for (int guard = 0; guard < 200; ++guard) {
        if (std::abs(value(v)) < std::abs(value(u))) std::swap(u, v);
        const Complex zu = value(u);
        const Complex zv = value(v);
        const double ratio = (zu.real() * zv.real() + zu.imag() * zv.imag()) / std::norm(zu);
        const auto m = static_cast<std::int64_t>(std::llround(ratio));
        if (m == 0) break;
        v = {v.p - m * u.p, v.q - m * u.q};
    }
    // In a reduced basis the shortest vector has coefficients of size <= 1; search a margin around that.
    double shortest = std::numeric_limits<double>::infinity();
    for (std::int64_t i = -2; i <= 2; ++i) {
        for (std::int64_t j = -2; j <= 2; ++j) {
            const LatticeVector w{i * u.p + j * v.p, i * u.q + j * v.q};
            if (std::gcd(w.p, w.q) != 1) continue;
            shortest = std::min(shortest, std::abs(value(w)));
        }
    }
    return shortest / std::sqrt(tau.imag());
}

double liouville_residual(Complex tau, const SlopeCurrent& current, std::size_t directions) {
    double worst = 0.0;
    for (std::size_t m = 0; m < directions; ++m) {
        const double psi = kPi * (static_cast<double>(m) + 0.5) / static_cast<double>(directions);
        const SlopeCurrent probe = SlopeCurrent::single(std::cos(psi), std::sin(psi));
        const double target = torus_flat_length(tau, probe);
        worst = std::max(worst, std::abs(torus_intersection(current, probe) / target - 1.0));
    }
    return worst;
}

LiouvilleFit liouville_discretize(Complex tau, std::size_t n_dirs) {
    if (n_dirs < 8) {
        throw InvalidPointError("liouville_discretize: need at least 8 directions");
    }
    if (!(tau.imag() > 0.0)) {
        throw InvalidPointError("liouville_discretize: Im(tau) must be positive");
    }
    // Support and fitting directions are spread uniformly in the frame where the
    // flat-length ellipse of tau is a circle.
    std::vector<Vec2> support(n_dirs);
    for (std::size_t j = 0; j < n_dirs; ++j) {
        const double theta = kPi * static_cast<double>(j) / static_cast<double>(n_dirs);
        support[j] = unit_circle_to_tau_frame(tau, {std::cos(theta), std::sin(theta)});
    }
    const std::size_t fit_count = 4 * n_dirs;
    Eigen::MatrixXd a(static_cast<Eigen::Index>(fit_count), static_cast<Eigen::Index>(n_dirs));
    Eigen::VectorXd b(static_cast<Eigen::Index>(fit_count));
    for (std::size_t k = 0; k < fit_count; ++k) {
        const double phi = kPi * (static_cast<double>(k) + 0.5) / static_cast<double>(fit_count);
        const Vec2 f = unit_circle_to_tau_frame(tau, {std::cos(phi), std::sin(phi)});
        const double target = torus_flat_length(tau, SlopeCurrent::single(f.x, f.y));
        for (std::size_t j = 0; j < n_dirs; ++j) {
            a(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = std::abs(cross(support[j], f)) / target;
        }
        b(static_cast<Eigen::Index>(k)) = 1.0;
    }
    const detail::NnlsResult solution = detail::solve_nnls(a, b);

    LiouvilleFit fit;
    if (!solution.converged || !solution.x.allFinite()) {
        fit.residual = std::numeric_limits<double>::infinity();
        return fit;
    }
    std::vector<SlopeAtom> atoms;
    for (std::size_t j = 0; j < n_dirs; ++j) {
        const double w = solution.x(static_cast<Eigen::Index>(j));
        if (w > 0.0) atoms.push_back({support[j].x, support[j].y, w});
    }
    if (atoms.empty()) {
        fit.residual = std::numeric_limits<double>::infinity();
        return fit;
    }
    fit.current = SlopeCurrent(std::move(atoms));
    fit.residual = liouville_residual(tau, fit.current);
    return fit;
}

SlopeCurrent liouville_transport(const LiouvilleFit& fit_at_i, Complex tau) {
    std::vector<SlopeAtom> atoms;
    atoms.reserve(fit_at_i.current.size());
    for (const SlopeAtom& atom : fit_at_i.current.atoms()) {
        const Vec2 moved = unit_circle_to_tau_frame(tau, {atom.p, atom.q});
        atoms.push_back({moved.x, moved.y, atom.w});
    }
    return SlopeCurrent(std::move(atoms));
}

Bifunctional make_torus_bifunctional(TorusKind kind, std::size_t liouville_dirs) {
    Bifunctional result;
    result.m_domain = torus_domain("torus Teichmuller space");
    result.action_builder = sl2z_builder();

    switch (kind) {
    case TorusKind::e1:
        result.name = "torus-e1";
        result.n_domain = slope_domain();
        result.eval = [](const Point& x, const Point& z) {
            return 0.5 * std::log(torus_extremal_length(std::get<Complex>(x), std::get<SlopeCurrent>(z)));
        };
        result.oracle_d_m = [](const Point& x, const Point& y) {
            return 0.5 * hyperbolic_distance(std::get<Complex>(x), std::get<Complex>(y));
        };
        result.witness_grid = [](const Point&, const Point&, const SearchConfig& config) {
            return direction_grid(config);
        };
        result.chart = direction_chart();
        break;
    case TorusKind::thurston_like:
        result.name = "torus-thurston";
        result.n_domain = slope_domain();
        result.eval = [](const Point& x, const Point& z) {
            return std::log(torus_flat_length(std::get<Complex>(x), std::get<SlopeCurrent>(z)));
        };
        result.oracle_d_m = [](const Point& x, const Point& y) {
            return 0.5 * hyperbolic_distance(std::get<Complex>(x), std::get<Complex>(y));
        };
        result.witness_grid = [](const Point&, const Point&, const SearchConfig& config) {
            return direction_grid(config);
        };
        result.chart = direction_chart();
        break;
    case TorusKind::e2: {
        result.name = "torus-e2";
        result.n_domain = torus_domain("torus Teichmuller space (extremal-length argument)");
        auto reference = std::make_shared<const LiouvilleFit>(liouville_discretize(Complex(0.0, 1.0), liouville_dirs));
        if (!std::isfinite(reference->residual)) {
            throw Error("torus-e2: Liouville fit at i failed");
        }
        result.eval = [reference](const Point& x, const Point& z) {
            const SlopeCurrent current = liouville_transport(*reference, std::get<Complex>(x));
            return 0.5 * std::log(torus_extremal_length(std::get<Complex>(z), current));
        };
        result.witness_grid = [](const Point&, const Point&, const SearchConfig& config) {
            return boundary_net(config);
        };
        result.chart = half_plane_chart();
        break;
    }
    }
    return result;
}

} // namespace horoforge::geometry
