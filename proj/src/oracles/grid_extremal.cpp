#include "horoforge/oracles/grid_extremal.hpp"

#include "horoforge/core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

namespace horoforge::oracles {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Step {
    int a;
    int b;
    int dphi;
    int dpsi;
    double length; // |a + b tau| / n
};

// Coordinates adapted to slope (p, q): phi = s i - r j advances by n along one
// period of the slope, psi = p j - q i is transverse. Inverse: i = p phi + r psi, j = q phi + s psi.
struct SlopeFrame {
    int p;
    int q;
    int r;
    int s;
    int max_dphi;
    std::vector<Step> steps; // steps with dphi >= 1
};

const std::vector<std::pair<int, int>>& stencil() {
    static const std::vector<std::pair<int, int>> directions = [] {
        std::vector<std::pair<int, int>> out;
        for (int a = -2; a <= 2; ++a) {
            for (int b = -2; b <= 2; ++b) {
                if ((a != 0 || b != 0) && std::gcd(a, b) == 1) out.emplace_back(a, b);
            }
        }
        return out;
    }();
    return directions;
}

SlopeFrame make_frame(Complex tau, int p, int q, std::size_t n) {
    // Bezout pair (r, s) with p s - q r = 1, shifted along (p, q) to keep phi steps small.
    int r0 = 0;
    int s0 = 0;
    bool found = false;
    for (int r = -4; r <= 4 && !found; ++r) {
        for (int s = -4; s <= 4 && !found; ++s) {
            if (p * s - q * r == 1) {
                r0 = r;
                s0 = s;
                found = true;
            }
        }
    }
    if (!found) throw Error("grid oracle: no Bezout pair for the slope");
    SlopeFrame best{};
    best.max_dphi = std::numeric_limits<int>::max();
    for (int k = -3; k <= 3; ++k) {
        SlopeFrame frame{p, q, r0 + k * p, s0 + k * q, 0, {}};
        for (auto [a, b] : stencil()) {
            const int dphi = frame.s * a - frame.r * b;
            if (dphi < 1) continue;
            const double length = std::abs(static_cast<double>(a) + static_cast<double>(b) * tau) /
                                  static_cast<double>(n);
            frame.steps.push_back({a, b, dphi, p * b - q * a, length});
            frame.max_dphi = std::max(frame.max_dphi, dphi);
        }
        if (frame.max_dphi < best.max_dphi) best = std::move(frame);
    }
    return best;
}

std::size_t wrap(long long value, std::size_t n) {
    const auto m = static_cast<long long>(n);
    return static_cast<std::size_t>(((value % m) + m) % m);
}

struct PathSearch {
    double length = kInfinity;
    std::vector<std::size_t> usage_nodes; // node index per half-edge end
    std::vector<double> usage_weights;
};

// Cheapest path of one start plus its node usage (each edge gives half its length to each end).
class SlopeSolver {
public:
    SlopeSolver(Complex tau, const GridCurve& curve, std::size_t n, std::size_t window)
        : frame_(make_frame(tau, curve.p, curve.q, n)), n_(n), window_(static_cast<int>(window)) {
        width_ = static_cast<std::size_t>(2 * window_ + 1);
        dist_.resize((n_ + 1) * width_);
        parent_.resize((n_ + 1) * width_);
        frame_node_.resize(n_ * n_);
        for (std::size_t phi = 0; phi < n_; ++phi) {
            for (std::size_t psi = 0; psi < n_; ++psi) {
                const long long i = frame_.p * static_cast<long long>(phi) + frame_.r * static_cast<long long>(psi);
                const long long j = frame_.q * static_cast<long long>(phi) + frame_.s * static_cast<long long>(psi);
                frame_node_[phi * n_ + psi] = wrap(i, n_) * n_ + wrap(j, n_);
            }
        }
        frame_rho_.resize(n_ * n_);
    }

    std::size_t start_count() const { return static_cast<std::size_t>(frame_.max_dphi) * n_; }

    // Gathers the factor into slope coordinates; call before solve().
    void load(const std::vector<double>& rho) {
        for (std::size_t k = 0; k < frame_node_.size(); ++k) frame_rho_[k] = rho[frame_node_[k]];
    }

    // Shortest phi-monotone path from start to start + (n, 0) within the transverse window.
    double solve(std::size_t start) {
        const std::size_t phi0 = start / n_;
        const std::size_t psi0 = start % n_;
        std::fill(dist_.begin(), dist_.end(), kInfinity);
        dist_[index(0, 0)] = 0.0;
        for (std::size_t f = 0; f < n_; ++f) {
            for (int g = -window_; g <= window_; ++g) {
                const double here = dist_[index(f, g)];
                if (here == kInfinity) continue;
                const double rho_here = frame_rho_[cell(phi0 + f, psi0, g)];
                for (std::size_t k = 0; k < frame_.steps.size(); ++k) {
                    const Step& step = frame_.steps[k];
                    const std::size_t nf = f + static_cast<std::size_t>(step.dphi);
                    const int ng = g + step.dpsi;
                    if (nf > n_ || ng < -window_ || ng > window_) continue;
                    const double candidate =
                        here + step.length * 0.5 * (rho_here + frame_rho_[cell(phi0 + nf, psi0, ng)]);
                    double& target = dist_[index(nf, ng)];
                    if (candidate < target) {
                        target = candidate;
                        parent_[index(nf, ng)] = k;
                    }
                }
            }
        }
        return dist_[index(n_, 0)];
    }

    // d length / d rho for the path found by the last solve(), as (node, amount) pairs.
    void path_usage(std::size_t start, std::vector<std::pair<std::size_t, double>>& usage) const {
        usage.clear();
        const std::size_t phi0 = start / n_;
        const std::size_t psi0 = start % n_;
        std::size_t f = n_;
        int g = 0;
        while (f > 0) {
            const Step& step = frame_.steps[parent_[index(f, g)]];
            const std::size_t pf = f - static_cast<std::size_t>(step.dphi);
            const int pg = g - step.dpsi;
            const double half = 0.5 * step.length;
            usage.emplace_back(frame_node_[cell(phi0 + f, psi0, g)], half);
            usage.emplace_back(frame_node_[cell(phi0 + pf, psi0, pg)], half);
            f = pf;
            g = pg;
        }
    }

private:
    std::size_t index(std::size_t f, int g) const { return f * width_ + static_cast<std::size_t>(g + window_); }

    // Frame cell of (phi, psi0 + g) with phi < 3n and |g| <= window < n.
    std::size_t cell(std::size_t phi, std::size_t psi0, int g) const {
        while (phi >= n_) phi -= n_;
        long long psi = static_cast<long long>(psi0) + g;
        if (psi < 0) psi += static_cast<long long>(n_);
        if (psi >= static_cast<long long>(n_)) psi -= static_cast<long long>(n_);
        return phi * n_ + static_cast<std::size_t>(psi);
    }

    SlopeFrame frame_;
    std::size_t n_;
    int window_;
    std::size_t width_ = 0;
    std::vector<double> dist_;
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> frame_node_;
    std::vector<double> frame_rho_;
};

void check_curves(const std::vector<GridCurve>& curves) {
    if (curves.empty()) throw Error("grid oracle: empty multicurve");
    for (const GridCurve& c : curves) {
        if (!is_stencil_direction(c.p, c.q)) {
            throw Error("grid oracle: slope (" + std::to_string(c.p) + "," + std::to_string(c.q) +
                        ") is not a stencil direction");
        }
        if (!(c.w > 0.0)) throw Error("grid oracle: weights must be positive");
    }
}

double area(Complex tau, const std::vector<double>& rho, std::size_t n) {
    double total = 0.0;
    for (double v : rho) total += v * v;
    return tau.imag() * total / static_cast<double>(n * n);
}

// Total weighted length; optionally the softmin supergradient.
// `smoothed` receives the softmin surrogate sum of w (min - T log sum exp(-(l_s - min)/T)).
double weighted_length(std::vector<SlopeSolver>& solvers, const std::vector<GridCurve>& curves,
                       const std::vector<double>& rho, double temperature, std::vector<double>* gradient,
                       double* smoothed = nullptr) {
    double total = 0.0;
    double soft_total = 0.0;
    std::vector<std::vector<std::pair<std::size_t, double>>> per_start;
    for (std::size_t c = 0; c < solvers.size(); ++c) {
        SlopeSolver& solver = solvers[c];
        const std::size_t starts = solver.start_count();
        std::vector<double> lengths(starts);
        if (gradient != nullptr) per_start.assign(starts, {});
        solver.load(rho);
        for (std::size_t s = 0; s < starts; ++s) {
            lengths[s] = solver.solve(s);
            if (gradient != nullptr) solver.path_usage(s, per_start[s]);
        }
        const double shortest = *std::min_element(lengths.begin(), lengths.end());
        total += curves[c].w * shortest;
        if (gradient == nullptr) continue;

        const double scale = temperature * shortest;
        std::vector<double> weights(starts);
        double normalizer = 0.0;
        for (std::size_t s = 0; s < starts; ++s) {
            weights[s] = scale > 0.0 ? std::exp(-(lengths[s] - shortest) / scale) : (lengths[s] == shortest);
            normalizer += weights[s];
        }
        soft_total += curves[c].w * (shortest - scale * std::log(normalizer));
        for (std::size_t s = 0; s < starts; ++s) {
            const double share = curves[c].w * weights[s] / normalizer;
            if (share < 1e-12) continue;
            for (const auto& [node, amount] : per_start[s]) (*gradient)[node] += share * amount;
        }
    }
    if (smoothed != nullptr) *smoothed = soft_total;
    return total;
}

std::vector<double> smooth_random_factor(std::size_t n, double amplitude, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> coefficient(-1.0, 1.0);
    struct Mode {
        int kx;
        int ky;
        double c;
        double phase;
    };
    std::vector<Mode> modes;
    for (int kx = -2; kx <= 2; ++kx) {
        for (int ky = -2; ky <= 2; ++ky) {
            if (kx == 0 && ky == 0) continue;
            const double c = coefficient(rng);
            modes.push_back({kx, ky, c, phase(rng)});
        }
    }
    std::vector<double> field(n * n, 0.0);
    double peak = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double v = 0.0;
            for (const Mode& m : modes) {
                const double angle = 2.0 * std::numbers::pi *
                                         (m.kx * static_cast<double>(i) + m.ky * static_cast<double>(j)) /
                                         static_cast<double>(n) +
                                     m.phase;
                v += m.c * std::cos(angle);
            }
            field[i * n + j] = v;
            peak = std::max(peak, std::abs(v));
        }
    }
    for (double& v : field) v = 1.0 + amplitude * v / peak;
    return field;
}

void normalize_to_sphere(std::vector<double>& rho, std::size_t n) {
    double total = 0.0;
    for (double v : rho) total += v * v;
    const double factor = static_cast<double>(n) / std::sqrt(total);
    for (double& v : rho) v *= factor;
}

} // namespace

bool is_stencil_direction(int p, int q) {
    return (p != 0 || q != 0) && std::abs(p) <= 2 && std::abs(q) <= 2 && std::gcd(p, q) == 1;
}

double grid_ratio(Complex tau, const std::vector<GridCurve>& curves, const std::vector<double>& rho, std::size_t n,
                  std::size_t transverse_window) {
    check_curves(curves);
    if (rho.size() != n * n) throw Error("grid oracle: factor has the wrong size");
    std::vector<SlopeSolver> solvers;
    for (const GridCurve& c : curves) solvers.emplace_back(tau, c, n, transverse_window);
    const double length = weighted_length(solvers, curves, rho, 0.0, nullptr);
    return length * length / area(tau, rho, n);
}

GridExtremalResult grid_extremal_length(Complex tau, const std::vector<GridCurve>& curves,
                                        const GridExtremalConfig& config) {
    check_curves(curves);
    if (!(tau.imag() > 0.0)) throw Error("grid oracle: Im(tau) must be positive");
    if (config.n < 8) throw Error("grid oracle: grid too small");
    const std::size_t n = config.n;
    std::vector<SlopeSolver> solvers;
    for (const GridCurve& c : curves) solvers.emplace_back(tau, c, n, config.transverse_window);

    GridExtremalResult result;
    const std::vector<double> flat(n * n, 1.0);
    const double flat_length = weighted_length(solvers, curves, flat, 0.0, nullptr);
    result.flat_ratio = flat_length * flat_length / area(tau, flat, n);

    std::vector<double> rho = smooth_random_factor(n, config.perturbation, config.seed);
    normalize_to_sphere(rho, n);

    // Projected ascent of the smoothed ratio on the sphere sum rho^2 = n^2; the
    // step grows after an accepted move and halves after a rejected one.
    std::vector<double> gradient(n * n, 0.0);
    double smoothed = 0.0;
    // Geometric cooling from the initial to the final softmin temperature.
    auto temperature_at = [&config](std::size_t k) {
        if (config.iterations <= 1) return config.softmin_temperature;
        const double t = static_cast<double>(k) / static_cast<double>(config.iterations - 1);
        return config.softmin_temperature * std::pow(config.final_softmin_temperature / config.softmin_temperature, t);
    };
    double length = weighted_length(solvers, curves, rho, temperature_at(0), &gradient, &smoothed);
    result.initial_ratio = length * length / area(tau, rho, n);
    result.best_ratio = result.initial_ratio;
    result.history.push_back(result.initial_ratio);
    double step = config.step;
    std::vector<double> trial(n * n);
    std::vector<double> trial_gradient(n * n);
    for (std::size_t k = 0; k < config.iterations; ++k) {
        const double temperature = temperature_at(k);
        if (k > 0 && temperature != temperature_at(k - 1)) {
            // The surrogate changed; re-baseline it at the current factor.
            std::fill(gradient.begin(), gradient.end(), 0.0);
            weighted_length(solvers, curves, rho, temperature, &gradient, &smoothed);
        }
        const double radial = std::inner_product(gradient.begin(), gradient.end(), rho.begin(), 0.0) /
                              static_cast<double>(n * n);
        double peak = 0.0;
        for (std::size_t i = 0; i < rho.size(); ++i) peak = std::max(peak, std::abs(gradient[i] - radial * rho[i]));
        if (peak == 0.0) break;
        for (std::size_t i = 0; i < rho.size(); ++i) {
            trial[i] = std::max(0.0, rho[i] + step * (gradient[i] - radial * rho[i]) / peak);
        }
        normalize_to_sphere(trial, n);
        std::fill(trial_gradient.begin(), trial_gradient.end(), 0.0);
        double trial_smoothed = 0.0;
        const double trial_length =
            weighted_length(solvers, curves, trial, temperature, &trial_gradient, &trial_smoothed);
        const double ratio = trial_length * trial_length / area(tau, trial, n);
        result.best_ratio = std::max(result.best_ratio, ratio);
        result.history.push_back(ratio);
        if (trial_smoothed > smoothed) {
            rho.swap(trial);
            gradient.swap(trial_gradient);
            smoothed = trial_smoothed;
            step *= 1.5;
        } else {
            step *= 0.5;
        }
    }
    return result;
}

} // namespace horoforge::oracles
