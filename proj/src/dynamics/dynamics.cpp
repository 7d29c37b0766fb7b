#include "horoforge/dynamics/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace horoforge {

namespace {

constexpr double kPeriodTol = 1e-9;

void check_increasing(const std::vector<int>& n_list) {
    if (n_list.empty()) throw Error("translation length: empty iterate list");
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        if (n_list[i] <= 0 || (i > 0 && n_list[i] <= n_list[i - 1])) {
            throw Error("translation length: iterate counts must be positive and strictly increasing");
        }
    }
}

bool any_negative(const std::vector<std::pair<int, double>>& values) {
    return std::any_of(values.begin(), values.end(), [](const auto& v) { return v.second < -1e-12; });
}

struct Orbit {
    std::vector<Horofunction> horofunctions;
    std::optional<std::size_t> period;
    bool escaped = false;
};

Orbit follow(const Bifunctional& bifunctional, const GroupElement& g, bool forward, const Point& start,
             const std::shared_ptr<const LandmarkSet>& landmarks, std::size_t iters) {
    Orbit orbit;
    Point z = start;
    for (std::size_t k = 0; k <= iters; ++k) {
        if (k > 0) {
            try {
                z = forward ? g.act_n(z) : g.inverse().act_n(z);
                bifunctional.n_domain.validate(z);
            } catch (const InvalidPointError&) {
                orbit.escaped = true;
                break;
            }
            if (!orbit.period && approximately_equal(z, start, kPeriodTol)) orbit.period = k;
        }
        orbit.horofunctions.push_back(horofunction(bifunctional, z, landmarks));
    }
    return orbit;
}

// True when the last kConsecutiveStableSteps steps are all below tol.
bool settled(const std::vector<Horofunction>& trajectory, double tol, double& last_step) {
    last_step = 0.0;
    if (trajectory.size() < kConsecutiveStableSteps + 1) return false;
    bool stable = true;
    for (std::size_t s = 0; s < kConsecutiveStableSteps; ++s) {
        const std::size_t k = trajectory.size() - 1 - s;
        const double step = horo_sup_distance(trajectory[k], trajectory[k - 1]);
        if (s == 0) last_step = step;
        stable = stable && step < tol;
    }
    return stable;
}

double spread(const std::vector<Horofunction>& limits) {
    double worst = 0.0;
    for (std::size_t i = 0; i < limits.size(); ++i) {
        for (std::size_t j = i + 1; j < limits.size(); ++j) {
            worst = std::max(worst, horo_sup_distance(limits[i], limits[j]));
        }
    }
    return worst;
}

} // namespace

double invariance_defect(const Bifunctional& bifunctional, const GroupElement& g,
                         const std::vector<std::pair<Point, Point>>& samples) {
    if (samples.empty()) throw Error("invariance_defect: no samples");
    double worst = 0.0;
    for (const auto& [m, n] : samples) {
        const double moved = evaluate(bifunctional, g.act_m(m), g.act_n(n));
        worst = std::max(worst, std::abs(moved - evaluate(bifunctional, m, n)));
    }
    return worst;
}

Horofunction act_horofunction(const GroupElement& g, const Horofunction& h) {
    return act_horofunction(g, h, h.landmark_handle());
}

Horofunction act_horofunction(const GroupElement& g, const Horofunction& h,
                              const std::shared_ptr<const LandmarkSet>& landmarks) {
    if (!h.reevaluatable()) {
        throw UnsupportedOperationError(std::string("cannot translate a horofunction with source '") +
                                        source_name(h.source()) + "': it is known only on its landmarks");
    }
    const GroupElement inverse = g.inverse();
    Horofunction::Evaluator inner = h.unnormalized();
    Horofunction::Evaluator moved = [inverse, inner](const Point& x) { return inner(inverse.act_m(x)); };

    std::vector<double> raw;
    raw.reserve(landmarks->size());
    for (const Point& p : landmarks->points()) raw.push_back(moved(p));
    const double base = raw[landmarks->basepoint_index()];
    std::vector<double> values(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) values[i] = raw[i] - base;
    return Horofunction(landmarks, std::move(values), HorofunctionSource::group_translate, std::move(moved),
                        std::move(raw));
}

double cocycle_defect(const GroupElement& g, const Horofunction& h, int n) {
    if (n < 1) throw Error("cocycle_defect: n must be positive");
    const Point& b = h.landmarks().basepoint();
    const Point inverse_base = g.inverse().act_m(b);
    double sum = 0.0;
    Horofunction translate = h;
    for (int i = 0; i < n; ++i) {
        if (i > 0) translate = act_horofunction(g, translate);
        sum += translate.evaluate(inverse_base);
    }
    return h.evaluate(g.act_m(b, -n)) - sum;
}

const char* method_name(TranslationMethod method) {
    return method == TranslationMethod::metric_subadditive ? "metric-subadditive" : "functional-limsup";
}

std::vector<int> iterate_range(int n) {
    std::vector<int> out(static_cast<std::size_t>(std::max(n, 0)));
    std::iota(out.begin(), out.end(), 1);
    return out;
}

TranslationEstimate translation_length_metric(const DistanceMap& distance, const GroupElement& g, const Point& x,
                                              const std::vector<int>& n_list) {
    check_increasing(n_list);
    TranslationEstimate estimate;
    estimate.method = TranslationMethod::metric_subadditive;
    Point moved = x;
    int reached = 0;
    for (int n : n_list) {
        moved = g.act_m(moved, n - reached);
        reached = n;
        estimate.values.emplace_back(n, distance(moved, x) / n);
    }
    estimate.extrapolated = estimate.values.front().second;
    for (const auto& [n, v] : estimate.values) estimate.extrapolated = std::min(estimate.extrapolated, v);
    if (estimate.values.size() >= 2) {
        estimate.gap = std::abs(estimate.values.back().second - estimate.values[estimate.values.size() - 2].second);
    }
    estimate.negative_sampled = any_negative(estimate.values);
    return estimate;
}

TranslationEstimate translation_length_functional(const Bifunctional& bifunctional, const GroupElement& g,
                                                  const Point& x, const Point& y, const std::vector<int>& n_list) {
    check_increasing(n_list);
    TranslationEstimate estimate;
    estimate.method = TranslationMethod::functional_limsup;
    Point moved = x;
    int reached = 0;
    for (int n : n_list) {
        moved = g.act_m(moved, n - reached);
        reached = n;
        estimate.values.emplace_back(n, evaluate(bifunctional, moved, y) / n);
    }
    const auto& [n_last, v_last] = estimate.values.back();
    if (estimate.values.size() >= 2) {
        const auto& [n_prev, v_prev] = estimate.values[estimate.values.size() - 2];
        estimate.extrapolated = (n_last * v_last - n_prev * v_prev) / (n_last - n_prev);
    } else {
        estimate.extrapolated = v_last;
    }
    estimate.gap = std::abs(estimate.extrapolated - v_last);
    estimate.negative_sampled = any_negative(estimate.values);
    return estimate;
}

NSReport detect_north_south(const Bifunctional& bifunctional, const GroupElement& g, const std::vector<Point>& probes,
                            const std::shared_ptr<const LandmarkSet>& landmarks, std::size_t iters, double tol,
                            const std::vector<int>& translation_n) {
    if (probes.empty()) throw Error("detect_north_south: no probes");
    if (iters < kConsecutiveStableSteps) throw Error("detect_north_south: too few iterations");

    NSReport report;
    const Point inverse_base = g.inverse().act_m(landmarks->basepoint());
    report.landmarks = std::make_shared<const LandmarkSet>(landmarks->with(inverse_base));
    report.inverse_base_index = *report.landmarks->find(inverse_base);

    std::vector<Horofunction> forward_limits;
    std::vector<Horofunction> backward_limits;
    bool all_converged = true;
    for (const Point& z : probes) {
        ProbeReport probe;
        const Orbit forward = follow(bifunctional, g, true, z, report.landmarks, iters);
        const Orbit backward = follow(bifunctional, g, false, z, report.landmarks, iters);
        probe.escaped = forward.escaped || backward.escaped;
        probe.forward_period = forward.period;
        probe.backward_period = backward.period;
        probe.forward_converged =
            !forward.escaped && settled(forward.horofunctions, tol, probe.forward_last_step);
        probe.backward_converged =
            !backward.escaped && settled(backward.horofunctions, tol, probe.backward_last_step);
        // A nontrivial cycle cannot converge even if a step happens to be small.
        if (forward.period && *forward.period > 1) probe.forward_converged = false;
        if (backward.period && *backward.period > 1) probe.backward_converged = false;
        report.periodic = report.periodic || (forward.period && *forward.period > 1);
        all_converged = all_converged && probe.forward_converged && probe.backward_converged;
        if (probe.forward_converged) forward_limits.push_back(forward.horofunctions.back());
        if (probe.backward_converged) backward_limits.push_back(backward.horofunctions.back());
        report.probes.push_back(probe);
    }
    if (!all_converged) return report;

    report.forward_spread = spread(forward_limits);
    report.backward_spread = spread(backward_limits);
    // Limits are only known on the landmarks.
    report.h_plus = Horofunction(report.landmarks, forward_limits.front().values(), HorofunctionSource::boundary_limit,
                                 {}, forward_limits.front().raw());
    report.h_minus = Horofunction(report.landmarks, backward_limits.front().values(),
                                  HorofunctionSource::boundary_limit, {}, backward_limits.front().raw());
    report.separation = horo_sup_distance(*report.h_plus, *report.h_minus);
    report.distinct = report.separation > 10.0 * tol;
    report.declared = report.forward_spread <= tol && report.backward_spread <= tol && report.distinct;
    if (!report.declared) return report;

    TauComparison tau;
    tau.h_plus_at_inverse_base = (*report.h_plus)[report.inverse_base_index];
    tau.minus_h_minus_at_inverse_base = -(*report.h_minus)[report.inverse_base_index];
    const Point& b = report.landmarks->basepoint();
    tau.tau_forward = translation_length_functional(bifunctional, g, b, probes.front(), translation_n);
    tau.tau_backward = translation_length_functional(bifunctional, g.inverse(), b, probes.front(), translation_n);
    tau.plus_gap = std::abs(tau.h_plus_at_inverse_base - tau.tau_backward.extrapolated);
    tau.minus_gap = std::abs(tau.minus_h_minus_at_inverse_base - tau.tau_forward.extrapolated);
    report.negative_tau = tau.tau_forward.negative_sampled || tau.tau_backward.negative_sampled ||
                          tau.tau_forward.extrapolated < -tol || tau.tau_backward.extrapolated < -tol;
    report.tau = std::move(tau);
    return report;
}

} // namespace horoforge
