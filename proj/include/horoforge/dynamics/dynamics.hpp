#pragma once

#include "horoforge/horo/horospace.hpp"
#include "horoforge/metric/metric_engine.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

namespace horoforge {

/// max over samples of |I(g m, g n) - I(m, n)|.
double invariance_defect(const Bifunctional& bifunctional, const GroupElement& g,
                         const std::vector<std::pair<Point, Point>>& samples);

/// (g h)(x) = h(g^-1 x) - h(g^-1 b), sampled on the landmarks of h.
///
/// Throws UnsupportedOperationError when h has no analytic form (e.g. a limit
/// known only on landmarks).
Horofunction act_horofunction(const GroupElement& g, const Horofunction& h);

/// Same, sampled on another landmark set.
Horofunction act_horofunction(const GroupElement& g, const Horofunction& h,
                              const std::shared_ptr<const LandmarkSet>& landmarks);

/// h(g^-n b) - sum_{i<n} (g^i h)(g^-1 b); vanishes for re-evaluatable h up to rounding.
double cocycle_defect(const GroupElement& g, const Horofunction& h, int n);

enum class TranslationMethod { metric_subadditive, functional_limsup };

const char* method_name(TranslationMethod method);

struct TranslationEstimate {
    std::vector<std::pair<int, double>> values; // (n, quantity / n)
    double extrapolated = 0.0;
    // Uncertainty: last-two difference (metric) or |extrapolated - last value| (functional).
    double gap = 0.0;
    TranslationMethod method = TranslationMethod::metric_subadditive;
    // Some sampled value was negative beyond rounding.
    bool negative_sampled = false;
};

/// d(g^n x, x) / n for each n; extrapolated = min over n, which is the limit for subadditive sequences.
TranslationEstimate translation_length_metric(const DistanceMap& distance, const GroupElement& g, const Point& x,
                                              const std::vector<int>& n_list);

/// I(g^n x, y) / n for each n.
///
/// The limsup is estimated from the last two terms: if v_n = tau + C/n then
/// (n v_n - m v_m)/(n - m) = tau, which removes the basepoint offset that makes
/// the last value converge only like 1/n.
TranslationEstimate translation_length_functional(const Bifunctional& bifunctional, const GroupElement& g,
                                                  const Point& x, const Point& y, const std::vector<int>& n_list);

/// 1, 2, ..., n.
std::vector<int> iterate_range(int n);

struct ProbeReport {
    bool forward_converged = false;
    bool backward_converged = false;
    double forward_last_step = 0.0;
    double backward_last_step = 0.0;
    // Smallest k >= 1 with g^k z = z (within 1e-9), when found.
    std::optional<std::size_t> forward_period;
    std::optional<std::size_t> backward_period;
    // The orbit left the N domain (e.g. a witness sent to infinity).
    bool escaped = false;
};

struct TauComparison {
    double h_plus_at_inverse_base = 0.0;        // h_plus(g^-1 b)
    double minus_h_minus_at_inverse_base = 0.0; // -h_minus(g^-1 b)
    TranslationEstimate tau_forward;            // tau_I(g)
    TranslationEstimate tau_backward;           // tau_I(g^-1)
    double plus_gap = 0.0;                      // |h_plus(g^-1 b) - tau_I(g^-1)|
    double minus_gap = 0.0;                     // |-h_minus(g^-1 b) - tau_I(g)|
};

struct NSReport {
    std::shared_ptr<const LandmarkSet> landmarks; // input landmarks plus g^-1 b
    std::size_t inverse_base_index = 0;
    std::vector<ProbeReport> probes;
    std::optional<Horofunction> h_plus;
    std::optional<Horofunction> h_minus;
    double forward_spread = 0.0; // max pairwise sup distance among forward limits
    double backward_spread = 0.0;
    double separation = 0.0; // horo_sup_distance(h_plus, h_minus) when both exist
    bool distinct = false;   // separation > 10 tol
    bool periodic = false;   // some probe orbit is finite
    bool declared = false;
    std::optional<TauComparison> tau;
    bool negative_tau = false;
};

/// Iterates z -> g z and z -> g^-1 z on each probe and looks for common
/// attracting/repelling horofunctions.
///
/// A probe converges when its last kConsecutiveStableSteps successive
/// horofunctions differ by less than tol. North-south dynamics is declared when
/// all probes converge both ways, the forward limits agree within tol, the
/// backward limits agree within tol, and the two limits are more than 10 tol apart.
/// When declared, the limits are compared against tau_I estimated from x = b,
/// y = first probe over translation_n.
NSReport detect_north_south(const Bifunctional& bifunctional, const GroupElement& g, const std::vector<Point>& probes,
                            const std::shared_ptr<const LandmarkSet>& landmarks, std::size_t iters, double tol,
                            const std::vector<int>& translation_n = iterate_range(12));

} // namespace horoforge
