#pragma once

#include "horoforge/core/functional_core.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace horoforge {

/// Certified lower bound for d_I(x, y) = sup_z I(x,z) - I(y,z).
///
/// lower_bound is exactly I(x, argmax_witness) - I(y, argmax_witness) as
/// computed in floating point; it is never presented as the distance itself.
struct DistanceEstimate {
    double lower_bound = 0.0;
    Point argmax_witness;
    std::size_t argmax_index = 0;
    std::size_t witness_count = 0;
    std::optional<double> oracle_value;
    std::size_t refinement_iterations = 0;
    bool refinement_supported = true;
    // False when a pattern search ran out of steps while still improving,
    // which is how an unbounded supremum shows up.
    bool stabilized = true;

    std::optional<double> oracle_gap() const {
        if (!oracle_value) return std::nullopt;
        return *oracle_value - lower_bound;
    }
};

/// Exact maximum over a finite witness set; ties go to the smallest index.
DistanceEstimate distance_on_witnesses(const Bifunctional& bifunctional, const Point& x, const Point& y,
                                       const WitnessSet& witnesses);

struct Refinement {
    WitnessSet witnesses;
    DistanceEstimate estimate;
};

/// Coordinate-wise pattern search on the N chart, restarted from the best witnesses.
///
/// The returned set is the input plus the end point of every restart, so the
/// estimate never decreases. Without a chart (discrete N) the input comes back
/// unchanged with refinement_supported = false.
Refinement refine_witnesses(const Bifunctional& bifunctional, const Point& x, const Point& y,
                            const WitnessSet& witnesses, const SearchConfig& config);

/// Grid construction + exact max + refinement; fills oracle_value when available.
DistanceEstimate distance(const Bifunctional& bifunctional, const Point& x, const Point& y,
                          const SearchConfig& config);

/// distance() plus the final witness set, for callers that reuse it.
Refinement distance_with_witnesses(const Bifunctional& bifunctional, const Point& x, const Point& y,
                                   const SearchConfig& config);

inline double symmetrize(double forward, double backward) { return std::max(forward, backward); }

/// I(x, y) - d_W(x, y) for a bifunctional whose factors coincide.
/// Nonpositive whenever I satisfies the triangle inequality; zero for a metric with y in W.
double triangle_deviation(const Bifunctional& bifunctional, const Point& x, const Point& y,
                          const WitnessSet& witnesses);

struct CauchySequence {
    std::function<Point(std::size_t)> points;
    DistanceMap metric;
};

struct CompletionValue {
    double value = 0.0;
    std::size_t index = 0; // index at which successive values first differed by < tol
    bool converged = false;
};

/// Estimates lim_k I(x_k, n) for each witness n.
///
/// Throws NotCauchyError when no tail of x_0..x_{n_max} has symmetric diameter <= tol.
std::vector<CompletionValue> extend_to_completion(const Bifunctional& bifunctional, const CauchySequence& sequence,
                                                  std::size_t n_max, double tol, const std::vector<Point>& witnesses);

} // namespace horoforge
