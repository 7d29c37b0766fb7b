#pragma once

#include "horoforge/core/bifunctional.hpp"
#include "horoforge/core/errors.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace horoforge {

/// I(m, n) after validating both points against the declared domains.
double evaluate(const Bifunctional& bifunctional, const Point& m, const Point& n);

/// Distance procedure on M; asymmetric in general.
using DistanceMap = std::function<double(const Point&, const Point&)>;

struct SeparationPair {
    std::size_t x_index = 0;
    std::size_t y_index = 0;
    // Some witness gives I(x,z) - I(y,z) > tol.
    bool positive_witness = false;
    // The difference z -> I(x,z) - I(y,z) is not constant within tol.
    bool non_constant = false;
    std::size_t best_witness = 0;
    double best_difference = 0.0;
    double spread = 0.0;
};

struct SeparationReport {
    std::vector<SeparationPair> pairs; // every ordered pair (x, y), x != y index-wise
    bool all_pass = false;
    // Always true: a pass is evidence on the finite witness set, a fail only
    // certifies the witness-restricted problem.
    bool restricted_certificate = true;
};

SeparationReport check_separation(const Bifunctional& bifunctional, const std::vector<Point>& sample_m,
                                  const WitnessSet& witnesses, double tol);

/// Partition of sample indices: x ~ y when I(x,.) - I(y,.) is constant on the
/// witnesses up to tol (best-fit constant = mean of the differences).
std::vector<std::vector<std::size_t>> quotient_points(const Bifunctional& bifunctional,
                                                      const std::vector<Point>& sample_m,
                                                      const WitnessSet& witnesses, double tol);

/// max over pairs and witnesses of |I(x,z) - I(y,z)| - max(d(x,y), d(y,x)).
double lipschitz_defect(const Bifunctional& bifunctional, const DistanceMap& distance,
                        const std::vector<std::pair<Point, Point>>& pairs, const WitnessSet& witnesses);

} // namespace horoforge
