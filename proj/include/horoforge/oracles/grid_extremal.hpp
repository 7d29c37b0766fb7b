#pragma once

#include "horoforge/core/point.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace horoforge::oracles {

/// Integer slope with a positive weight; (p, q) must be a stencil direction.
struct GridCurve {
    int p = 1;
    int q = 0;
    double w = 1.0;
};

/// Primitive (a, b) with max(|a|, |b|) <= 2, up to sign.
bool is_stencil_direction(int p, int q);

struct GridExtremalConfig {
    std::size_t n = 64;               // grid is n x n
    std::size_t iterations = 160;
    double perturbation = 0.3;        // amplitude of the smooth random starting factor
    std::uint64_t seed = 1;
    double softmin_temperature = 2e-2;       // relative to the shortest start's length
    double final_softmin_temperature = 2e-3; // cooled geometrically over the iterations
    std::size_t transverse_window = 8;  // max sideways excursion of a path, in grid layers
    double step = 0.1;                  // initial largest change of the factor per ascent step
};

struct GridExtremalResult {
    double best_ratio = 0.0;    // max over visited conformal factors of (sum w l)^2 / area
    double initial_ratio = 0.0; // at the perturbed start
    double flat_ratio = 0.0;    // at the constant factor
    std::vector<double> history;
};

/// Discrete extremal length of a weighted multicurve on the flat torus C / (Z + tau Z).
///
/// The conformal factor lives on the nodes (i + j tau)/n of an n x n grid; an
/// edge along stencil step (a, b) costs |a + b tau|/n times the mean factor of
/// its ends. The length of a slope is the cheapest closed lattice path in its
/// class, the area is (Im tau / n^2) sum rho^2. Starting from a perturbed
/// factor, the ratio is maximized by projected ascent on the sphere
/// sum rho^2 = n^2, using softmin-weighted path usage as the supergradient.
GridExtremalResult grid_extremal_length(Complex tau, const std::vector<GridCurve>& curves,
                                        const GridExtremalConfig& config = {});

/// Ratio for a given factor (row-major, index i * n + j).
double grid_ratio(Complex tau, const std::vector<GridCurve>& curves, const std::vector<double>& rho, std::size_t n,
                  std::size_t transverse_window = 8);

} // namespace horoforge::oracles
