#pragma once

#include "horoforge/core/bifunctional.hpp"

#include <cstddef>

namespace horoforge::geometry {

/// I(x, u) = <x, u / |u|> on R^dim x (R^dim \ {0}); oracle |x - y|.
///
/// Group data is a row-major dim x dim orthogonal matrix acting on both factors.
Bifunctional euclidean_inner(std::size_t dim);

/// I(x, z) = |x - z| on R^dim x R^dim, a metric used as its own bifunctional.
Bifunctional euclidean_metric(std::size_t dim);

/// Orthogonal map acting on both factors. Throws InvalidPointError unless
/// matrix (row-major) is orthogonal within 1e-9.
GroupElement euclidean_rotation(std::size_t dim, const std::vector<double>& matrix);

/// x -> x + v on M, identity on N. It preserves |x - y| but not the inner
/// product bifunctional, so it is only meaningful for metric translation lengths.
GroupElement euclidean_translation(const std::vector<double>& offset);

} // namespace horoforge::geometry
