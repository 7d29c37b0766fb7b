#pragma once

#include "horoforge/core/bifunctional.hpp"

#include <cstddef>
#include <cstdint>

namespace horoforge::geometry {

/// Integer 2x2 matrix of determinant 1, acting on the torus Teichmuller space.
struct SL2Z {
    std::int64_t a = 1;
    std::int64_t b = 0;
    std::int64_t c = 0;
    std::int64_t d = 1;

    // Throws InvalidPointError unless ad - bc = 1.
    static SL2Z checked(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d);
    // Entries must be integral (within 1e-9) with determinant 1.
    static SL2Z from_group_data(const GroupData& data);

    SL2Z inverse() const { return {d, -b, -c, a}; }
    SL2Z operator*(const SL2Z& rhs) const;
    SL2Z power(int n) const;
    std::int64_t trace() const { return a + d; }
    bool is_hyperbolic() const { return trace() > 2 || trace() < -2; }
    /// Spectral radius; the dilatation of a hyperbolic element.
    double top_eigenvalue() const;

    friend bool operator==(const SL2Z&, const SL2Z&) = default;
};

/// (a tau + b) / (c tau + d).
Complex mobius(const SL2Z& matrix, Complex tau);

/// Linear rules for carrying a slope (p, q) along with tau -> (a tau + b)/(c tau + d).
enum class SlopeConvention {
    reflected,         // (p, q) -> (a p - b q, -c p + d q), i.e. diag(1,-1) A diag(1,-1)
    direct,            // (p, q) -> A (p, q)
    inverse_transpose, // (p, q) -> A^{-T} (p, q)
    transpose,         // (p, q) -> A^T (p, q)
};

/// The rule under which flat length, extremal length and intersection are all
/// invariant for the Mobius action above; fixed by the invariance property tests.
inline constexpr SlopeConvention kSlopeConvention = SlopeConvention::reflected;

const char* convention_name(SlopeConvention convention);

SlopeCurrent act_on_slopes(const SL2Z& matrix, const SlopeCurrent& current,
                           SlopeConvention convention = kSlopeConvention);

/// Group element acting on torus points by Mobius maps and on slope currents by
/// the given convention. Torus points in N (the E2 model) move by Mobius maps too.
GroupElement sl2z_action(const SL2Z& matrix, SlopeConvention convention = kSlopeConvention);

/// Top of the invariant geodesic of a hyperbolic element, a basepoint on its axis.
Complex axis_apex(const SL2Z& matrix);

/// Hyperbolic distance in the upper half-plane (curvature -1).
double hyperbolic_distance(Complex z1, Complex z2);

/// Sum of w |p + q tau| / sqrt(Im tau): flat length in the unit-area metric.
double torus_flat_length(Complex tau, const SlopeCurrent& current);

/// (total flat length)^2 = (sum of w |p + q tau|)^2 / Im tau.
double torus_extremal_length(Complex tau, const SlopeCurrent& current);

/// Sum over atom pairs of w w' |p q' - q p'|.
double torus_intersection(const SlopeCurrent& first, const SlopeCurrent& second);

/// sqrt(Ext(alpha)) sqrt(Ext(G)) - i(alpha, G); alpha must have exactly one atom.
double minsky_inequality_gap(Complex tau, const SlopeCurrent& alpha, const SlopeCurrent& current);

/// Shortest flat length of a primitive lattice vector.
double torus_systole(Complex tau);

struct LiouvilleFit {
    SlopeCurrent current;
    double residual = 0.0; // max relative error of i(current, .) against flat length on the validation grid
};

inline constexpr std::size_t kDefaultLiouvilleDirections = 64;
inline constexpr std::size_t kLiouvilleValidationDirections = 256;

/// Current on n_dirs directions whose intersection pairing reproduces flat
/// lengths at tau, with weights from nonnegative least squares.
LiouvilleFit liouville_discretize(Complex tau, std::size_t n_dirs = kDefaultLiouvilleDirections);

/// Transports a fit made at tau = i to tau by the unimodular map taking the
/// unit circle to the flat-length ellipse of tau. Same weights, moved atoms.
SlopeCurrent liouville_transport(const LiouvilleFit& fit_at_i, Complex tau);

/// Max relative error of i(current, theta) against flat length at tau on a uniform direction grid.
double liouville_residual(Complex tau, const SlopeCurrent& current,
                          std::size_t directions = kLiouvilleValidationDirections);

enum class TorusKind { e1, e2, thurston_like };

/// The torus bifunctionals.
///
/// e1: M = torus points, N = unit-weight slopes, I = (1/2) log Ext_tau(slope); oracle (1/2) d_H.
/// e2: M = torus points seen through their discretized Liouville currents, N = torus points,
///     I(X, Z) = (1/2) log Ext_Z(L_X). No closed form.
/// thurston_like: I = log of flat length; oracle (1/2) d_H.
Bifunctional make_torus_bifunctional(TorusKind kind, std::size_t liouville_dirs = kDefaultLiouvilleDirections);

} // namespace horoforge::geometry
