#pragma once

#include "horoforge/core/functional_core.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace horoforge {

/// Finite set of points of M on which horofunctions are sampled, with a basepoint.
class LandmarkSet {
public:
    // Throws InvalidPointError on duplicate landmarks or a bad basepoint index.
    LandmarkSet(std::vector<Point> points, std::size_t basepoint_index, double equality_tol = 1e-12);

    const std::vector<Point>& points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    std::size_t basepoint_index() const noexcept { return basepoint_index_; }
    const Point& basepoint() const { return points_[basepoint_index_]; }

    /// Index of a landmark equal to point within the construction tolerance.
    std::optional<std::size_t> find(const Point& point) const;

    /// Copy with an extra landmark appended (no-op when already present).
    LandmarkSet with(const Point& point) const;

    friend bool operator==(const LandmarkSet& a, const LandmarkSet& b) {
        return a.basepoint_index_ == b.basepoint_index_ && a.points_ == b.points_;
    }

private:
    std::vector<Point> points_;
    std::size_t basepoint_index_;
    double equality_tol_;
};

enum class HorofunctionSource { witness, boundary_limit, group_translate };

const char* source_name(HorofunctionSource source);

/// Basepoint-normalized sample of x -> I(x, z) - I(b, z) on a landmark set.
///
/// When the horofunction comes from an explicit function of x (a witness, or a
/// translate of one), that function is kept so the horofunction can be
/// re-evaluated off the landmarks; act_horofunction needs it.
class Horofunction {
public:
    using Evaluator = std::function<double(const Point&)>;

    Horofunction(std::shared_ptr<const LandmarkSet> landmarks, std::vector<double> values, HorofunctionSource source,
                 Evaluator unnormalized = {}, std::vector<double> raw = {});

    const LandmarkSet& landmarks() const { return *landmarks_; }
    const std::shared_ptr<const LandmarkSet>& landmark_handle() const noexcept { return landmarks_; }
    const std::vector<double>& values() const noexcept { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    HorofunctionSource source() const noexcept { return source_; }

    bool reevaluatable() const noexcept { return static_cast<bool>(unnormalized_); }
    // Unnormalized value; differs from the normalized function by a constant.
    double evaluate_unnormalized(const Point& x) const;
    // Normalized value at an arbitrary point of M.
    double evaluate(const Point& x) const;
    const Evaluator& unnormalized() const noexcept { return unnormalized_; }

    // Unnormalized landmark values I(p, z), when known; used for exact sup comparisons.
    const std::vector<double>& raw() const noexcept { return raw_; }

    Horofunction with_source(HorofunctionSource source) const;
    Horofunction with_evaluator(Evaluator unnormalized) const;

private:
    std::shared_ptr<const LandmarkSet> landmarks_;
    std::vector<double> values_;
    HorofunctionSource source_;
    Evaluator unnormalized_;
    std::vector<double> raw_;
};

/// l_z on the landmarks; values at the basepoint are exactly 0.
Horofunction horofunction(const Bifunctional& bifunctional, const Point& z,
                          const std::shared_ptr<const LandmarkSet>& landmarks);

/// max over landmarks of |h1 - h2|. Throws LandmarkMismatchError on different landmark sets.
double horo_sup_distance(const Horofunction& a, const Horofunction& b);

struct EmbeddingReport {
    std::vector<Horofunction> horofunctions;
    // Pairs (i, j), i < j, whose horofunctions agree within tol on the landmarks.
    std::vector<std::pair<std::size_t, std::size_t>> collisions;
    bool injective_on_landmarks() const { return collisions.empty(); }
};

EmbeddingReport embed_sample(const Bifunctional& bifunctional, const std::vector<Point>& sample_n,
                             const std::shared_ptr<const LandmarkSet>& landmarks, double tol = 1e-9);

struct BoundaryLimit {
    std::optional<Horofunction> limit; // set when converged; source = boundary_limit
    std::vector<std::vector<double>> trajectory;
    std::vector<double> step_differences; // sup-distance between successive iterates
    std::size_t iterations = 0;
    // Largest successive difference over the last few iterates; 0 when converged early.
    double oscillation = 0.0;
    bool converged() const { return limit.has_value(); }
};

/// Number of consecutive sub-tolerance steps required to declare a limit.
inline constexpr std::size_t kConsecutiveStableSteps = 3;

BoundaryLimit boundary_limit(const Bifunctional& bifunctional, const std::function<Point(std::size_t)>& sequence,
                             const std::shared_ptr<const LandmarkSet>& landmarks, double tol, std::size_t k_max);

struct SupAttainment {
    std::size_t index = 0;
    double value = 0.0;
};

/// argmax over H of h(x) - h(y); x and y must be landmarks.
SupAttainment attain_sup(const std::vector<Horofunction>& horofunctions, const Point& x, const Point& y);

} // namespace horoforge
