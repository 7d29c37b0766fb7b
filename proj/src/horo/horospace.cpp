#include "horoforge/horo/horospace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace horoforge {

LandmarkSet::LandmarkSet(std::vector<Point> points, std::size_t basepoint_index, double equality_tol)
    : points_(std::move(points)), basepoint_index_(basepoint_index), equality_tol_(equality_tol) {
    if (points_.empty() || basepoint_index_ >= points_.size()) {
        throw InvalidPointError("landmark set: basepoint index out of range");
    }
    for (std::size_t i = 0; i < points_.size(); ++i) {
        for (std::size_t j = i + 1; j < points_.size(); ++j) {
            if (approximately_equal(points_[i], points_[j], equality_tol_)) {
                throw InvalidPointError("landmark set: landmarks " + std::to_string(i) + " and " + std::to_string(j) +
                                        " coincide (" + to_string(points_[i]) + ")");
            }
        }
    }
}

std::optional<std::size_t> LandmarkSet::find(const Point& point) const {
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (approximately_equal(points_[i], point, equality_tol_)) return i;
    }
    return std::nullopt;
}

LandmarkSet LandmarkSet::with(const Point& point) const {
    if (find(point)) return *this;
    std::vector<Point> extended = points_;
    extended.push_back(point);
    return LandmarkSet(std::move(extended), basepoint_index_, equality_tol_);
}

const char* source_name(HorofunctionSource source) {
    switch (source) {
    case HorofunctionSource::witness:
        return "witness";
    case HorofunctionSource::boundary_limit:
        return "boundary-limit";
    case HorofunctionSource::group_translate:
        return "group-translate";
    }
    return "unknown";
}

Horofunction::Horofunction(std::shared_ptr<const LandmarkSet> landmarks, std::vector<double> values,
                           HorofunctionSource source, Evaluator unnormalized, std::vector<double> raw)
    : landmarks_(std::move(landmarks)), values_(std::move(values)), source_(source),
      unnormalized_(std::move(unnormalized)), raw_(std::move(raw)) {
    if (!landmarks_ || values_.size() != landmarks_->size()) {
        throw LandmarkMismatchError("horofunction: value count does not match the landmark set");
    }
    if (!raw_.empty() && raw_.size() != values_.size()) {
        throw LandmarkMismatchError("horofunction: raw value count does not match the landmark set");
    }
}

double Horofunction::evaluate_unnormalized(const Point& x) const {
    if (!unnormalized_) {
        throw UnsupportedOperationError(std::string("horofunction with source '") + source_name(source_) +
                                        "' has no analytic form");
    }
    return unnormalized_(x);
}

double Horofunction::evaluate(const Point& x) const {
    return evaluate_unnormalized(x) - evaluate_unnormalized(landmarks_->basepoint());
}

Horofunction Horofunction::with_source(HorofunctionSource source) const {
    Horofunction copy = *this;
    copy.source_ = source;
    return copy;
}

Horofunction Horofunction::with_evaluator(Evaluator unnormalized) const {
    Horofunction copy = *this;
    copy.unnormalized_ = std::move(unnormalized);
    return copy;
}

Horofunction horofunction(const Bifunctional& bifunctional, const Point& z,
                          const std::shared_ptr<const LandmarkSet>& landmarks) {
    bifunctional.n_domain.validate(z);
    std::vector<double> raw;
    raw.reserve(landmarks->size());
    for (const Point& p : landmarks->points()) {
        raw.push_back(evaluate(bifunctional, p, z));
    }
    const double base = raw[landmarks->basepoint_index()];
    std::vector<double> values(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        values[i] = raw[i] - base;
    }
    auto evaluator = [bifunctional, z](const Point& x) { return evaluate(bifunctional, x, z); };
    return Horofunction(landmarks, std::move(values), HorofunctionSource::witness, std::move(evaluator),
                        std::move(raw));
}

double horo_sup_distance(const Horofunction& a, const Horofunction& b) {
    if (a.landmark_handle() != b.landmark_handle() && !(a.landmarks() == b.landmarks())) {
        throw LandmarkMismatchError("horo_sup_distance: horofunctions live on different landmark sets");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

EmbeddingReport embed_sample(const Bifunctional& bifunctional, const std::vector<Point>& sample_n,
                             const std::shared_ptr<const LandmarkSet>& landmarks, double tol) {
    EmbeddingReport report;
    report.horofunctions.reserve(sample_n.size());
    for (const Point& z : sample_n) {
        report.horofunctions.push_back(horofunction(bifunctional, z, landmarks));
    }
    for (std::size_t i = 0; i < sample_n.size(); ++i) {
        for (std::size_t j = i + 1; j < sample_n.size(); ++j) {
            if (horo_sup_distance(report.horofunctions[i], report.horofunctions[j]) < tol) {
                report.collisions.emplace_back(i, j);
            }
        }
    }
    return report;
}

BoundaryLimit boundary_limit(const Bifunctional& bifunctional, const std::function<Point(std::size_t)>& sequence,
                             const std::shared_ptr<const LandmarkSet>& landmarks, double tol, std::size_t k_max) {
    BoundaryLimit result;
    std::optional<Horofunction> previous;
    std::size_t stable_steps = 0;
    for (std::size_t k = 0; k <= k_max; ++k) {
        Horofunction current = horofunction(bifunctional, sequence(k), landmarks);
        result.trajectory.push_back(current.values());
        result.iterations = k + 1;
        if (previous) {
            const double step = horo_sup_distance(*previous, current);
            result.step_differences.push_back(step);
            stable_steps = step < tol ? stable_steps + 1 : 0;
            if (stable_steps >= kConsecutiveStableSteps) {
                // The limit is only known on the landmarks, so no analytic form is kept.
                result.limit = Horofunction(landmarks, current.values(), HorofunctionSource::boundary_limit, {},
                                            current.raw());
                return result;
            }
        }
        previous = std::move(current);
    }
    const std::size_t window = std::min<std::size_t>(5, result.step_differences.size());
    for (std::size_t i = result.step_differences.size() - window; i < result.step_differences.size(); ++i) {
        result.oscillation = std::max(result.oscillation, result.step_differences[i]);
    }
    return result;
}

SupAttainment attain_sup(const std::vector<Horofunction>& horofunctions, const Point& x, const Point& y) {
    if (horofunctions.empty()) {
        throw Error("attain_sup: no horofunctions");
    }
    const LandmarkSet& landmarks = horofunctions.front().landmarks();
    const std::optional<std::size_t> xi = landmarks.find(x);
    const std::optional<std::size_t> yi = landmarks.find(y);
    if (!xi || !yi) {
        throw LandmarkMismatchError("attain_sup: x and y must both be landmarks");
    }
    SupAttainment best{0, -std::numeric_limits<double>::infinity()};
    for (std::size_t k = 0; k < horofunctions.size(); ++k) {
        const Horofunction& h = horofunctions[k];
        if (!(h.landmarks() == landmarks)) {
            throw LandmarkMismatchError("attain_sup: horofunctions live on different landmark sets");
        }
        // Raw values reproduce I(x,z) - I(y,z) bit-for-bit; normalized values agree up to rounding.
        const double value = h.raw().empty() ? h[*xi] - h[*yi] : h.raw()[*xi] - h.raw()[*yi];
        if (value > best.value) {
            best = {k, value};
        }
    }
    return best;
}

} // namespace horoforge
