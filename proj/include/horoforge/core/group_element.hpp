#pragma once

#include "horoforge/core/point.hpp"

#include <functional>
#include <memory>
#include <string>

namespace horoforge {

/// An invertible transformation acting on both factors of a bifunctional.
///
/// Holds the forward and inverse maps on M and on N. Copies share the
/// underlying maps; elements are immutable once built.
class GroupElement {
public:
    using Map = std::function<Point(const Point&)>;

    GroupElement(std::string label, Map act_m, Map act_n, Map inverse_m, Map inverse_n);

    static GroupElement identity();

    Point act_m(const Point& point) const { return maps_->act_m(point); }
    Point act_n(const Point& point) const { return maps_->act_n(point); }

    /// Applies g^k on M (k may be negative) by repeated application.
    Point act_m(const Point& point, int k) const;
    Point act_n(const Point& point, int k) const;

    GroupElement inverse() const;

    const std::string& label() const noexcept { return label_; }

private:
    struct Maps {
        Map act_m;
        Map act_n;
        Map inverse_m;
        Map inverse_n;
    };

    GroupElement(std::string label, std::shared_ptr<const Maps> maps);

    std::string label_;
    std::shared_ptr<const Maps> maps_;
};

} // namespace horoforge
