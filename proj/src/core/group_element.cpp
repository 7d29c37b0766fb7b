#include "horoforge/core/group_element.hpp"

#include <utility>

namespace horoforge {

GroupElement::GroupElement(std::string label, Map act_m, Map act_n, Map inverse_m, Map inverse_n)
    : label_(std::move(label)),
      maps_(std::make_shared<const Maps>(
          Maps{std::move(act_m), std::move(act_n), std::move(inverse_m), std::move(inverse_n)})) {}

GroupElement::GroupElement(std::string label, std::shared_ptr<const Maps> maps)
    : label_(std::move(label)), maps_(std::move(maps)) {}

GroupElement GroupElement::identity() {
    auto same = [](const Point& p) { return p; };
    return GroupElement("identity", same, same, same, same);
}

Point GroupElement::act_m(const Point& point, int k) const {
    Point current = point;
    const Map& step = k >= 0 ? maps_->act_m : maps_->inverse_m;
    for (int i = 0; i < (k >= 0 ? k : -k); ++i) {
        current = step(current);
    }
    return current;
}

Point GroupElement::act_n(const Point& point, int k) const {
    Point current = point;
    const Map& step = k >= 0 ? maps_->act_n : maps_->inverse_n;
    for (int i = 0; i < (k >= 0 ? k : -k); ++i) {
        current = step(current);
    }
    return current;
}

GroupElement GroupElement::inverse() const {
    auto swapped = std::make_shared<const Maps>(
        Maps{maps_->inverse_m, maps_->inverse_n, maps_->act_m, maps_->act_n});
    std::string label = label_;
    if (label.size() > 3 && label.ends_with("^-1")) {
        label.resize(label.size() - 3);
    } else if (label != "identity") {
        label += "^-1";
    }
    return GroupElement(std::move(label), std::move(swapped));
}

} // namespace horoforge
