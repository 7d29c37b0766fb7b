#include "horoforge/metric/metric_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace horoforge {

namespace {

constexpr double kNegativeInfinity = -std::numeric_limits<double>::infinity();

// Difference I(x,z) - I(y,z), or -inf when z leaves the N domain.
double difference_or_floor(const Bifunctional& bifunctional, const Point& x, const Point& y, const Point& z) {
    try {
        bifunctional.n_domain.validate(z);
    } catch (const InvalidPointError&) {
        return kNegativeInfinity;
    }
    const double value = bifunctional.eval(x, z) - bifunctional.eval(y, z);
    return std::isfinite(value) ? value : kNegativeInfinity;
}

struct SearchOutcome {
    std::vector<double> coords;
    double value = kNegativeInfinity;
    std::size_t iterations = 0;
    bool stabilized = false;
};

SearchOutcome pattern_search(const Bifunctional& bifunctional, const WitnessChart& chart, const Point& x,
                             const Point& y, std::vector<double> start, double start_value,
                             const SearchConfig& config) {
    SearchOutcome out{std::move(start), start_value};
    double step = chart.initial_step;
    std::vector<double> trial;
    for (; out.iterations < config.local_search_steps; ++out.iterations) {
        bool improved = false;
        for (std::size_t i = 0; i < out.coords.size() && !improved; ++i) {
            for (const double sign : {1.0, -1.0}) {
                trial = out.coords;
                trial[i] += sign * step;
                const double value = difference_or_floor(bifunctional, x, y, chart.from_coords(trial));
                if (value > out.value) {
                    out.coords = trial;
                    out.value = value;
                    improved = true;
                    break;
                }
            }
        }
        if (!improved) {
            step *= config.step_shrink;
            double scale = 1.0;
            for (double c : out.coords) scale = std::max(scale, std::abs(c));
            if (step < 1e-12 * scale) {
                out.stabilized = true;
                break;
            }
        }
    }
    return out;
}

} // namespace

DistanceEstimate distance_on_witnesses(const Bifunctional& bifunctional, const Point& x, const Point& y,
                                       const WitnessSet& witnesses) {
    if (witnesses.points.empty()) {
        throw Error("distance_on_witnesses: empty witness set");
    }
    bifunctional.m_domain.validate(x);
    bifunctional.m_domain.validate(y);

    DistanceEstimate estimate;
    estimate.lower_bound = kNegativeInfinity;
    estimate.witness_count = witnesses.points.size();
    for (std::size_t k = 0; k < witnesses.points.size(); ++k) {
        const Point& z = witnesses.points[k];
        const double value = evaluate(bifunctional, x, z) - evaluate(bifunctional, y, z);
        if (value > estimate.lower_bound) {
            estimate.lower_bound = value;
            estimate.argmax_index = k;
        }
    }
    estimate.argmax_witness = witnesses.points[estimate.argmax_index];
    return estimate;
}

Refinement refine_witnesses(const Bifunctional& bifunctional, const Point& x, const Point& y,
                            const WitnessSet& witnesses, const SearchConfig& config) {
    config.validate();
    Refinement result{witnesses, distance_on_witnesses(bifunctional, x, y, witnesses)};
    if (!bifunctional.chart) {
        result.estimate.refinement_supported = false;
        return result;
    }
    const WitnessChart& chart = *bifunctional.chart;

    // Rank witnesses by value; ties keep index order.
    std::vector<double> values(witnesses.points.size());
    for (std::size_t k = 0; k < witnesses.points.size(); ++k) {
        values[k] = evaluate(bifunctional, x, witnesses.points[k]) - evaluate(bifunctional, y, witnesses.points[k]);
    }
    std::vector<std::size_t> order(witnesses.points.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });

    std::size_t started = 0;
    for (std::size_t k : order) {
        if (started == config.restarts) break;
        std::optional<std::vector<double>> coords = chart.to_coords(witnesses.points[k]);
        if (!coords) continue;
        ++started;
        SearchOutcome outcome = pattern_search(bifunctional, chart, x, y, std::move(*coords), values[k], config);
        result.estimate.refinement_iterations += outcome.iterations;
        result.estimate.stabilized = result.estimate.stabilized && outcome.stabilized;
        if (outcome.value > values[k]) {
            result.witnesses.points.push_back(chart.from_coords(outcome.coords));
        }
    }
    result.witnesses.provenance = WitnessProvenance::refined;

    const std::size_t iterations = result.estimate.refinement_iterations;
    const bool stabilized = result.estimate.stabilized;
    result.estimate = distance_on_witnesses(bifunctional, x, y, result.witnesses);
    result.estimate.refinement_iterations = iterations;
    result.estimate.stabilized = stabilized;
    return result;
}

Refinement distance_with_witnesses(const Bifunctional& bifunctional, const Point& x, const Point& y,
                                   const SearchConfig& config) {
    config.validate();
    if (!bifunctional.witness_grid) {
        throw UnsupportedOperationError(bifunctional.name + ": no witness grid; use distance_on_witnesses");
    }
    WitnessSet grid = bifunctional.witness_grid(x, y, config);
    grid.provenance = WitnessProvenance::grid;
    Refinement result = refine_witnesses(bifunctional, x, y, grid, config);
    if (bifunctional.has_oracle()) {
        result.estimate.oracle_value = bifunctional.oracle_d_m(x, y);
    }
    return result;
}

DistanceEstimate distance(const Bifunctional& bifunctional, const Point& x, const Point& y,
                          const SearchConfig& config) {
    return distance_with_witnesses(bifunctional, x, y, config).estimate;
}

double triangle_deviation(const Bifunctional& bifunctional, const Point& x, const Point& y,
                          const WitnessSet& witnesses) {
    if (!bifunctional.same_factors()) {
        throw DomainMismatchError(bifunctional.name + ": triangle deviation needs M = N");
    }
    return evaluate(bifunctional, x, y) - distance_on_witnesses(bifunctional, x, y, witnesses).lower_bound;
}

std::vector<CompletionValue> extend_to_completion(const Bifunctional& bifunctional, const CauchySequence& sequence,
                                                  std::size_t n_max, double tol, const std::vector<Point>& witnesses) {
    if (n_max == 0) {
        throw Error("extend_to_completion: need at least two terms");
    }
    std::vector<Point> terms;
    terms.reserve(n_max + 1);
    for (std::size_t k = 0; k <= n_max; ++k) {
        terms.push_back(sequence.points(k));
        bifunctional.m_domain.validate(terms.back());
    }

    // Smallest tail start whose symmetric diameter stays within tol.
    auto symmetric = [&](std::size_t a, std::size_t b) {
        return std::max(sequence.metric(terms[a], terms[b]), sequence.metric(terms[b], terms[a]));
    };
    std::size_t tail = n_max;
    double diameter = 0.0;
    for (std::size_t k = n_max; k-- > 0;) {
        std::size_t worst = k + 1;
        double row = 0.0;
        for (std::size_t l = k + 1; l <= n_max; ++l) {
            const double d = symmetric(k, l);
            if (d > row) {
                row = d;
                worst = l;
            }
        }
        if (std::max(diameter, row) > tol) {
            if (tail == n_max) {
                throw NotCauchyError("sequence is not Cauchy within tol: terms " + std::to_string(k) + " and " +
                                         std::to_string(worst) + " are " + std::to_string(row) + " apart",
                                     k, worst);
            }
            break;
        }
        diameter = std::max(diameter, row);
        tail = k;
    }

    std::vector<CompletionValue> values;
    values.reserve(witnesses.size());
    for (const Point& n : witnesses) {
        CompletionValue out;
        double previous = evaluate(bifunctional, terms[tail], n);
        out.value = previous;
        out.index = tail;
        for (std::size_t k = tail + 1; k <= n_max; ++k) {
            const double current = evaluate(bifunctional, terms[k], n);
            out.value = current;
            out.index = k;
            if (std::abs(current - previous) < tol) {
                out.converged = true;
                break;
            }
            previous = current;
        }
        values.push_back(out);
    }
    return values;
}

} // namespace horoforge
