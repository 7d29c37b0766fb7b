#include "horoforge/core/functional_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace horoforge {

double evaluate(const Bifunctional& bifunctional, const Point& m, const Point& n) {
    bifunctional.m_domain.validate(m);
    bifunctional.n_domain.validate(n);
    const double value = bifunctional.eval(m, n);
    if (!std::isfinite(value)) {
        throw InvalidPointError(bifunctional.name + ": non-finite value at (" + to_string(m) + ", " + to_string(n) +
                                ")");
    }
    return value;
}

namespace {

// Row-major table values[i * witnesses + k] = I(sample[i], witness[k]).
std::vector<double> tabulate(const Bifunctional& bifunctional, const std::vector<Point>& sample,
                             const WitnessSet& witnesses) {
    std::vector<double> values;
    values.reserve(sample.size() * witnesses.points.size());
    for (const Point& m : sample) {
        for (const Point& z : witnesses.points) {
            values.push_back(evaluate(bifunctional, m, z));
        }
    }
    return values;
}

// Max deviation of the differences from their mean.
double spread_about_mean(const std::vector<double>& differences) {
    const double mean =
        std::accumulate(differences.begin(), differences.end(), 0.0) / static_cast<double>(differences.size());
    double worst = 0.0;
    for (double d : differences) {
        worst = std::max(worst, std::abs(d - mean));
    }
    return worst;
}

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t i) {
        while (parent_[i] != i) {
            parent_[i] = parent_[parent_[i]];
            i = parent_[i];
        }
        return i;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

private:
    std::vector<std::size_t> parent_;
};

} // namespace

SeparationReport check_separation(const Bifunctional& bifunctional, const std::vector<Point>& sample_m,
                                  const WitnessSet& witnesses, double tol) {
    if (sample_m.size() < 2) {
        throw Error("check_separation: need at least two sample points");
    }
    if (witnesses.points.empty()) {
        throw Error("check_separation: empty witness set");
    }
    const std::size_t k = witnesses.points.size();
    const std::vector<double> table = tabulate(bifunctional, sample_m, witnesses);

    SeparationReport report;
    report.all_pass = true;
    std::vector<double> differences(k);
    for (std::size_t x = 0; x < sample_m.size(); ++x) {
        for (std::size_t y = 0; y < sample_m.size(); ++y) {
            if (x == y) continue;
            SeparationPair pair{x, y};
            pair.best_difference = -std::numeric_limits<double>::infinity();
            for (std::size_t w = 0; w < k; ++w) {
                differences[w] = table[x * k + w] - table[y * k + w];
                if (differences[w] > pair.best_difference) {
                    pair.best_difference = differences[w];
                    pair.best_witness = w;
                }
            }
            pair.positive_witness = pair.best_difference > tol;
            pair.spread = spread_about_mean(differences);
            pair.non_constant = pair.spread > tol;
            report.all_pass = report.all_pass && pair.positive_witness && pair.non_constant;
            report.pairs.push_back(pair);
        }
    }
    return report;
}

std::vector<std::vector<std::size_t>> quotient_points(const Bifunctional& bifunctional,
                                                      const std::vector<Point>& sample_m,
                                                      const WitnessSet& witnesses, double tol) {
    if (witnesses.points.empty()) {
        throw Error("quotient_points: empty witness set");
    }
    const std::size_t k = witnesses.points.size();
    const std::vector<double> table = tabulate(bifunctional, sample_m, witnesses);

    UnionFind classes(sample_m.size());
    std::vector<double> differences(k);
    for (std::size_t x = 0; x < sample_m.size(); ++x) {
        for (std::size_t y = x + 1; y < sample_m.size(); ++y) {
            for (std::size_t w = 0; w < k; ++w) {
                differences[w] = table[x * k + w] - table[y * k + w];
            }
            if (spread_about_mean(differences) <= tol) {
                classes.unite(x, y);
            }
        }
    }

    std::vector<std::vector<std::size_t>> partition;
    std::vector<std::size_t> slot(sample_m.size(), sample_m.size());
    for (std::size_t i = 0; i < sample_m.size(); ++i) {
        const std::size_t root = classes.find(i);
        if (slot[root] == sample_m.size()) {
            slot[root] = partition.size();
            partition.emplace_back();
        }
        partition[slot[root]].push_back(i);
    }
    return partition;
}

double lipschitz_defect(const Bifunctional& bifunctional, const DistanceMap& distance,
                        const std::vector<std::pair<Point, Point>>& pairs, const WitnessSet& witnesses) {
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& [x, y] : pairs) {
        const double symmetric = std::max(distance(x, y), distance(y, x));
        if (!std::isfinite(symmetric)) {
            throw Error("lipschitz_defect: distance is not finite on a supplied pair");
        }
        for (const Point& z : witnesses.points) {
            const double gap = std::abs(evaluate(bifunctional, x, z) - evaluate(bifunctional, y, z));
            worst = std::max(worst, gap - symmetric);
        }
    }
    return worst;
}

} // namespace horoforge
