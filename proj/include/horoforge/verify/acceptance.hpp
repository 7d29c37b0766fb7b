#pragma once

#include "horoforge/geometries/torus.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace horoforge::verify {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    double measured = 0.0;  // worst observed value of the criterion's main quantity
    double tolerance = 0.0; // bound it was compared against
    double seconds = 0.0;
    std::size_t witness_count = 0;  // largest witness set used (0 when not applicable)
    std::size_t landmark_count = 0; // landmarks used (0 when not applicable)
    std::string detail;
};

struct VerifyOptions {
    std::uint64_t seed = 20240611;
    // Negative control: run the invariance checks with another slope rule.
    std::optional<geometry::SlopeConvention> convention_override;
    // Replaces every criterion's main tolerance (expected-fail demonstrations).
    std::optional<double> tolerance_override;
    // Empty: all criteria.
    std::vector<int> only;
    // When set, criterion 11 writes its achieved values here (CSV).
    std::string baseline_out;
    // When set and readable, criterion 11 also fails on drift from these values.
    std::string baseline_reference;
};

inline constexpr int kCriterionCount = 12;

CriterionResult run_criterion(int id, const VerifyOptions& options);

std::vector<CriterionResult> run_acceptance(const VerifyOptions& options);

/// One line: "[PASS] 7 invariance: measured 1.2e-15 <= 1e-09 (0.12 s) detail".
std::string format_line(const CriterionResult& result);

} // namespace horoforge::verify
