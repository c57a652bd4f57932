#pragma once
// Acceptance suite: one check per criterion, shared by `ribbonlab verify` and
// the acceptance test binary.

#include "ribbonlab/material.hpp"
#include "ribbonlab/relaxation.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ribbonlab::tools {

struct VerifyOptions {
    material::MaterialParams params;
    std::uint32_t seed = 20240611;
    // Replaces the rod D-branch ratio c1/c (negative control for continuity).
    std::optional<double> d_branch_ratio;
    std::vector<int> only; // empty: every criterion
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0;
};

struct VerifyResult {
    std::vector<CriterionResult> criteria;
    std::vector<relaxation::ComparisonReport> comparisons; // reported, never failing

    bool all_pass() const;
};

inline constexpr int kCriterionCount = 10;

const char *criterion_name(int id);
CriterionResult run_criterion(int id, const VerifyOptions &opts);
VerifyResult run_acceptance(const VerifyOptions &opts);

// Pattern search (Hooke-Jeeves) on a convex function of n variables.
struct PatternSearchResult {
    std::vector<double> x;
    double value = 0;
    int evaluations = 0;
};
PatternSearchResult pattern_search(const std::function<double(const std::vector<double> &)> &f,
                                   std::vector<double> x0, double step = 0.5, double min_step = 1e-10,
                                   int max_evaluations = 2'000'000);

// Residual of a bilayer by derivative-free minimization of the thickness
// integral of q2(D + t G + Bcheck(t)) over (D, G).
double bilayer_residual_search(const material::Bilayer &bilayer, const material::MaterialParams &params);

} // namespace ribbonlab::tools
