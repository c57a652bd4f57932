#pragma once
// One-dimensional limit for narrow strips cut at angle theta from a twist
// sheet: piecewise density in flexure alpha = d1'.d3 and torsion
// beta = d2'.d3, its regions, its minimum set, and the frame functional.

#include "ribbonlab/linalg.hpp"
#include "ribbonlab/material.hpp"
#include "ribbonlab/relaxation.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace ribbonlab::rod {

struct RodDensity {
    double theta = 0;
    double k = 0;       // (6/pi^2)(alpha0/h0)
    double a_theta = 1; // cos 2 theta
    double b_theta = 0; // sin 2 theta
    double gamma = 0.3;
    double mu = 1.0;
    double beta_T = 0;
    // Override of the D-branch ratio c1/c (default 1/(1+gamma)); negative controls only.
    std::optional<double> d_branch_ratio;

    static RodDensity from_plate_model(const relaxation::PlateModel &twist_model, double theta);
    static RodDensity make(double theta, const material::MaterialParams &params = {});

    double ratio() const { return d_branch_ratio.value_or(1.0 / (1.0 + gamma)); }
    // R_theta^T Abar_T R_theta.
    Mat2 rotated_target() const;
    // k [[-a, b], [b, a]]
    Mat2 printed_rotated_target() const;
};

enum class RodRegion { D, U, V };

const char *to_string(RodRegion region);

RodRegion classify(double alpha, double beta, const RodDensity &density);

// Branch formulas evaluated without classification.
double d_branch(double alpha, double beta, const RodDensity &density);
double u_branch(double alpha, double beta, const RodDensity &density);
double v_branch(double alpha, double beta, const RodDensity &density); // alpha != 0

// Throws DomainSingularity if (0, beta) falls in the interior of V.
double rod_density(double alpha, double beta, const RodDensity &density);

struct RodMinSet {
    double alpha_lo = 0, alpha_hi = 0;
    double beta = 0;
    double value = 0;

    double midpoint() const { return 0.5 * (alpha_lo + alpha_hi); }
    // t = 0 left endpoint, t = 1 right endpoint.
    double alpha_at(double t) const { return (1 - t) * alpha_lo + t * alpha_hi; }
};

RodMinSet rod_min_set(const RodDensity &density);

// Orthonormal frames (columns d1|d2|d3) sampled at increasing arc coordinates.
struct FrameField {
    std::vector<double> s;
    std::vector<Mat3> frames;

    double length() const { return s.empty() ? 0.0 : s.back() - s.front(); }
    void validate() const;
};

struct FrameRates {
    std::vector<double> flexure; // d1'.d3
    std::vector<double> torsion; // d2'.d3
    std::vector<double> inplane; // d1'.d2
};

// Skew part of R^T R' with R' from three-point differences (centered inside,
// second-order one-sided at the ends).
FrameRates frame_rates(const FrameField &frame);

inline constexpr double kAdmissibilityTol = 1e-8;

// Trapezoidal integral of rod_density(d1'.d3, d2'.d3); throws InvalidFrame if
// |d1'.d2| exceeds kAdmissibilityTol at some sample.
double rod_energy(const FrameField &frame, const RodDensity &density);

struct GridAxis {
    double lo = 0, hi = 0;
    int count = 2;

    double at(int i) const { return count == 1 ? lo : lo + (hi - lo) * i / (count - 1); }
    double step() const { return count == 1 ? 0.0 : (hi - lo) / (count - 1); }
};

struct BruteForceMinimum {
    double value = 0;
    double alpha = 0, beta = 0; // lexicographically smallest minimizer
    std::vector<Vec2> argmin;   // one refined (alpha, beta) per minimizing alpha column
    double grid_min = 0;        // raw grid minimum before refinement
};

// Grid evaluation followed by a Brent line search in beta on every alpha column;
// argmin keeps the columns whose refined minimum is within tol of the best.
BruteForceMinimum rod_min_brute(const RodDensity &density, const GridAxis &alpha, const GridAxis &beta,
                                double tol = 1e-9);
BruteForceMinimum rod_min_brute(const RodDensity &density, int grid = 601);

// Fraction of grid alpha values inside [alpha_lo, alpha_hi] that belong to argmin.
double min_set_coverage(const BruteForceMinimum &brute, const RodMinSet &predicted, const GridAxis &alpha);

void write_density_csv(std::ostream &out, const RodDensity &density, const GridAxis &alpha, const GridAxis &beta);

} // namespace ribbonlab::rod
