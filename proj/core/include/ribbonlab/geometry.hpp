#pragma once
// Kinematic reconstruction of ribbon shapes from flexure/torsion rates, rolled
// cylinders, discrete curvature checks and mesh/trajectory export.

#include "ribbonlab/linalg.hpp"
#include "ribbonlab/plate.hpp"
#include "ribbonlab/rod.hpp"

#include <array>
#include <functional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace ribbonlab::geometry {

struct FrameTrajectory {
    std::vector<double> s;
    std::vector<Mat3> R; // columns d1|d2|d3
    std::vector<Vec3> x; // centerline, x' = d1

    std::size_t size() const { return s.size(); }
    double max_drift() const; // max ||R^T R - I||_max
    rod::FrameField frame_field() const { return {s, R}; }
};

using Rate = std::function<double(double)>;

// R' = R Omega with Omega(1,3) = -flexure, Omega(2,3) = -torsion, Omega(1,2) = 0,
// sampled at n points of [-length/2, length/2], x(-length/2) = 0.
// Constant rates: every sample is the exact flow from R0.
FrameTrajectory integrate_frame(double flexure, double torsion, const Mat3 &R0, double length, int n_samples);
// Variable rates: per-step exponential with midpoint rates.
FrameTrajectory integrate_frame(const Rate &flexure, const Rate &torsion, const Mat3 &R0, double length,
                                int n_samples);

struct RibbonMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> triangles;
    int n_along = 0, n_across = 0; // vertex (i, j) has index i * n_across + j
    std::vector<std::pair<std::string, std::string>> metadata;

    int index(int i, int j) const { return i * n_across + j; }
    double area() const;
    double min_triangle_area() const;
};

// y(s, t) = x(s) + t d2(s), t in [-width/2, width/2]; normals toward d3.
// Self-intersection is not checked.
RibbonMesh ribbon_mesh(const FrameTrajectory &traj, double width, int n_across);

// The strip of `domain` rolled by the cylindrical isometry (phi, kappa).
RibbonMesh cylinder_mesh(double phi, double kappa, const plate::PlateDomain &domain, int n_along, int n_across);

struct RecoveredRates {
    std::vector<double> s;
    std::vector<double> flexure, torsion, inplane;
};

RecoveredRates recover_rates(const FrameTrajectory &traj);

// 2 pi minus the incident triangle angles; NaN at boundary vertices.
std::vector<double> angle_defects(const RibbonMesh &mesh);
double max_interior_angle_defect(const RibbonMesh &mesh);

void write_obj(std::ostream &out, const RibbonMesh &mesh);
void write_trajectory_csv(std::ostream &out, const FrameTrajectory &traj);

} // namespace ribbonlab::geometry
