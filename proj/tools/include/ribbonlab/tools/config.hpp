#pragma once
// Run configuration for the ribbonlab command line: a single JSON document,
// overridable by flags. Unknown keys are rejected.

#include "ribbonlab/material.hpp"
#include "ribbonlab/plate.hpp"
#include "ribbonlab/rod.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ribbonlab::tools {

// Axis "MIN:MAX:N"; bounds may carry a trailing k (multiples of the twist
// curvature scale), e.g. "-3k:3k:601".
struct AxisSpec {
    double lo = -3, hi = 3;
    int count = 601;
    bool in_k = true;

    rod::GridAxis resolve(double k) const;
    std::string to_string() const;
};

struct GridSpec {
    AxisSpec alpha, beta;

    std::string to_string() const;
};

struct RunConfig {
    // material
    double mu = 1.0;
    double gamma = 0.3;
    double alpha0 = 1.0;
    double h0 = 1.0;

    // texture
    std::string texture = "twist";
    Vec3 director = Vec3::UnitZ();
    Mat3 m1 = Mat3::Zero(), m2 = Mat3::Zero();

    // domain
    double length = 10.0, width = 1.0, theta = 0.0;

    // numerics
    int quad = 16;              // thickness Gauss points per half (relaxation)
    int plate_quad = 8;         // in-plane Gauss points (plate and 3D energies)
    int thickness_quad = 8;     // thickness Gauss points per half (3D energies)
    double rel_tol = 1e-8;      // 3D quadrature n vs 2n
    int scan_samples = 2000;    // cylinder direction scan
    GridSpec grid;
    std::vector<double> h_list{1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
    int samples = 400;          // trajectory samples
    int n_across = 9;           // ribbon mesh vertices across the width
    double slope_threshold = 0.8;

    // shape
    double flexure = 0.0, torsion = 0.0;
    std::optional<double> from_min_set;

    // verify
    std::uint32_t seed = 20240611;
    std::optional<double> d_branch_ratio;
    std::vector<int> criteria;

    // output
    std::string out;

    material::MaterialParams material() const;
    material::Texture make_texture() const;
    plate::PlateDomain domain() const;

    // Throws Error(Config) on invalid values.
    void validate() const;
};

// Radians, or degrees with a "deg:" prefix.
double parse_angle(const std::string &text);
GridSpec parse_grid(const std::string &text);
std::vector<double> parse_h_list(const std::string &text);

RunConfig config_from_json(const nlohmann::json &doc);
nlohmann::json config_to_json(const RunConfig &config);
RunConfig load_config(const std::string &path);

// Voigt packing (11, 22, 33, 23, 13, 12) of symmetric 3x3 matrices.
std::vector<double> pack_symmetric(const Mat3 &m);
Mat3 unpack_symmetric(const std::vector<double> &v);

} // namespace ribbonlab::tools
