#pragma once
////////////////////////////////////////////////////////////////////////////////
// material.hpp
////////////////////////////////////////////////////////////////////////////////
/*! @file
//  Three-dimensional constitutive layer for thin nematic-elastomer sheets and
//  bilayers: prescribed director textures, the spontaneous strain they induce,
//  the trace-formula energy density and its second differential at identity.
//
//  Units: energies per volume in units of mu; lengths in units of h0.
*/
////////////////////////////////////////////////////////////////////////////////

#include "ribbonlab/linalg.hpp"

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <variant>

namespace ribbonlab::material {

// Energy value used when det F <= 0. Minimizers compare against it, so it is a
// value and not an exception.
inline constexpr double kInfiniteEnergy = std::numeric_limits<double>::infinity();

inline bool is_infinite_energy(double e) { return e == kInfiniteEnergy; }

struct VolumetricLaw {
    std::function<double(double)> value;
    double second_derivative_at_one;
};

struct MaterialParams {
    double mu     = 1.0;      // shear modulus
    double wvol2  = 6.0 / 7;  // W''_vol(1); default gives gamma = 0.3
    double alpha0 = 1.0;      // activation amplitude (dimensionless)
    double h0     = 1.0;      // reference thickness
    double c_vol  = 1.5 / 7;  // coefficient of c (t^2 - 1 - 2 log t)
    // When set, replaces the default volumetric law (and its wvol2 must match).
    std::optional<VolumetricLaw> custom_law;

    // wvol2 / (2 mu + wvol2), strictly inside (0, 1).
    double gamma() const { return wvol2 / (2.0 * mu + wvol2); }
    double activation() const { return alpha0 / h0; }
    double wvol(double t) const;

    // mu, wvol2 derived so that gamma() == gamma and W''_vol(1) == 4 c_vol.
    static MaterialParams from_gamma(double mu, double gamma, double alpha0, double h0);

    // Throws InvalidArgument on non-positive moduli/thickness, negative alpha0,
    // or a default law whose c_vol is inconsistent with wvol2.
    void validate() const;
};

struct Twist {};
struct SplayBend {};
struct ConstantDirector { Vec3 n = Vec3::UnitZ(); };
struct Bilayer {
    Mat3 m1 = Mat3::Zero();  // slope on the top half, x3 in [0, 1/2)
    Mat3 m2 = Mat3::Zero();  // slope on the bottom half, x3 in (-1/2, 0)
};

using Texture = std::variant<Twist, SplayBend, ConstantDirector, Bilayer>;

std::string texture_name(const Texture &texture);
bool has_director(const Texture &texture);
void validate(const Texture &texture);

struct SpontaneousStrain {
    Mat3 C;               // exact spontaneous metric at (x3, h)
    Mat3 B;               // linear-order slope, C = I - 2 h B + R
    double h = 0;
    double remainder = 0; // ||C - (I - 2 h B)||_F

    Mat3 U() const;       // C^{1/2}
    Mat3 U_inverse() const;
    double lambda_min() const; // smallest eigenvalue of U
};

// a^{2/3} n (x) n + a^{-1/3} (I - n (x) n)
Mat3 step_tensor(const Vec3 &n, double a);

// Director at rescaled thickness coordinate x3 in [-1/2, 1/2].
Vec3 director(const Texture &texture, double x3);

// Linear-order activation slope B(x3); units 1/length.
Mat3 activation_slope(const Texture &texture, const MaterialParams &params, double x3);

// Constant K in ||C - I + 2hB|| <= K (h alpha0/h0)^2, checked while the
// activation stays moderate (h alpha0/h0 <= kExpansionCheckLimit).
inline constexpr double kRemainderConstant = 1.0;
inline constexpr double kExpansionCheckLimit = 0.5;

SpontaneousStrain spontaneous_strain(const Texture &texture, const MaterialParams &params,
                                     double x3, double h);

// (mu/2)(|F|^2 - 3 - 2 log det F) + W_vol(det F); kInfiniteEnergy if det F <= 0.
double w0(const Mat3 &F, const MaterialParams &params);

// Rescaled density W_h(x3, F) = W_0(F U^{-1}).
double wh(double x3, const Mat3 &F, const Texture &texture, const MaterialParams &params, double h);
double wh(const SpontaneousStrain &strain, const Mat3 &F, const MaterialParams &params);

// Same density through the trace formula with C^{-1} (no square root); equal to
// wh() for any positive-definite C.
double wh_trace_formula(const SpontaneousStrain &strain, const Mat3 &F, const MaterialParams &params);

// 2 mu |sym M|^2 + W''_vol(1) tr^2 M
double q3(const Mat3 &M, const MaterialParams &params);

// Metric depending only on z3, evaluated in physical coordinates.
using ThicknessMetric = std::function<Mat3(double)>;

// Max |R_ijkl| of the metric on [z_lo, z_hi], by fourth-order central
// differences on `grid` interior samples.
double riemann_defect(const ThicknessMetric &metric, double z_lo, double z_hi, int grid);

// Riemann defect of z -> C_h(z3) over the physical slab (-h/2, h/2).
double riemann_flatness_defect(const Texture &texture, const MaterialParams &params, double h, int grid);

} // namespace ribbonlab::material
