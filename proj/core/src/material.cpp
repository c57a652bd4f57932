#include "ribbonlab/material.hpp"

#include "ribbonlab/errors.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace ribbonlab::material {

namespace {

constexpr double kUnitTol = 1e-12;
constexpr double kSymTol = 1e-12;
constexpr double kThicknessTol = 1e-12;

template <class... Ts> struct overloaded : Ts... { using Ts::operator()...; };

void check_thickness(double x3) {
    if (!(std::abs(x3) <= 0.5 + kThicknessTol)) {
        std::ostringstream ss;
        ss << "thickness coordinate x3 = " << x3 << " outside [-1/2, 1/2]";
        throw Error(ErrorKind::InvalidArgument, ss.str());
    }
}

double twist_angle(double x3) { return 0.25 * pi + 0.5 * pi * x3; }

} // namespace

double MaterialParams::wvol(double t) const {
    if (custom_law) return custom_law->value(t);
    return c_vol * (t * t - 1.0 - 2.0 * std::log(t));
}

MaterialParams MaterialParams::from_gamma(double mu, double gamma, double alpha0, double h0) {
    MaterialParams p;
    p.mu = mu;
    p.wvol2 = 2.0 * mu * gamma / (1.0 - gamma);
    p.c_vol = p.wvol2 / 4.0;
    p.alpha0 = alpha0;
    p.h0 = h0;
    return p;
}

void MaterialParams::validate() const {
    if (!(mu > 0)) throw Error(ErrorKind::InvalidArgument, "mu must be positive");
    if (!(wvol2 > 0)) throw Error(ErrorKind::InvalidArgument, "W''_vol(1) must be positive");
    if (!(h0 > 0)) throw Error(ErrorKind::InvalidArgument, "h0 must be positive");
    if (!(alpha0 >= 0)) throw Error(ErrorKind::InvalidArgument, "alpha0 must be non-negative");
    if (custom_law) {
        if (std::abs(custom_law->second_derivative_at_one - wvol2) > 1e-12 * wvol2)
            throw Error(ErrorKind::InvalidArgument, "custom volumetric law inconsistent with wvol2");
    } else {
        if (!(c_vol > 0)) throw Error(ErrorKind::InvalidArgument, "c_vol must be positive");
        if (std::abs(4.0 * c_vol - wvol2) > 1e-9 * wvol2)
            throw Error(ErrorKind::InvalidArgument, "default volumetric law requires wvol2 == 4 c_vol");
    }
}

std::string texture_name(const Texture &texture) {
    return std::visit(overloaded{
        [](const Twist &) { return std::string("twist"); },
        [](const SplayBend &) { return std::string("splaybend"); },
        [](const ConstantDirector &) { return std::string("director"); },
        [](const Bilayer &) { return std::string("bilayer"); },
    }, texture);
}

bool has_director(const Texture &texture) { return !std::holds_alternative<Bilayer>(texture); }

void validate(const Texture &texture) {
    if (const auto *cd = std::get_if<ConstantDirector>(&texture)) {
        if (std::abs(cd->n.norm() - 1.0) > kUnitTol)
            throw Error(ErrorKind::InvalidArgument, "constant director must have unit norm");
    }
    if (const auto *bl = std::get_if<Bilayer>(&texture)) {
        if ((bl->m1 - bl->m1.transpose()).cwiseAbs().maxCoeff() > kSymTol ||
            (bl->m2 - bl->m2.transpose()).cwiseAbs().maxCoeff() > kSymTol)
            throw Error(ErrorKind::InvalidArgument, "bilayer slopes must be symmetric");
    }
}

Mat3 SpontaneousStrain::U() const {
    Eigen::SelfAdjointEigenSolver<Mat3> es(C);
    return es.operatorSqrt();
}

Mat3 SpontaneousStrain::U_inverse() const {
    Eigen::SelfAdjointEigenSolver<Mat3> es(C);
    return es.operatorInverseSqrt();
}

double SpontaneousStrain::lambda_min() const {
    Eigen::SelfAdjointEigenSolver<Mat3> es(C, Eigen::EigenvaluesOnly);
    return std::sqrt(es.eigenvalues().minCoeff());
}

Mat3 step_tensor(const Vec3 &n, double a) {
    if (std::abs(n.norm() - 1.0) > kUnitTol)
        throw Error(ErrorKind::InvalidArgument, "step_tensor requires a unit director");
    if (!(a > 0)) throw Error(ErrorKind::InvalidArgument, "step_tensor requires a > 0");
    const Mat3 nn = n * n.transpose();
    return std::cbrt(a * a) * nn + (1.0 / std::cbrt(a)) * (Mat3::Identity() - nn);
}

Vec3 director(const Texture &texture, double x3) {
    check_thickness(x3);
    return std::visit(overloaded{
        [x3](const Twist &) -> Vec3 {
            const double phi = twist_angle(x3);
            return {std::cos(phi), std::sin(phi), 0.0};
        },
        [x3](const SplayBend &) -> Vec3 {
            const double phi = twist_angle(x3);
            return {std::cos(phi), 0.0, std::sin(phi)};
        },
        [](const ConstantDirector &cd) -> Vec3 { return cd.n; },
        [](const Bilayer &) -> Vec3 {
            throw Error(ErrorKind::UnsupportedTexture, "bilayers have no director field");
        },
    }, texture);
}

Mat3 activation_slope(const Texture &texture, const MaterialParams &params, double x3) {
    check_thickness(x3);
    const double k0 = params.activation();
    return std::visit(overloaded{
        [&](const Bilayer &bl) -> Mat3 { return x3 >= 0 ? bl.m1 : bl.m2; },
        [&](const ConstantDirector &cd) -> Mat3 {
            return 0.5 * x3 * k0 * (Mat3::Identity() / 3.0 - cd.n * cd.n.transpose());
        },
        [&](const auto &) -> Mat3 {
            const Vec3 n = director(texture, x3);
            return 0.5 * k0 * (Mat3::Identity() / 3.0 - n * n.transpose());
        },
    }, texture);
}

SpontaneousStrain spontaneous_strain(const Texture &texture, const MaterialParams &params,
                                     double x3, double h) {
    if (!(h > 0)) throw Error(ErrorKind::InvalidArgument, "thickness h must be positive");
    SpontaneousStrain out;
    out.h = h;
    out.B = activation_slope(texture, params, x3);
    const double k0 = params.activation();
    double delta = 0.0; // size of the activation at this point

    if (const auto *cd = std::get_if<ConstantDirector>(&texture)) {
        const double a = 1.0 + k0 * h * x3;
        if (!(a > 0)) throw Error(ErrorKind::DegenerateActivation, "local activation 1 + (alpha0/h0) h x3 <= 0");
        out.C = step_tensor(cd->n, a);
        delta = std::abs(k0 * h * x3);
    } else if (std::holds_alternative<Bilayer>(texture)) {
        out.C = Mat3::Identity() - 2.0 * h * out.B;
        Eigen::SelfAdjointEigenSolver<Mat3> es(out.C, Eigen::EigenvaluesOnly);
        if (!(es.eigenvalues().minCoeff() > 0))
            throw Error(ErrorKind::DegenerateActivation, "I - 2hB is not positive definite");
    } else {
        out.C = step_tensor(director(texture, x3), 1.0 + k0 * h);
        delta = k0 * h;
    }

    out.remainder = (out.C - (Mat3::Identity() - 2.0 * h * out.B)).norm();
    if (delta <= kExpansionCheckLimit && out.remainder > kRemainderConstant * delta * delta + 1e-14) {
        std::ostringstream ss;
        ss << "expansion remainder " << out.remainder << " exceeds K (h alpha0/h0)^2 = "
           << kRemainderConstant * delta * delta;
        throw Error(ErrorKind::InternalConsistency, ss.str());
    }
    return out;
}

double w0(const Mat3 &F, const MaterialParams &params) {
    const double J = F.determinant();
    if (!(J > 0)) return kInfiniteEnergy;
    return 0.5 * params.mu * (F.squaredNorm() - 3.0 - 2.0 * std::log(J)) + params.wvol(J);
}

double wh(const SpontaneousStrain &strain, const Mat3 &F, const MaterialParams &params) {
    return w0(F * strain.U_inverse(), params);
}

double wh(double x3, const Mat3 &F, const Texture &texture, const MaterialParams &params, double h) {
    return wh(spontaneous_strain(texture, params, x3, h), F, params);
}

double wh_trace_formula(const SpontaneousStrain &strain, const Mat3 &F, const MaterialParams &params) {
    const double J = F.determinant();
    if (!(J > 0)) return kInfiniteEnergy;
    const double detC = strain.C.determinant();
    const Mat3 Cinv = strain.C.inverse();
    const double trace = (F.transpose() * F).cwiseProduct(Cinv).sum();
    return 0.5 * params.mu * (trace - 3.0 - 2.0 * std::log(J) + std::log(detC))
         + params.wvol(J / std::sqrt(detC));
}

double q3(const Mat3 &M, const MaterialParams &params) {
    const double tr = M.trace();
    return 2.0 * params.mu * sym(M).squaredNorm() + params.wvol2 * tr * tr;
}

namespace {

// 2 * Christoffel symbols of the first kind when only d/dz3 is nonzero:
// T[l](j,k) = d_j g_lk + d_k g_lj - d_l g_jk.
using Triple = std::array<Mat3, 3>;

Triple first_kind(const Mat3 &dg) {
    Triple T;
    for (int l = 0; l < 3; ++l)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                T[l](j, k) = (j == 2 ? dg(l, k) : 0.0) + (k == 2 ? dg(l, j) : 0.0)
                           - (l == 2 ? dg(j, k) : 0.0);
    return T;
}

// Gamma[i](j,k) = 1/2 ginv_il T[l](j,k)
Triple raise(const Mat3 &ginv, const Triple &T) {
    Triple G;
    for (int i = 0; i < 3; ++i) {
        G[i].setZero();
        for (int l = 0; l < 3; ++l) G[i] += 0.5 * ginv(i, l) * T[l];
    }
    return G;
}

} // namespace

double riemann_defect(const ThicknessMetric &metric, double z_lo, double z_hi, int grid) {
    if (grid < 5) throw Error(ErrorKind::InvalidArgument, "Riemann grid needs at least 5 samples");
    if (!(z_hi > z_lo)) throw Error(ErrorKind::InvalidArgument, "empty thickness interval");
    const double d = (z_hi - z_lo) / (grid - 1);
    double defect = 0.0;
    for (int s = 2; s <= grid - 3; ++s) {
        const double z = z_lo + s * d;
        const Mat3 gm2 = metric(z - 2 * d), gm1 = metric(z - d), g = metric(z);
        const Mat3 gp1 = metric(z + d), gp2 = metric(z + 2 * d);
        const Mat3 dg = (-gp2 + 8.0 * gp1 - 8.0 * gm1 + gm2) / (12.0 * d);
        const Mat3 ddg = (-gp2 + 16.0 * gp1 - 30.0 * g + 16.0 * gm1 - gm2) / (12.0 * d * d);
        const Mat3 ginv = g.inverse();
        const Mat3 dginv = -ginv * dg * ginv;

        const Triple T1 = first_kind(dg), T2 = first_kind(ddg);
        const Triple Gam = raise(ginv, T1);
        Triple dGam = raise(dginv, T1);
        const Triple tmp = raise(ginv, T2);
        for (int i = 0; i < 3; ++i) dGam[i] += tmp[i];

        // R^i_{jkl} = d_k Gam^i_{lj} - d_l Gam^i_{kj} + Gam^i_{km} Gam^m_{lj} - Gam^i_{lm} Gam^m_{kj}
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k)
                    for (int l = 0; l < 3; ++l) {
                        double Rlow = 0.0; // R_{pjkl} lowered on the first index
                        for (int p = 0; p < 3; ++p) {
                            double Rup = (k == 2 ? dGam[p](l, j) : 0.0) - (l == 2 ? dGam[p](k, j) : 0.0);
                            for (int m = 0; m < 3; ++m)
                                Rup += Gam[p](k, m) * Gam[m](l, j) - Gam[p](l, m) * Gam[m](k, j);
                            Rlow += g(i, p) * Rup;
                        }
                        defect = std::max(defect, std::abs(Rlow));
                    }
    }
    return defect;
}

double riemann_flatness_defect(const Texture &texture, const MaterialParams &params, double h, int grid) {
    if (!has_director(texture))
        throw Error(ErrorKind::UnsupportedTexture, "bilayer metric is discontinuous; Riemann defect undefined");
    if (!(h > 0)) throw Error(ErrorKind::InvalidArgument, "thickness h must be positive");
    const auto metric = [&](double z3) { return spontaneous_strain(texture, params, z3 / h, h).C; };
    return riemann_defect(metric, -0.5 * h, 0.5 * h, grid);
}

} // namespace ribbonlab::material
