#include "ribbonlab/plate.hpp"

#include "ribbonlab/errors.hpp"
#include "ribbonlab/quadrature.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ribbonlab::plate {

using material::MaterialParams;
using material::Texture;
using relaxation::PlateModel;
using relaxation::Quadratic2;

namespace {

constexpr double kIsometryTol = 1e-8;

// Composite Gauss integral of f over [0, s] (s may be negative).
template <typename F>
auto integrate_from_zero(double s, F &&f) {
    const int panels = std::max(1, static_cast<int>(std::ceil(std::abs(s) / 0.5)));
    const auto rule = quadrature::composite(12, panels, 0.0, s);
    return quadrature::integrate(rule, f);
}

} // namespace

Vec2 PlateDomain::point(double z1, double z2) const {
    const double c = std::cos(theta), s = std::sin(theta);
    return {c * z1 - s * z2, s * z1 + c * z2};
}

void PlateDomain::validate() const {
    if (!(width > 0)) throw Error(ErrorKind::InvalidArgument, "plate width must be positive");
    if (!(length > width)) throw Error(ErrorKind::InvalidArgument, "plate length must exceed its width");
    if (!(theta >= 0 && theta < pi)) throw Error(ErrorKind::InvalidArgument, "cut angle theta must lie in [0, pi)");
}

Immersion Immersion::rigid_motion(const Mat3 &rotation, const Vec3 &translation) const {
    Immersion out;
    out.position = [p = position, rotation, translation](const Vec2 &x) -> Vec3 { return rotation * p(x) + translation; };
    out.tangent_map = [t = tangent_map, rotation](const Vec2 &x) -> Mat32 { return rotation * t(x); };
    out.normal_gradient = [n = normal_gradient, rotation](const Vec2 &x) -> Mat32 { return rotation * n(x); };
    return out;
}

Mat2 second_fundamental_form(const Immersion &y, const Vec2 &x) {
    return y.tangent_map(x).transpose() * y.normal_gradient(x);
}

double mean_curvature(const Immersion &y, const Vec2 &x) { return second_fundamental_form(y, x).trace(); }

CylindricalIsometry CylindricalIsometry::constant(double phi, double kappa, const PlateDomain &domain) {
    domain.validate();
    CylindricalIsometry c;
    c.m_phi = phi;
    c.m_kappa = kappa;
    c.m_domain = domain;
    return c;
}

CylindricalIsometry CylindricalIsometry::profile(double phi, std::function<double(double)> kappa,
                                                 const PlateDomain &domain) {
    domain.validate();
    CylindricalIsometry c;
    c.m_phi = phi;
    c.m_profile = std::move(kappa);
    c.m_domain = domain;
    return c;
}

double CylindricalIsometry::curvature_derivative(double s) const {
    if (!m_profile) return 0.0;
    const double d = 1e-5;
    return (m_profile(s + d) - m_profile(s - d)) / (2 * d);
}

double CylindricalIsometry::turning_angle(double s) const {
    if (!m_profile) return -m_kappa * s;
    return -integrate_from_zero(s, m_profile);
}

Vec2 CylindricalIsometry::profile_point(double s) const {
    if (!m_profile) {
        if (m_kappa == 0.0) return {s, 0.0};
        return {std::sin(m_kappa * s) / m_kappa, (std::cos(m_kappa * s) - 1.0) / m_kappa};
    }
    return integrate_from_zero(s, [this](double sigma) -> Vec2 {
        const double psi = turning_angle(sigma);
        return {std::cos(psi), std::sin(psi)};
    });
}

namespace {

struct Basis {
    Vec3 E1, E2, E3;
    Vec2 e, eperp;
};

Basis basis(double phi) {
    const double c = std::cos(phi), s = std::sin(phi);
    return {Vec3(c, s, 0), Vec3(-s, c, 0), Vec3::UnitZ(), Vec2(c, s), Vec2(-s, c)};
}

} // namespace

Vec3 CylindricalIsometry::position(const Vec2 &x) const {
    const Basis b = basis(m_phi);
    const Vec2 p = profile_point(b.e.dot(x));
    return p(0) * b.E1 + b.eperp.dot(x) * b.E2 + p(1) * b.E3;
}

Mat32 CylindricalIsometry::tangent_map(const Vec2 &x) const {
    const Basis b = basis(m_phi);
    const double psi = turning_angle(b.e.dot(x));
    const Vec3 T = std::cos(psi) * b.E1 + std::sin(psi) * b.E3;
    return T * b.e.transpose() + b.E2 * b.eperp.transpose();
}

Vec3 CylindricalIsometry::normal(const Vec2 &x) const {
    const Basis b = basis(m_phi);
    const double psi = turning_angle(b.e.dot(x));
    return std::cos(psi) * b.E3 - std::sin(psi) * b.E1;
}

Mat2 CylindricalIsometry::second_fundamental_form(const Vec2 &x) const {
    const Vec2 e = direction();
    return curvature(e.dot(x)) * e * e.transpose();
}

Mat3 CylindricalIsometry::frame(const Vec2 &x) const {
    const Basis b = basis(m_phi);
    const double psi = turning_angle(b.e.dot(x));
    const Vec3 T = std::cos(psi) * b.E1 + std::sin(psi) * b.E3;
    const Vec3 nu = std::cos(psi) * b.E3 - std::sin(psi) * b.E1;
    // Columns are the images of the reference basis e1, e2, e3.
    Mat3 R;
    R.leftCols<2>() = T * b.e.transpose() + b.E2 * b.eperp.transpose();
    R.col(2) = nu;
    return R;
}

Immersion CylindricalIsometry::immersion() const {
    Immersion y;
    y.position = [c = *this](const Vec2 &x) { return c.position(x); };
    y.tangent_map = [c = *this](const Vec2 &x) { return c.tangent_map(x); };
    y.normal_gradient = [c = *this](const Vec2 &x) -> Mat32 {
        // d nu / ds = kappa T, and s = e . x'.
        const Basis b = basis(c.phi());
        const double s = b.e.dot(x);
        const double psi = c.turning_angle(s);
        const Vec3 T = std::cos(psi) * b.E1 + std::sin(psi) * b.E3;
        return c.curvature(s) * T * b.e.transpose();
    };
    return y;
}

double plate_energy(const Immersion &y, const PlateDomain &domain, const PlateModel &model, const Quadratic2 &form,
                    const PlateQuadrature &quad) {
    domain.validate();
    const auto r1 = quadrature::composite(quad.order, quad.length_panels, -0.5 * domain.length, 0.5 * domain.length);
    const auto r2 = quadrature::gauss_legendre(quad.order, -0.5 * domain.width, 0.5 * domain.width);
    double energy = 0.0;
    for (std::size_t i = 0; i < r1.size(); ++i) {
        for (std::size_t j = 0; j < r2.size(); ++j) {
            const Vec2 x = domain.point(r1.nodes[i], r2.nodes[j]);
            const Mat32 J = y.tangent_map(x);
            const double defect = (J.transpose() * J - Mat2::Identity()).cwiseAbs().maxCoeff();
            if (defect > kIsometryTol) {
                std::ostringstream ss;
                ss << "metric deviates from identity by " << defect << " at (" << x(0) << ", " << x(1) << ")";
                throw Error(ErrorKind::InvalidConfiguration, ss.str());
            }
            const Mat2 A = J.transpose() * y.normal_gradient(x);
            energy += r1.weights[i] * r2.weights[j] * 0.5 * relaxation::qbar2(A, model, form);
        }
    }
    return energy;
}

double plate_energy(const CylindricalIsometry &y, const PlateModel &model, const Quadratic2 &form,
                    const PlateQuadrature &quad) {
    return plate_energy(y.immersion(), y.domain(), model, form, quad);
}

CylinderMinimizer best_curvature(double phi, const PlateModel &model, const Quadratic2 &form) {
    const Vec2 e(std::cos(phi), std::sin(phi));
    const Mat2 E = e * e.transpose();
    return {phi, relaxation::bilinear(E, model.target_curvature, form) / relaxation::q2(E, form)};
}

double cylinder_energy_density(double phi, double kappa, const PlateModel &model, const Quadratic2 &form) {
    const Vec2 e(std::cos(phi), std::sin(phi));
    return 0.5 * relaxation::qbar2(kappa * e * e.transpose(), model, form);
}

namespace {

double wrap_angle(double phi) {
    double w = std::fmod(phi, pi);
    if (w < 0) w += pi;
    if (pi - w < 1e-12) w = 0.0;
    return w;
}

double angular_distance(double a, double b) {
    const double d = std::abs(wrap_angle(a) - wrap_angle(b));
    return std::min(d, pi - d);
}

} // namespace

CylinderMinimum minimize_over_cylinders(const PlateModel &model, const Quadratic2 &form, const PlateDomain &domain,
                                        const CylinderSearch &search) {
    domain.validate();
    const auto density = [&](double phi) {
        const auto best = best_curvature(phi, model, form);
        return cylinder_energy_density(phi, best.kappa, model, form);
    };

    const int n = std::max(8, search.scan_samples);
    std::vector<double> values(n);
    for (int i = 0; i < n; ++i) values[i] = density(i * pi / n);
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double scale = std::max({std::abs(*lo_it), 0.5 * model.alpha_coeff * relaxation::q2(model.target_curvature, form),
                                   std::numeric_limits<double>::min()});

    CylinderMinimum out;
    if (*hi_it - *lo_it <= search.tie_tol * scale) {
        out.degenerate_family = true;
        out.phi_lo = 0.0;
        out.phi_hi = pi;
        out.minimizers.push_back(best_curvature(0.0, model, form));
        out.energy_per_area = *lo_it;
        out.energy = out.energy_per_area * domain.area();
        return out;
    }

    struct Candidate { double phi, value; };
    std::vector<Candidate> candidates;
    const double step = pi / n;
    for (int i = 0; i < n; ++i) {
        const double prev = values[(i + n - 1) % n], next = values[(i + 1) % n];
        if (values[i] > prev || values[i] > next) continue;
        const double a = i * step - step, b = i * step + step;
        auto [phi, val] = boost::math::tools::brent_find_minima(density, a, b, std::numeric_limits<double>::digits);
        // Newton polish on centered differences; the centered derivative of a
        // degree-2 trigonometric polynomial vanishes exactly at its extrema.
        for (int it = 0; it < 4; ++it) {
            const double d = 1e-4;
            const double fp = density(phi + d), fm = density(phi - d), f0 = density(phi);
            const double curv = (fp - 2 * f0 + fm) / (d * d);
            if (!(curv > 0)) break;
            const double delta = ((fp - fm) / (2 * d)) / curv;
            phi -= delta;
            if (std::abs(delta) < search.phi_tol) break;
        }
        val = density(phi);
        candidates.push_back({wrap_angle(phi), val});
    }

    double best = std::numeric_limits<double>::infinity();
    for (const auto &c : candidates) best = std::min(best, c.value);
    std::vector<Candidate> kept;
    for (const auto &c : candidates) {
        if (c.value > best + search.tie_tol * scale) continue;
        const bool duplicate = std::any_of(kept.begin(), kept.end(), [&](const Candidate &k) {
            return angular_distance(k.phi, c.phi) < 1e-6;
        });
        if (!duplicate) kept.push_back(c);
    }
    std::sort(kept.begin(), kept.end(), [](const Candidate &a, const Candidate &b) { return a.phi < b.phi; });
    for (const auto &c : kept) out.minimizers.push_back(best_curvature(c.phi, model, form));
    out.energy_per_area = best;
    out.energy = best * domain.area();
    return out;
}

// ---------------------------------------------------------------------------
// Ansatz deformations
// ---------------------------------------------------------------------------

AnsatzField::AnsatzField(const AnsatzDeformation &ansatz, const Texture &texture, const MaterialParams &params)
    : m_ansatz(ansatz), m_texture(texture), m_params(params) {
    params.validate();
    material::validate(texture);
    if (ansatz.corrector_order < 0 || ansatz.corrector_order > 2)
        throw Error(ErrorKind::InvalidArgument, "corrector order must be 0, 1 or 2");
    if (!(ansatz.h > 0)) throw Error(ErrorKind::InvalidArgument, "thickness h must be positive");

    const auto profile = relaxation::ThicknessProfile::from_texture(texture, params);
    const Quadratic2 form = Quadratic2::from(params);
    if (ansatz.corrector_order == 2) m_D = relaxation::optimal_membrane_strain(profile, form);
    if (ansatz.corrector_order == 1) {
        // L2 projection of the kappa-independent column onto {1, t}.
        const auto rule = quadrature::split_thickness_rule(16);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const double t = rule.nodes[q];
            const Mat3 B = material::activation_slope(texture, params, t);
            const Vec3 c(-2 * B(0, 2), -2 * B(1, 2), -params.gamma() * B.topLeftCorner<2, 2>().trace() - B(2, 2));
            m_affine0 += rule.weights[q] * c;
            m_affine1 += 12.0 * rule.weights[q] * t * c;
        }
    }
}

Vec3 AnsatzField::column(double t, double kappa) const {
    const double gamma = m_params.gamma();
    switch (m_ansatz.corrector_order) {
        case 0: return Vec3::Zero();
        case 1: return m_affine0 + t * m_affine1 + Vec3(0, 0, -gamma * t * kappa);
        default: {
            const Mat3 B = material::activation_slope(m_texture, m_params, t);
            // In-plane strain P = D + t A + Bcheck with tr A = kappa.
            const double trP = m_D.trace() + t * kappa + B.topLeftCorner<2, 2>().trace();
            return {-2 * B(0, 2), -2 * B(1, 2), -gamma * trP - B(2, 2)};
        }
    }
}

Vec3 AnsatzField::column_integral(double x3, double kappa) const {
    const double gamma = m_params.gamma();
    switch (m_ansatz.corrector_order) {
        case 0: return Vec3::Zero();
        case 1: return m_affine0 * x3 + 0.5 * x3 * x3 * m_affine1 + Vec3(0, 0, -0.5 * gamma * kappa * x3 * x3);
        default: {
            if (x3 == 0.0) return Vec3::Zero();
            // Stays within one half of the thickness, where the column is smooth.
            const auto rule = quadrature::gauss_legendre(16, 0.0, x3);
            return quadrature::integrate(rule, [&](double t) { return column(t, kappa); });
        }
    }
}

Vec3 AnsatzField::position(const Vec2 &x, double x3) const {
    const double h = m_ansatz.h;
    const auto &base = m_ansatz.base;
    const Vec2 p = x + h * m_D * x;
    const double kappa = base.curvature(base.arc_coordinate(p));
    return base.position(p) + h * x3 * base.normal(p) + h * h * base.frame(p) * column_integral(x3, kappa);
}

Mat3 AnsatzField::rescaled_gradient(const Vec2 &x, double x3) const {
    const double h = m_ansatz.h;
    const auto &base = m_ansatz.base;
    const Vec2 e = base.direction();
    const Mat2 stretch = Mat2::Identity() + h * m_D;
    const Vec2 p = stretch * x;
    const double s = base.arc_coordinate(p);
    const double kappa = base.curvature(s);
    const Mat2 A = kappa * e * e.transpose();

    // Gradient in the frame R(p) = (grad' Y | nu).
    Mat3 F = Mat3::Zero();
    F.topLeftCorner<2, 2>() = stretch + h * x3 * A * stretch;
    const Vec3 zeta = column_integral(x3, kappa);
    Vec3 dzeta_ds = Vec3::Zero();
    if (m_ansatz.corrector_order >= 1)
        dzeta_ds(2) = -0.5 * m_params.gamma() * x3 * x3 * base.curvature_derivative(s);
    // R^T dR/ds = kappa (e e3^T - e3 e^T) in the local frame.
    const Vec3 e3d(e(0), e(1), 0.0);
    const Vec3 spin_zeta = kappa * (zeta(2) * e3d - e3d.dot(zeta) * Vec3::UnitZ());
    const Vec3 v = spin_zeta + dzeta_ds;
    F.leftCols<2>() += h * h * v * (e.transpose() * stretch);
    F.col(2) = Vec3::UnitZ() + h * column(x3, kappa);
    return base.frame(p) * F;
}

namespace {

struct EnergyPair {
    double rescaled = 0, physical = 0;
};

EnergyPair integrate_ansatz(const AnsatzField &field, const AnsatzDeformation &ansatz, const Texture &texture,
                            const MaterialParams &params, int inplane, int thickness) {
    const PlateDomain &dom = ansatz.base.domain();
    const auto r1 = quadrature::composite(inplane, 4, -0.5 * dom.length, 0.5 * dom.length);
    const auto r2 = quadrature::gauss_legendre(inplane, -0.5 * dom.width, 0.5 * dom.width);
    const auto r3 = quadrature::split_thickness_rule(thickness);
    const double h = ansatz.h;

    EnergyPair out;
    for (std::size_t k = 0; k < r3.size(); ++k) {
        const double x3 = r3.nodes[k];
        const auto strain = material::spontaneous_strain(texture, params, x3, h);
        const Mat3 Uinv = strain.U_inverse();
        for (std::size_t i = 0; i < r1.size(); ++i) {
            for (std::size_t j = 0; j < r2.size(); ++j) {
                const Vec2 x = dom.point(r1.nodes[i], r2.nodes[j]);
                const Mat3 F = field.rescaled_gradient(x, x3);
                if (!(F.determinant() > 0)) {
                    std::ostringstream ss;
                    ss << "det grad_h y <= 0 at x3 = " << x3 << " for h = " << h;
                    throw Error(ErrorKind::AnsatzDegenerate, ss.str());
                }
                const double w = r1.weights[i] * r2.weights[j] * r3.weights[k];
                out.rescaled += w * material::w0(F * Uinv, params);
                // Physical slab: z3 = h x3, dz3 = h dx3.
                out.physical += w * h * material::wh_trace_formula(strain, F, params);
            }
        }
    }
    return out;
}

} // namespace

Rescaled3DEnergy rescaled_3d_energy(const AnsatzDeformation &ansatz, const Texture &texture,
                                    const MaterialParams &params, const ThicknessQuadrature &quad) {
    const AnsatzField field(ansatz, texture, params);
    const EnergyPair coarse = integrate_ansatz(field, ansatz, texture, params, quad.inplane, quad.thickness);
    const EnergyPair fine = integrate_ansatz(field, ansatz, texture, params, 2 * quad.inplane, 2 * quad.thickness);

    const double tiny = 1e-300;
    if (std::abs(coarse.rescaled - fine.rescaled) > quad.rel_tol * std::abs(fine.rescaled) + tiny) {
        std::ostringstream ss;
        ss << "3D energy quadrature not converged: " << coarse.rescaled << " vs " << fine.rescaled;
        throw Error(ErrorKind::Quadrature, ss.str());
    }
    if (std::abs(fine.physical - ansatz.h * fine.rescaled) > 1e-7 * std::abs(ansatz.h * fine.rescaled) + 1e-18) {
        std::ostringstream ss;
        ss << "physical energy " << fine.physical << " != h F_h = " << ansatz.h * fine.rescaled;
        throw Error(ErrorKind::InternalConsistency, ss.str());
    }
    return {coarse.rescaled, fine.physical, fine.rescaled};
}

ScalingTable gamma_scaling_sweep(const Texture &texture, const MaterialParams &params, const CylindricalIsometry &base,
                                 const std::vector<double> &h_list, const ThicknessQuadrature &quad,
                                 SweepErrors policy) {
    if (h_list.empty()) throw Error(ErrorKind::InvalidArgument, "empty thickness list");
    for (std::size_t i = 0; i < h_list.size(); ++i) {
        if (!(h_list[i] > 0)) throw Error(ErrorKind::InvalidArgument, "thicknesses must be positive");
        if (i > 0 && !(h_list[i] < h_list[i - 1]))
            throw Error(ErrorKind::InvalidArgument, "thickness list must be strictly decreasing");
    }

    const PlateModel model = relaxation::relax_thickness(texture, params);
    const Quadratic2 form = Quadratic2::from(params);
    ScalingTable table;
    table.plate_energy = plate_energy(base, model, form);

    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (double h : h_list) {
        ScalingRow row;
        row.h = h;
        try {
            const auto e = rescaled_3d_energy({base, 2, h}, texture, params, quad);
            row.energy_rescaled = e.rescaled / (h * h);
            row.gap = row.energy_rescaled - table.plate_energy;
        } catch (const Error &err) {
            if (policy == SweepErrors::Throw) throw;
            row.energy_rescaled = row.gap = nan;
            row.error = err.what();
        }
        row.slope_running = nan;
        if (!table.rows.empty()) {
            const auto &prev = table.rows.back();
            if (std::abs(prev.gap) > 0 && std::abs(row.gap) > 0)
                row.slope_running = std::log(std::abs(row.gap) / std::abs(prev.gap)) / std::log(h / prev.h);
        }
        table.rows.push_back(row);
    }

    const double gap_floor = 1e-13 * std::max(1.0, std::abs(table.plate_energy));
    table.exact = std::all_of(table.rows.begin(), table.rows.end(),
                              [&](const ScalingRow &r) { return !r.error && std::abs(r.gap) <= gap_floor; });

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (const auto &r : table.rows) {
        if (r.error || !(std::abs(r.gap) > gap_floor)) continue;
        const double lx = std::log(r.h), ly = std::log(std::abs(r.gap));
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
        ++m;
    }
    table.fitted_slope = m >= 2 ? (m * sxy - sx * sy) / (m * sxx - sx * sx) : nan;

    table.monotone = table.rows.size() >= 2;
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
        const auto &a = table.rows[i - 1], &b = table.rows[i];
        if (a.error || b.error || !(std::abs(b.gap) < std::abs(a.gap))) table.monotone = false;
    }
    return table;
}

} // namespace ribbonlab::plate
