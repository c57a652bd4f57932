#include "ribbonlab/relaxation.hpp"

#include "ribbonlab/errors.hpp"
#include "ribbonlab/quadrature.hpp"

#include <cmath>
#include <sstream>

namespace ribbonlab::relaxation {

using material::MaterialParams;
using material::Texture;

Mat3 Quadratic2::gram() const {
    Mat3 K;
    K << 1.0 + gamma, gamma,       0.0,
         gamma,       1.0 + gamma, 0.0,
         0.0,         0.0,         2.0;
    return 2.0 * mu * K;
}

double q2(const Mat2 &G, const Quadratic2 &form) {
    const double tr = G.trace();
    return 2.0 * form.mu * (sym(G).squaredNorm() + form.gamma * tr * tr);
}

double bilinear(const Mat2 &G, const Mat2 &H, const Quadratic2 &form) {
    return 2.0 * form.mu * (sym(G).cwiseProduct(sym(H)).sum() + form.gamma * G.trace() * H.trace());
}

RelaxedColumn q2_oracle(const Mat2 &G, const MaterialParams &params) {
    // q3 of [[G, b], [0, a]] is quadratic in z = (b1, b2, a):
    //   q3 = q3(G0) + 2 g.z + z^T H z, stationarity H z = -g.
    const double mu = params.mu, w = params.wvol2;
    Mat3 H = Mat3::Zero();
    H(0, 0) = H(1, 1) = mu;  // off-diagonal entries b/2 enter |sym|^2 twice: 2 mu * 2 (b/2)^2
    H(2, 2) = 2.0 * mu + w;
    const Vec3 g(0.0, 0.0, w * G.trace());
    Eigen::LDLT<Mat3> ldlt(H);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
        throw Error(ErrorKind::InternalConsistency, "singular stationarity system in Q2 relaxation");
    const Vec3 z = ldlt.solve(-g);

    Mat3 M = Mat3::Zero();
    M.topLeftCorner<2, 2>() = G;
    M(0, 2) = z(0);
    M(1, 2) = z(1);
    M(2, 2) = z(2);
    RelaxedColumn out;
    out.value = material::q3(M, params);
    out.b = z.head<2>();
    out.a = z(2);
    return out;
}

ThicknessProfile ThicknessProfile::from_texture(const Texture &texture, const MaterialParams &params) {
    material::validate(texture);
    ThicknessProfile p;
    p.bcheck = [texture, params](double t) -> Mat2 {
        return material::activation_slope(texture, params, t).topLeftCorner<2, 2>();
    };
    p.smoothness = std::holds_alternative<material::Bilayer>(texture) ? Smoothness::PiecewiseConstantJumpAtZero
                                                                      : Smoothness::Smooth;
    return p;
}

LegendreMoments legendre_moments(const ThicknessProfile &profile, const Quadratic2 &form, int order) {
    const auto rule = quadrature::split_thickness_rule(order);
    std::vector<Mat2> values(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) values[i] = sym(profile.bcheck(rule.nodes[i]));

    LegendreMoments m;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        m.mean += rule.weights[i] * values[i];
        m.slope += 12.0 * rule.weights[i] * rule.nodes[i] * values[i];
    }
    Mat2 zeroth = Mat2::Zero(), first = Mat2::Zero();
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double t = rule.nodes[i];
        const Mat2 perp = values[i] - m.mean - t * m.slope;
        m.residual += rule.weights[i] * q2(perp, form);
        zeroth += rule.weights[i] * perp;
        first += rule.weights[i] * t * perp;
    }
    m.orthogonality = std::max(zeroth.cwiseAbs().maxCoeff(), first.cwiseAbs().maxCoeff());
    return m;
}

namespace {

double profile_energy_scale(const ThicknessProfile &profile, const Quadratic2 &form, int order) {
    const auto rule = quadrature::split_thickness_rule(order);
    return quadrature::integrate(rule, [&](double t) { return q2(profile.bcheck(t), form); });
}

void check_converged(double coarse, double fine, double scale, double tol, const char *what) {
    if (std::abs(coarse - fine) > tol * (std::max(std::abs(fine), scale) + 1e-300)) {
        std::ostringstream ss;
        ss << what << " did not converge between orders: " << coarse << " vs " << fine;
        throw Error(ErrorKind::Quadrature, ss.str());
    }
}

} // namespace

PlateModel relax_thickness(const ThicknessProfile &profile, const Quadratic2 &form, const QuadratureOptions &opts) {
    const LegendreMoments coarse = legendre_moments(profile, form, opts.order);
    const LegendreMoments fine = legendre_moments(profile, form, 2 * opts.order);
    const double scale = profile_energy_scale(profile, form, opts.order);
    const double mscale = std::max(fine.slope.cwiseAbs().maxCoeff(), fine.mean.cwiseAbs().maxCoeff());
    check_converged(coarse.residual, fine.residual, scale, opts.rel_tol, "residual");
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            check_converged(coarse.slope(i, j), fine.slope(i, j), mscale, opts.rel_tol, "first moment");
    if (fine.orthogonality > 1e-10)
        throw Error(ErrorKind::InternalConsistency, "Legendre remainder not orthogonal to {1, t}");

    PlateModel model;
    model.alpha_coeff = 1.0 / 12.0;
    model.target_curvature = -fine.slope;
    model.residual = fine.residual;
    return model;
}

PlateModel relax_thickness(const Texture &texture, const MaterialParams &params, const QuadratureOptions &opts) {
    params.validate();
    PlateModel model = relax_thickness(ThicknessProfile::from_texture(texture, params), Quadratic2::from(params), opts);
    model.texture = texture;
    model.params = params;
    return model;
}

namespace {

// Discretized thickness functional in (d, g) coordinates:
//   f(d, g) = sum_q w_q (d + t_q g + b_q)^T K (d + t_q g + b_q)
struct DiscreteFunctional {
    Mat3 K;
    std::vector<double> t, w;
    std::vector<Vec3> b;

    DiscreteFunctional(const ThicknessProfile &profile, const Quadratic2 &form, int n) : K(form.gram()) {
        const auto rule = quadrature::split_thickness_rule(n);
        t = rule.nodes;
        w = rule.weights;
        b.reserve(rule.size());
        for (double tq : t) b.push_back(sym2_coords(profile.bcheck(tq)));
    }

    double value(const Vec3 &d, const Vec3 &g) const {
        double f = 0.0;
        for (std::size_t q = 0; q < t.size(); ++q) {
            const Vec3 e = d + t[q] * g + b[q];
            f += w[q] * e.dot(K * e);
        }
        return f;
    }

    // argmin over d at fixed g.
    Vec3 optimal_d(const Vec3 &g) const {
        double W = 0.0;
        Vec3 rhs = Vec3::Zero();
        for (std::size_t q = 0; q < t.size(); ++q) {
            W += w[q];
            rhs -= w[q] * (K * (t[q] * g + b[q]));
        }
        const Mat3 H = W * K;
        Eigen::LDLT<Mat3> ldlt(H);
        if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
            throw Error(ErrorKind::InternalConsistency, "singular membrane stationarity system");
        return ldlt.solve(rhs);
    }

    // Joint argmin over (d, g).
    std::pair<Vec3, Vec3> joint_min() const {
        Eigen::Matrix<double, 6, 6> H = Eigen::Matrix<double, 6, 6>::Zero();
        Eigen::Matrix<double, 6, 1> rhs = Eigen::Matrix<double, 6, 1>::Zero();
        for (std::size_t q = 0; q < t.size(); ++q) {
            const double tq = t[q], wq = w[q];
            H.block<3, 3>(0, 0) += wq * K;
            H.block<3, 3>(0, 3) += wq * tq * K;
            H.block<3, 3>(3, 0) += wq * tq * K;
            H.block<3, 3>(3, 3) += wq * tq * tq * K;
            rhs.head<3>() -= wq * (K * b[q]);
            rhs.tail<3>() -= wq * tq * (K * b[q]);
        }
        Eigen::LDLT<Eigen::Matrix<double, 6, 6>> ldlt(H);
        if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
            throw Error(ErrorKind::InternalConsistency, "singular curvature stationarity system");
        const Eigen::Matrix<double, 6, 1> z = ldlt.solve(rhs);
        return {z.head<3>(), z.tail<3>()};
    }
};

} // namespace

double qbar2_oracle(const Mat2 &G, const ThicknessProfile &profile, const Quadratic2 &form, int n_quad) {
    const DiscreteFunctional f(profile, form, n_quad);
    const Vec3 g = sym2_coords(G);
    return f.value(f.optimal_d(g), g);
}

Mat2 optimal_membrane_strain(const ThicknessProfile &profile, const Quadratic2 &form, int n_quad) {
    const DiscreteFunctional f(profile, form, n_quad);
    return sym2_from_coords(f.optimal_d(Vec3::Zero()));
}

PlateModel relax_thickness_oracle(const ThicknessProfile &profile, const Quadratic2 &form, int n_quad) {
    auto solve = [&](int n) {
        const DiscreteFunctional f(profile, form, n);
        const auto [d, g] = f.joint_min();
        PlateModel m;
        m.target_curvature = sym2_from_coords(g);
        m.residual = f.value(d, g);
        // Curvature of Qbar2 relative to Q2 along a fixed probe direction.
        Mat2 probe;
        probe << 1.0, 0.3, 0.3, -0.7;
        const Vec3 gp = g + sym2_coords(probe);
        const double rise = f.value(f.optimal_d(gp), gp) - m.residual;
        m.alpha_coeff = rise / q2(probe, form);
        return m;
    };
    PlateModel coarse = solve(n_quad);
    PlateModel fine = solve(2 * n_quad);
    const double scale = profile_energy_scale(profile, form, n_quad);
    check_converged(coarse.residual, fine.residual, scale, 1e-9, "oracle residual");
    return fine;
}

PlateModel relax_thickness_oracle(const Texture &texture, const MaterialParams &params, int n_quad) {
    params.validate();
    PlateModel model =
        relax_thickness_oracle(ThicknessProfile::from_texture(texture, params), Quadratic2::from(params), n_quad);
    model.texture = texture;
    model.params = params;
    return model;
}

double qbar2(const Mat2 &G, const PlateModel &model, const Quadratic2 &form) {
    return model.alpha_coeff * q2(G - model.target_curvature, form) + model.residual;
}

bool ComparisonReport::any_discrepancy() const {
    for (const auto &e : entries)
        if (e.discrepancy) return true;
    return false;
}

namespace {

ComparisonEntry compare(std::string quantity, std::string expr, double printed, double oracle, std::string units,
                        std::string note = {}) {
    ComparisonEntry e;
    e.quantity = std::move(quantity);
    e.printed_expression = std::move(expr);
    e.printed_value = printed;
    e.oracle_value = oracle;
    e.abs_gap = std::abs(printed - oracle);
    const double denom = std::max(std::abs(printed), std::abs(oracle));
    e.rel_gap = denom > 0 ? e.abs_gap / denom : 0.0;
    // Both sides zero up to rounding counts as agreement.
    e.discrepancy = e.rel_gap > kDiscrepancyThreshold && e.abs_gap > 1e-14;
    e.units = std::move(units);
    e.note = std::move(note);
    return e;
}

template <class... Ts> struct overloaded : Ts... { using Ts::operator()...; };

} // namespace

ComparisonReport paper_comparison(const PlateModel &model) {
    const auto &p = model.params;
    const Quadratic2 form = Quadratic2::from(p);
    const double k0 = p.activation();
    const double k = 6.0 / (pi * pi) * k0;
    const double pi2 = pi * pi, pi4 = pi2 * pi2;
    const double g = p.gamma();

    ComparisonReport rep;
    rep.texture = model.texture_tag();
    rep.entries.push_back(compare("alpha", "1/12", 1.0 / 12.0, model.alpha_coeff, "1"));

    std::visit(overloaded{
        [&](const material::Twist &) {
            rep.entries.push_back(compare("target[0][0]", "-(6/pi^2)(alpha0/h0)", -k, model.target_curvature(0, 0), "1/h0"));
            rep.entries.push_back(compare("target[1][1]", "(6/pi^2)(alpha0/h0)", k, model.target_curvature(1, 1), "1/h0"));
            rep.entries.push_back(compare("target[0][1]", "0", 0.0, model.target_curvature(0, 1), "1/h0"));
            rep.entries.push_back(compare("residual", "mu (pi^4 - 4 pi^2 - 48)/(4 pi^4) (alpha0/h0)^2",
                                          p.mu * (pi4 - 4 * pi2 - 48) / (4 * pi4) * k0 * k0, model.residual, "mu"));
        },
        [&](const material::SplayBend &) {
            rep.entries.push_back(compare("target[0][0]", "-(6/pi^2)(alpha0/h0)", -k, model.target_curvature(0, 0), "1/h0"));
            rep.entries.push_back(compare("target[1][1]", "0", 0.0, model.target_curvature(1, 1), "1/h0"));
            rep.entries.push_back(compare("target[0][1]", "0", 0.0, model.target_curvature(0, 1), "1/h0"));
            rep.entries.push_back(compare(
                "residual", "mu (1+gamma) (pi^4 - 12)/16 (alpha0/h0)^2", p.mu * (1 + g) * (pi4 - 12) / 16 * k0 * k0,
                model.residual, "mu",
                "Legendre remainder gives mu (1+gamma) (pi^4 - 96)/(16 pi^4) (alpha0/h0)^2"));
        },
        [&](const material::ConstantDirector &cd) {
            const Mat2 nn = (cd.n * cd.n.transpose()).topLeftCorner<2, 2>();
            const Mat2 M = 0.5 * k0 * (nn - Mat2::Identity() / 3.0);
            rep.entries.push_back(compare("target[0][0]", "(1/2)(alpha0/h0)[(n n)_check - I/3]_00", M(0, 0), model.target_curvature(0, 0), "1/h0"));
            rep.entries.push_back(compare("target[1][1]", "(1/2)(alpha0/h0)[(n n)_check - I/3]_11", M(1, 1), model.target_curvature(1, 1), "1/h0"));
            rep.entries.push_back(compare("target[0][1]", "(1/2)(alpha0/h0)[(n n)_check]_01", M(0, 1), model.target_curvature(0, 1), "1/h0"));
            rep.entries.push_back(compare("residual", "0 (no additive constant)", 0.0, model.residual, "mu"));
        },
        [&](const material::Bilayer &bl) {
            const Mat2 m1 = bl.m1.topLeftCorner<2, 2>(), m2 = bl.m2.topLeftCorner<2, 2>();
            const Mat2 target = -1.5 * (m1 - m2);
            rep.entries.push_back(compare("target[0][0]", "-(3/2)(M1 - M2)_00", target(0, 0), model.target_curvature(0, 0), "1/h0"));
            rep.entries.push_back(compare("target[1][1]", "-(3/2)(M1 - M2)_11", target(1, 1), model.target_curvature(1, 1), "1/h0"));
            rep.entries.push_back(compare("target[0][1]", "-(3/2)(M1 - M2)_01", target(0, 1), model.target_curvature(0, 1), "1/h0"));
            rep.entries.push_back(compare("residual", "-(1/16) Q2(M1 + M2)", -q2(m1 + m2, form) / 16.0, model.residual, "mu",
                                          "intermediate steps combine to +(1/16) Q2(M1 - M2)"));
        },
    }, model.texture);
    return rep;
}

} // namespace ribbonlab::relaxation
