#include "ribbonlab/tools/verify.hpp"

#include "ribbonlab/errors.hpp"
#include "ribbonlab/geometry.hpp"
#include "ribbonlab/plate.hpp"
#include "ribbonlab/quadrature.hpp"
#include "ribbonlab/rod.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

namespace ribbonlab::tools {

using material::MaterialParams;
using relaxation::Quadratic2;

namespace {

class Checks {
public:
    void expect(bool ok, const std::string &what) {
        if (!ok) {
            m_pass = false;
            if (!m_failures.empty()) m_failures += "; ";
            m_failures += what;
        }
    }
    void note(const std::string &what) {
        if (!m_notes.empty()) m_notes += "; ";
        m_notes += what;
    }
    bool pass() const { return m_pass; }
    std::string detail() const { return m_pass ? m_notes : "FAILED: " + m_failures + (m_notes.empty() ? "" : " | " + m_notes); }

private:
    bool m_pass = true;
    std::string m_failures, m_notes;
};

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(6);
    ss << v;
    return ss.str();
}

Mat3 random_symmetric(std::mt19937 &rng, double amplitude) {
    std::uniform_real_distribution<double> u(-amplitude, amplitude);
    Mat3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) m(i, j) = m(j, i) = u(rng);
    return m;
}

Mat2 random_sym2(std::mt19937 &rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    const double a = n(rng), b = n(rng), c = n(rng);
    Mat2 m;
    m << a, c, c, b;
    return m;
}

Vec3 random_unit(std::mt19937 &rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Vec3 v(n(rng), n(rng), n(rng));
    return v.normalized();
}

Mat2 upper_block(const Mat3 &m) { return m.topLeftCorner<2, 2>(); }

// ---------------------------------------------------------------------------

void twist_constants(const VerifyOptions &o, Checks &c) {
    const auto &p = o.params;
    const double a = p.activation();
    const double k = 6 / (pi * pi) * a;
    const double beta = p.mu * (std::pow(pi, 4) - 4 * pi * pi - 48) / (4 * std::pow(pi, 4)) * a * a;
    const auto model = relaxation::relax_thickness(material::Twist{}, p);
    const auto oracle = relaxation::relax_thickness_oracle(material::Twist{}, p);
    Mat2 target;
    target << -k, 0, 0, k;
    c.expect(model.alpha_coeff == 1.0 / 12, "alpha != 1/12");
    const double tgap = (model.target_curvature - target).cwiseAbs().maxCoeff();
    const double rgap = std::abs(model.residual - beta);
    c.expect(tgap <= 1e-10, "target gap " + fmt(tgap));
    c.expect(rgap <= 1e-10, "beta_T gap " + fmt(rgap));
    const double ogap = std::max({std::abs(oracle.alpha_coeff - model.alpha_coeff),
                                  (oracle.target_curvature - model.target_curvature).cwiseAbs().maxCoeff(),
                                  std::abs(oracle.residual - model.residual)});
    c.expect(ogap <= 1e-8, "oracle gap " + fmt(ogap));
    c.note("beta_T = " + fmt(model.residual) + ", k = " + fmt(k) + ", oracle gap " + fmt(ogap));
}

void oracle_equivalence(const VerifyOptions &o, Checks &c) {
    std::mt19937 rng(o.seed);
    std::vector<material::Texture> textures{material::Twist{}, material::SplayBend{},
                                            material::ConstantDirector{Vec3::UnitZ()},
                                            material::ConstantDirector{random_unit(rng)}};
    for (int i = 0; i < 10; ++i) textures.push_back(material::Bilayer{random_symmetric(rng, 0.5), random_symmetric(rng, 0.5)});
    const Quadratic2 form = Quadratic2::from(o.params);
    double worst = 0;
    for (const auto &tex : textures) {
        const auto model = relaxation::relax_thickness(tex, o.params);
        const auto profile = relaxation::ThicknessProfile::from_texture(tex, o.params);
        for (int s = 0; s < 1000; ++s) {
            const Mat2 G = random_sym2(rng);
            const double gap = std::abs(relaxation::qbar2(G, model, form) - relaxation::qbar2_oracle(G, profile, form));
            worst = std::max(worst, gap);
        }
    }
    c.expect(worst < 1e-8, "max gap " + fmt(worst));
    c.note(std::to_string(textures.size()) + " textures x 1000 G, max gap " + fmt(worst));
}

void splay_bend(const VerifyOptions &o, VerifyResult *sink, Checks &c) {
    const double k = 6 / (pi * pi) * o.params.activation();
    const auto model = relaxation::relax_thickness(material::SplayBend{}, o.params);
    const auto oracle = relaxation::relax_thickness_oracle(material::SplayBend{}, o.params);
    Mat2 target;
    target << -k, 0, 0, 0;
    const double tgap = (model.target_curvature - target).cwiseAbs().maxCoeff();
    c.expect(tgap <= 1e-10, "target gap " + fmt(tgap));
    const double rgap = std::abs(model.residual - oracle.residual);
    const double ogap = std::max(rgap, (model.target_curvature - oracle.target_curvature).cwiseAbs().maxCoeff());
    c.expect(ogap < 1e-8, "Legendre vs quadrature gap " + fmt(ogap));
    const auto report = relaxation::paper_comparison(model);
    for (const auto &e : report.entries)
        if (e.quantity == "residual")
            c.note("beta_SB = " + fmt(e.oracle_value) + " vs printed " + fmt(e.printed_value) +
                   (e.discrepancy ? " (discrepancy recorded)" : ""));
    if (sink) sink->comparisons.push_back(report);
}

void bilayer(const VerifyOptions &o, VerifyResult *sink, Checks &c) {
    std::mt19937 rng(o.seed + 4);
    const Quadratic2 form = Quadratic2::from(o.params);
    double worst_oracle = 0, worst_search = 0;
    for (int i = 0; i < 25; ++i) {
        const material::Bilayer bl{random_symmetric(rng, 0.5), random_symmetric(rng, 0.5)};
        const double expected = relaxation::q2(upper_block(bl.m1 - bl.m2), form) / 16;
        const auto oracle = relaxation::relax_thickness_oracle(bl, o.params);
        worst_oracle = std::max(worst_oracle, std::abs(oracle.residual - expected));
        worst_search = std::max(worst_search, std::abs(bilayer_residual_search(bl, o.params) - expected));
    }
    c.expect(worst_oracle <= 1e-8, "linear-solve oracle gap " + fmt(worst_oracle));
    c.expect(worst_search <= 1e-8, "pattern-search gap " + fmt(worst_search));

    const Mat3 m = random_symmetric(rng, 0.5);
    const auto same = relaxation::relax_thickness(material::Bilayer{m, m}, o.params);
    const double tgap = same.target_curvature.cwiseAbs().maxCoeff();
    c.expect(tgap <= 1e-12 && std::abs(same.residual) <= 1e-12,
             "M1 = M2 gives target " + fmt(tgap) + ", residual " + fmt(same.residual));
    c.note("25 pairs: oracle gap " + fmt(worst_oracle) + ", search gap " + fmt(worst_search));

    material::Bilayer example;
    example.m1(0, 0) = 0.1;
    const auto report = relaxation::paper_comparison(relaxation::relax_thickness(example, o.params));
    if (sink) sink->comparisons.push_back(report);
    if (report.any_discrepancy()) c.note("printed -(1/16)Q2(M1+M2) disagrees with the oracle (recorded)");
}

void plate_minimum(const VerifyOptions &o, Checks &c) {
    const auto &p = o.params;
    const double a = p.activation(), g = p.gamma();
    const auto model = relaxation::relax_thickness(material::Twist{}, p);
    const Quadratic2 form = Quadratic2::from(p);
    const auto m = plate::minimize_over_cylinders(model, form, plate::PlateDomain{});
    const double expected = 3 * p.mu / std::pow(pi, 4) * a * a * (1 + 2 * g) / (1 + g) + model.residual / 2;
    const double egap = std::abs(m.energy_per_area - expected);
    c.expect(egap <= 1e-8, "energy/area gap " + fmt(egap));
    c.expect(!m.degenerate_family && m.minimizers.size() == 2,
             std::to_string(m.minimizers.size()) + " minimizer directions");
    if (m.minimizers.size() == 2) {
        const double dphi = std::abs(std::abs(m.minimizers[1].phi - m.minimizers[0].phi) - pi / 2);
        c.expect(dphi <= 1e-8, "direction gap from pi/2: " + fmt(dphi));
        const double kstar = 6 / (pi * pi * (1 + g)) * a;
        for (const auto &mm : m.minimizers)
            c.expect(std::abs(std::abs(mm.kappa) - kstar) <= 1e-8, "|kappa*| = " + fmt(mm.kappa));
        c.note("phi = {" + fmt(m.minimizers[0].phi) + ", " + fmt(m.minimizers[1].phi) + "}, kappa = {" +
               fmt(m.minimizers[0].kappa) + ", " + fmt(m.minimizers[1].kappa) + "}");
    }
    c.note("energy/area = " + fmt(m.energy_per_area));
}

rod::RodDensity rod_density_for(double theta, const VerifyOptions &o) {
    auto d = rod::RodDensity::make(theta, o.params);
    d.d_branch_ratio = o.d_branch_ratio;
    return d;
}

void rod_density(const VerifyOptions &o, Checks &c) {
    std::mt19937 rng(o.seed + 6);
    std::uniform_real_distribution<double> uth(0.0, pi), uang(0.0, 2 * pi), u01(0.0, 1.0);
    const double scale = rod::rod_min_set(rod::RodDensity::make(0.0, o.params)).value;
    const double offset = 1e-7;

    double worst = 0;
    const auto probe = [&](const rod::RodDensity &d, const Vec2 &p, Vec2 n) {
        n.normalize();
        const auto at = [&](double t) { return rod::rod_density(p(0) + t * n(0), p(1) + t * n(1), d); };
        // Linear extrapolation to the boundary from each side.
        const double outer = 2 * at(offset) - at(2 * offset);
        const double inner = 2 * at(-offset) - at(-2 * offset);
        worst = std::max(worst, std::abs(outer - inner));
    };
    for (int i = 0; i < 5000; ++i) {
        // Boundary of D: circle through the origin centered at (cd/2, 0).
        const auto d = rod_density_for(uth(rng), o);
        const double cd = d.k * d.a_theta / (1 + d.gamma);
        const double psi = uang(rng);
        if (std::abs(cd) < 1e-9) continue;
        const Vec2 centre(0.5 * cd, 0.0);
        const Vec2 dir(std::cos(psi), std::sin(psi));
        probe(d, centre + 0.5 * std::abs(cd) * dir, dir);
    }
    for (int i = 0; i < 5000; ++i) {
        // Boundary of U: beta^2 = alpha^2 + cd alpha.
        const auto d = rod_density_for(uth(rng), o);
        const double cd = d.k * d.a_theta / (1 + d.gamma);
        double alpha = 0, disc = -1;
        while (disc < 0) {
            alpha = (2 * u01(rng) - 1) * 3 * d.k;
            disc = alpha * alpha + cd * alpha;
        }
        const double beta = (u01(rng) < 0.5 ? -1 : 1) * std::sqrt(disc);
        probe(d, Vec2(alpha, beta), Vec2(-2 * alpha - cd, 2 * beta));
    }
    const bool continuous = worst < 1e-5 * scale;
    c.expect(continuous, "boundary jump " + fmt(worst) + " vs scale " + fmt(scale));
    c.note("max boundary jump " + fmt(worst));

    const auto model = relaxation::relax_thickness(material::Twist{}, o.params);
    const double plate_min = plate::minimize_over_cylinders(model, Quadratic2::from(o.params), plate::PlateDomain{})
                                 .energy_per_area;
    for (double theta : {0.0, pi / 8, pi / 4, pi / 2, 3 * pi / 4}) {
        const auto d = rod_density_for(theta, o);
        const auto predicted = rod::rod_min_set(d);
        const rod::GridAxis axis{-3 * d.k, 3 * d.k, 601};
        const auto brute = rod::rod_min_brute(d, axis, axis);
        const double coverage = rod::min_set_coverage(brute, predicted, axis);
        const std::string tag = "theta=" + fmt(theta) + ": ";
        c.expect(std::abs(brute.value - predicted.value) <= 1e-6, tag + "brute min " + fmt(brute.value));
        c.expect(coverage >= 0.95, tag + "coverage " + fmt(coverage));
        bool inside = true;
        for (const auto &p : brute.argmin) {
            inside = inside && p(0) >= predicted.alpha_lo - axis.step() && p(0) <= predicted.alpha_hi + axis.step() &&
                     std::abs(p(1) - predicted.beta) <= axis.step();
        }
        c.expect(inside, tag + "argmin outside the predicted set");
        const double cross = std::abs(predicted.value - plate_min);
        c.expect(cross <= 1e-12, tag + "rod vs plate minimum gap " + fmt(cross));
    }
}

void rod_symmetry(const VerifyOptions &o, Checks &c) {
    std::mt19937 rng(o.seed + 7);
    const auto wrap = [](double t) {
        double w = std::fmod(t, pi);
        return w < 0 ? w + pi : w;
    };
    double worst = 0;
    for (int i = 0; i < 8; ++i) {
        const double theta = i * pi / 8;
        const auto d = rod_density_for(theta, o);
        const auto reflect = rod_density_for(wrap(pi / 2 - theta), o);
        const auto shift = rod_density_for(wrap(theta + pi / 2), o);
        std::uniform_real_distribution<double> u(-3 * d.k, 3 * d.k);
        for (int s = 0; s < 1000; ++s) {
            const double a = u(rng), b = u(rng);
            const double v = rod::rod_density(a, b, d);
            const double tol = std::max(1.0, std::abs(v));
            worst = std::max(worst, std::abs(v - rod::rod_density(-a, b, reflect)) / tol);
            worst = std::max(worst, std::abs(v - rod::rod_density(-a, -b, shift)) / tol);
        }
    }
    c.expect(worst <= 1e-12, "symmetry gap " + fmt(worst));
    c.note("8 theta x 1000 samples, max gap " + fmt(worst));
}

void geometry_checks(const VerifyOptions &o, Checks &c) {
    const double length = 10;
    const auto stepped = geometry::integrate_frame([](double) { return 0.1; }, [](double) { return 0.23; },
                                                   Mat3::Identity(), length, 10001);
    const auto exact = geometry::integrate_frame(0.1, 0.23, Mat3::Identity(), length, 10001);
    const double drift = std::max(stepped.max_drift(), exact.max_drift());
    c.expect(drift < 1e-12, "SO(3) drift " + fmt(drift));

    const auto roundtrip = [&](int n) {
        const auto r = geometry::recover_rates(geometry::integrate_frame(0.1, 0.23, Mat3::Identity(), length, n));
        double err = 0;
        for (std::size_t i = 0; i < r.s.size(); ++i)
            err = std::max({err, std::abs(r.flexure[i] - 0.1), std::abs(r.torsion[i] - 0.23), std::abs(r.inplane[i])});
        return err;
    };
    const double e400 = roundtrip(400), e800 = roundtrip(800);
    const double order = std::log2(e400 / e800);
    c.expect(e400 < 1e-4, "roundtrip error " + fmt(e400));
    c.expect(order > 1.8 && order < 2.2, "convergence order " + fmt(order));

    double worst = 0;
    for (double theta : {0.0, pi / 8, pi / 4, pi / 2, 3 * pi / 4}) {
        const auto d = rod_density_for(theta, o);
        const auto ms = rod::rod_min_set(d);
        for (double t : {0.0, 0.5, 1.0}) {
            const auto traj = geometry::integrate_frame(ms.alpha_at(t), ms.beta, Mat3::Identity(), length, 400);
            worst = std::max(worst, std::abs(rod::rod_energy(traj.frame_field(), d) - length * ms.value));
        }
    }
    c.expect(worst <= 1e-6, "min-set frame energy gap " + fmt(worst));
    c.note("drift " + fmt(drift) + ", roundtrip " + fmt(e400) + " (order " + fmt(order) + "), energy gap " + fmt(worst));
}

void gamma_scaling(const VerifyOptions &o, Checks &c) {
    const auto model = relaxation::relax_thickness(material::Twist{}, o.params);
    const plate::PlateDomain domain;
    const auto m = plate::minimize_over_cylinders(model, Quadratic2::from(o.params), domain);
    const auto base = plate::CylindricalIsometry::constant(m.minimizers.front().phi, m.minimizers.front().kappa, domain);
    const auto table = plate::gamma_scaling_sweep(material::Twist{}, o.params, base, {1e-1, 3e-2, 1e-2, 3e-3, 1e-3});
    c.expect(table.monotone, "gap not monotone");
    c.expect(table.fitted_slope >= 0.8, "fitted slope " + fmt(table.fitted_slope));
    const double last = table.rows.back().energy_rescaled;
    const double rel = std::abs(last - table.plate_energy) / std::abs(table.plate_energy);
    c.expect(rel <= 0.05, "h = 1e-3 relative gap " + fmt(rel));
    c.note("F_lim = " + fmt(table.plate_energy) + ", slope " + fmt(table.fitted_slope) + ", last rel gap " + fmt(rel));
}

void material_layer(const VerifyOptions &o, Checks &c) {
    std::mt19937 rng(o.seed + 10);
    std::normal_distribution<double> n(0.0, 1.0);
    const auto &p = o.params;
    const double eps = 1e-4;
    double worst_hess = 0;
    for (int i = 0; i < 100; ++i) {
        Mat3 M;
        for (int r = 0; r < 3; ++r)
            for (int s = 0; s < 3; ++s) M(r, s) = n(rng);
        const Mat3 I = Mat3::Identity();
        const double fd = (material::w0(I + eps * M, p) - 2 * material::w0(I, p) + material::w0(I - eps * M, p)) / (eps * eps);
        const double exact = material::q3(M, p);
        worst_hess = std::max(worst_hess, std::abs(fd - exact) / std::abs(exact));
    }
    c.expect(worst_hess <= 1e-5, "Hessian relative gap " + fmt(worst_hess));

    double worst_rot = 0;
    for (int i = 0; i < 100; ++i) {
        const Vec3 w = random_unit(rng) * std::uniform_real_distribution<double>(0, pi)(rng);
        worst_rot = std::max(worst_rot, std::abs(material::w0(rotation_exp(w), p)));
    }
    c.expect(worst_rot <= 1e-12, "w0 on rotations " + fmt(worst_rot));

    int nonpositive = 0;
    for (int i = 0; i < 1000; ++i) {
        Mat3 F;
        for (int r = 0; r < 3; ++r)
            for (int s = 0; s < 3; ++s) F(r, s) = n(rng);
        if (F.determinant() < 0) F.col(0) *= -1;
        if (!(material::w0(F, p) > 0)) ++nonpositive;
    }
    c.expect(nonpositive == 0, std::to_string(nonpositive) + " non-rotations with w0 <= 0");

    const double twist = material::riemann_flatness_defect(material::Twist{}, p, 1.0, 64);
    const double flat = material::riemann_defect([](double) { return Mat3::Identity(); }, -0.5, 0.5, 64);
    c.expect(twist > 1e-4, "twist Riemann defect " + fmt(twist));
    c.expect(flat < 1e-10, "flat Riemann defect " + fmt(flat));
    c.note("Hessian gap " + fmt(worst_hess) + ", twist defect " + fmt(twist) + ", flat defect " + fmt(flat));
}

} // namespace

bool VerifyResult::all_pass() const {
    return std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult &r) { return r.pass; });
}

const char *criterion_name(int id) {
    switch (id) {
        case 1: return "twist plate constants";
        case 2: return "relaxation oracle equivalence";
        case 3: return "splay-bend target and residual oracle";
        case 4: return "bilayer residual";
        case 5: return "plate minimum over cylinders";
        case 6: return "rod density continuity and minimum set";
        case 7: return "rod density symmetries";
        case 8: return "frame integration and rate recovery";
        case 9: return "energy scaling h -> 0";
        case 10: return "material layer";
        default: return "unknown";
    }
}

namespace {

CriterionResult run(int id, const VerifyOptions &opts, VerifyResult *sink) {
    CriterionResult r;
    r.id = id;
    r.name = criterion_name(id);
    const auto start = std::chrono::steady_clock::now();
    Checks c;
    try {
        switch (id) {
            case 1: twist_constants(opts, c); break;
            case 2: oracle_equivalence(opts, c); break;
            case 3: splay_bend(opts, sink, c); break;
            case 4: bilayer(opts, sink, c); break;
            case 5: plate_minimum(opts, c); break;
            case 6: rod_density(opts, c); break;
            case 7: rod_symmetry(opts, c); break;
            case 8: geometry_checks(opts, c); break;
            case 9: gamma_scaling(opts, c); break;
            case 10: material_layer(opts, c); break;
            default: throw Error(ErrorKind::InvalidArgument, "no criterion " + std::to_string(id));
        }
    } catch (const Error &e) {
        c.expect(false, std::string(to_string(e.kind())) + ": " + e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.pass = c.pass();
    r.detail = c.detail();
    return r;
}

} // namespace

CriterionResult run_criterion(int id, const VerifyOptions &opts) { return run(id, opts, nullptr); }

VerifyResult run_acceptance(const VerifyOptions &opts) {
    VerifyResult out;
    for (int id = 1; id <= kCriterionCount; ++id) {
        if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), id) == opts.only.end()) continue;
        out.criteria.push_back(run(id, opts, &out));
    }
    out.comparisons.insert(out.comparisons.begin(),
                           relaxation::paper_comparison(relaxation::relax_thickness(material::Twist{}, opts.params)));
    return out;
}

PatternSearchResult pattern_search(const std::function<double(const std::vector<double> &)> &f,
                                   std::vector<double> x0, double step, double min_step, int max_evaluations) {
    PatternSearchResult r;
    const std::size_t n = x0.size();
    std::vector<double> base = std::move(x0);
    double fbase = f(base);
    r.evaluations = 1;

    const auto explore = [&](std::vector<double> x, double fx, double h) {
        for (std::size_t i = 0; i < n; ++i) {
            const double orig = x[i];
            x[i] = orig + h;
            double ft = f(x);
            ++r.evaluations;
            if (ft < fx) { fx = ft; continue; }
            x[i] = orig - h;
            ft = f(x);
            ++r.evaluations;
            if (ft < fx) { fx = ft; continue; }
            x[i] = orig;
        }
        return std::pair{x, fx};
    };

    while (step > min_step && r.evaluations < max_evaluations) {
        auto [x, fx] = explore(base, fbase, step);
        if (!(fx < fbase)) {
            step *= 0.5;
            continue;
        }
        // Pattern moves along the last improving direction.
        while (fx < fbase && r.evaluations < max_evaluations) {
            std::vector<double> pattern(n);
            for (std::size_t i = 0; i < n; ++i) pattern[i] = 2 * x[i] - base[i];
            base = x;
            fbase = fx;
            std::tie(x, fx) = explore(pattern, f(pattern), step);
            ++r.evaluations;
        }
    }
    r.x = base;
    r.value = fbase;
    return r;
}

double bilayer_residual_search(const material::Bilayer &bilayer, const MaterialParams &params) {
    const Quadratic2 form = Quadratic2::from(params);
    const auto rule = quadrature::split_thickness_rule(2);
    const Mat2 top = upper_block(bilayer.m1), bottom = upper_block(bilayer.m2);
    const auto functional = [&](const std::vector<double> &v) {
        const Mat2 D = sym2_from_coords(Vec3(v[0], v[1], v[2]));
        const Mat2 G = sym2_from_coords(Vec3(v[3], v[4], v[5]));
        double sum = 0;
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const double t = rule.nodes[q];
            sum += rule.weights[q] * relaxation::q2(D + t * G + (t >= 0 ? top : bottom), form);
        }
        return sum;
    };
    return pattern_search(functional, std::vector<double>(6, 0.0)).value;
}

} // namespace ribbonlab::tools
