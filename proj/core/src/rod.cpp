#include "ribbonlab/rod.hpp"

#include "ribbonlab/errors.hpp"
#include "ribbonlab/format.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ribbonlab::rod {

RodDensity RodDensity::from_plate_model(const relaxation::PlateModel &twist_model, double theta) {
    if (!std::holds_alternative<material::Twist>(twist_model.texture))
        throw Error(ErrorKind::UnsupportedTexture, "rod density requires the twist plate model");
    if (!(theta >= 0 && theta < pi)) throw Error(ErrorKind::InvalidArgument, "theta must lie in [0, pi)");
    RodDensity d;
    d.theta = theta;
    d.k = twist_model.target_curvature(1, 1);
    d.a_theta = std::cos(2 * theta);
    d.b_theta = std::sin(2 * theta);
    d.gamma = twist_model.params.gamma();
    d.mu = twist_model.params.mu;
    d.beta_T = twist_model.residual;
    return d;
}

RodDensity RodDensity::make(double theta, const material::MaterialParams &params) {
    return from_plate_model(relaxation::relax_thickness(material::Twist{}, params), theta);
}

Mat2 RodDensity::rotated_target() const {
    Mat2 target;
    target << -k, 0, 0, k;
    const double c = std::cos(theta), s = std::sin(theta);
    Mat2 R;
    R << c, -s, s, c;
    return R.transpose() * target * R;
}

Mat2 RodDensity::printed_rotated_target() const {
    Mat2 m;
    m << -a_theta, b_theta, b_theta, a_theta;
    return k * m;
}

const char *to_string(RodRegion region) {
    switch (region) {
        case RodRegion::D: return "D";
        case RodRegion::U: return "U";
        case RodRegion::V: return "V";
    }
    return "?";
}

RodRegion classify(double alpha, double beta, const RodDensity &d) {
    const double lhs = d.k * d.a_theta / (1.0 + d.gamma) * alpha;
    if (lhs > beta * beta + alpha * alpha) return RodRegion::D;
    if (lhs <= beta * beta - alpha * alpha) return RodRegion::U;
    return RodRegion::V;
}

double d_branch(double alpha, double beta, const RodDensity &d) {
    return d.mu / 3 * d.k * (d.a_theta * alpha - d.b_theta * beta)
         + d.mu / 12 * d.k * d.k * (2 - d.ratio() * d.a_theta * d.a_theta) + 0.5 * d.beta_T;
}

double u_branch(double, double beta, const RodDensity &d) {
    return d.mu / 3 * ((1 + d.gamma) * beta * beta - d.k * d.b_theta * beta)
         + d.mu / 12 * d.k * d.k * (2 - d.a_theta * d.a_theta / (1 + d.gamma)) + 0.5 * d.beta_T;
}

double v_branch(double alpha, double beta, const RodDensity &d) {
    const double r2 = alpha * alpha + beta * beta;
    return d.mu / 12 * (1 + d.gamma) * r2 * r2 / (alpha * alpha)
         + d.mu / 6 * d.k * (d.a_theta * (alpha * alpha - beta * beta) / alpha - 2 * d.b_theta * beta)
         + d.mu / 6 * d.k * d.k + 0.5 * d.beta_T;
}

double rod_density(double alpha, double beta, const RodDensity &density) {
    switch (classify(alpha, beta, density)) {
        case RodRegion::D: return d_branch(alpha, beta, density);
        case RodRegion::U: return u_branch(alpha, beta, density);
        case RodRegion::V:
            if (alpha == 0.0) {
                std::ostringstream ss;
                ss << "(0, " << beta << ") lies in the interior of V where the density divides by alpha";
                throw Error(ErrorKind::DomainSingularity, ss.str());
            }
            return v_branch(alpha, beta, density);
    }
    return 0.0;
}

RodMinSet rod_min_set(const RodDensity &d) {
    RodMinSet m;
    const double c = 0.5 * d.k / (1 + d.gamma);
    m.alpha_lo = -c * (1 + d.a_theta);
    m.alpha_hi = c * (1 - d.a_theta);
    m.beta = c * d.b_theta;
    m.value = d.mu / 12 * d.k * d.k * (1 + 2 * d.gamma) / (1 + d.gamma) + 0.5 * d.beta_T;
    return m;
}

void FrameField::validate() const {
    if (s.size() != frames.size()) throw Error(ErrorKind::InvalidFrame, "sample and frame counts differ");
    if (s.size() < 3) throw Error(ErrorKind::InvalidFrame, "a frame field needs at least three samples");
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i > 0 && !(s[i] > s[i - 1])) throw Error(ErrorKind::InvalidFrame, "arc coordinates must increase");
        const Mat3 &R = frames[i];
        const double drift = (R.transpose() * R - Mat3::Identity()).cwiseAbs().maxCoeff();
        if (drift > 1e-10 || R.determinant() < 0) {
            std::ostringstream ss;
            ss << "frame " << i << " is not a rotation (drift " << drift << ")";
            throw Error(ErrorKind::InvalidFrame, ss.str());
        }
    }
}

FrameRates frame_rates(const FrameField &frame) {
    frame.validate();
    const auto &s = frame.s;
    const auto &R = frame.frames;
    const std::size_t n = s.size();
    FrameRates out;
    out.flexure.resize(n);
    out.torsion.resize(n);
    out.inplane.resize(n);

    // Three-point derivative weights on a possibly non-uniform stencil.
    const auto derivative = [&](std::size_t i0, std::size_t at) -> Mat3 {
        const double x0 = s[i0], x1 = s[i0 + 1], x2 = s[i0 + 2], x = s[at];
        const double w0 = ((x - x1) + (x - x2)) / ((x0 - x1) * (x0 - x2));
        const double w1 = ((x - x0) + (x - x2)) / ((x1 - x0) * (x1 - x2));
        const double w2 = ((x - x0) + (x - x1)) / ((x2 - x0) * (x2 - x1));
        return w0 * R[i0] + w1 * R[i0 + 1] + w2 * R[i0 + 2];
    };
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t i0 = i == 0 ? 0 : (i == n - 1 ? n - 3 : i - 1);
        const Mat3 body = R[i].transpose() * derivative(i0, i);
        const Mat3 w = 0.5 * (body - body.transpose());
        out.flexure[i] = w(2, 0);
        out.torsion[i] = w(2, 1);
        out.inplane[i] = w(1, 0);
    }
    return out;
}

double rod_energy(const FrameField &frame, const RodDensity &density) {
    const FrameRates rates = frame_rates(frame);
    const std::size_t n = frame.s.size();
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(rates.inplane[i]) > kAdmissibilityTol) {
            std::ostringstream ss;
            ss << "d1'.d2 = " << rates.inplane[i] << " at s = " << frame.s[i];
            throw Error(ErrorKind::InvalidFrame, ss.str());
        }
        values[i] = rod_density(rates.flexure[i], rates.torsion[i], density);
    }
    double energy = 0;
    for (std::size_t i = 1; i < n; ++i) energy += 0.5 * (frame.s[i] - frame.s[i - 1]) * (values[i] + values[i - 1]);
    return energy;
}

BruteForceMinimum rod_min_brute(const RodDensity &density, const GridAxis &alpha, const GridAxis &beta, double tol) {
    if (alpha.count < 1 || beta.count < 3 || !(alpha.hi >= alpha.lo) || !(beta.hi > beta.lo))
        throw Error(ErrorKind::InvalidArgument, "invalid brute-force grid");

    BruteForceMinimum out;
    out.grid_min = std::numeric_limits<double>::infinity();
    std::vector<Vec2> column_best(alpha.count);
    std::vector<double> column_value(alpha.count);
    const double db = beta.step();
    for (int i = 0; i < alpha.count; ++i) {
        const double a = alpha.at(i);
        int jbest = 0;
        double vbest = std::numeric_limits<double>::infinity();
        for (int j = 0; j < beta.count; ++j) {
            const double v = rod_density(a, beta.at(j), density);
            if (v < vbest) { vbest = v; jbest = j; }
        }
        out.grid_min = std::min(out.grid_min, vbest);
        const double lo = std::max(beta.lo, beta.at(jbest) - db), hi = std::min(beta.hi, beta.at(jbest) + db);
        const auto [b, v] = boost::math::tools::brent_find_minima(
            [&](double b) { return rod_density(a, b, density); }, lo, hi, std::numeric_limits<double>::digits);
        column_best[i] = v < vbest ? Vec2(a, b) : Vec2(a, beta.at(jbest));
        column_value[i] = std::min(v, vbest);
    }

    const auto it = std::min_element(column_value.begin(), column_value.end());
    out.value = *it;
    out.alpha = column_best[it - column_value.begin()](0);
    out.beta = column_best[it - column_value.begin()](1);
    for (int i = 0; i < alpha.count; ++i)
        if (column_value[i] <= out.value + tol) out.argmin.push_back(column_best[i]);
    return out;
}

BruteForceMinimum rod_min_brute(const RodDensity &density, int grid) {
    const double w = 3 * std::abs(density.k);
    const GridAxis axis{-w, w, grid};
    return rod_min_brute(density, axis, axis);
}

double min_set_coverage(const BruteForceMinimum &brute, const RodMinSet &predicted, const GridAxis &alpha) {
    const double slack = 1e-12 * std::max(1.0, std::abs(alpha.hi - alpha.lo));
    int inside = 0, covered = 0;
    for (int i = 0; i < alpha.count; ++i) {
        const double a = alpha.at(i);
        if (a < predicted.alpha_lo - slack || a > predicted.alpha_hi + slack) continue;
        ++inside;
        const bool hit = std::any_of(brute.argmin.begin(), brute.argmin.end(),
                                     [&](const Vec2 &p) { return std::abs(p(0) - a) <= slack; });
        if (hit) ++covered;
    }
    return inside == 0 ? 0.0 : static_cast<double>(covered) / inside;
}

void write_density_csv(std::ostream &out, const RodDensity &density, const GridAxis &alpha, const GridAxis &beta) {
    out << "theta,alpha,beta,region,value\n";
    const std::string theta = shortest(density.theta);
    for (int i = 0; i < alpha.count; ++i) {
        for (int j = 0; j < beta.count; ++j) {
            const double a = alpha.at(i), b = beta.at(j);
            out << theta << ',' << shortest(a) << ',' << shortest(b) << ',' << to_string(classify(a, b, density))
                << ',' << shortest(rod_density(a, b, density)) << '\n';
        }
    }
}

} // namespace ribbonlab::rod
