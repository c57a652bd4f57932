#include "ribbonlab/geometry.hpp"

#include "ribbonlab/errors.hpp"
#include "ribbonlab/format.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

namespace ribbonlab::geometry {

namespace {

// Body angular velocity with hat(w) = Omega(flexure, torsion).
Vec3 body_rate(double flexure, double torsion) { return {torsion, -flexure, 0.0}; }

void check_samples(double length, int n_samples) {
    if (n_samples < 2) throw Error(ErrorKind::InvalidArgument, "integrate_frame needs at least two samples");
    if (!(length > 0)) throw Error(ErrorKind::InvalidArgument, "trajectory length must be positive");
}

Mat3 nearest_rotation(const Mat3 &M) {
    Eigen::JacobiSVD<Mat3> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().transpose();
}

} // namespace

double FrameTrajectory::max_drift() const {
    double drift = 0;
    for (const auto &r : R) drift = std::max(drift, (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff());
    return drift;
}

FrameTrajectory integrate_frame(double flexure, double torsion, const Mat3 &R0, double length, int n_samples) {
    check_samples(length, n_samples);
    const Vec3 w = body_rate(flexure, torsion);
    const double ds = length / (n_samples - 1);
    FrameTrajectory t;
    t.s.resize(n_samples);
    t.R.resize(n_samples);
    t.x.resize(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        const double run = i * ds;
        t.s[i] = -0.5 * length + run;
        t.R[i] = R0 * rotation_exp(run * w);
        t.x[i] = R0 * rotation_exp_integral(w, run).col(0);
    }
    return t;
}

FrameTrajectory integrate_frame(const Rate &flexure, const Rate &torsion, const Mat3 &R0, double length,
                                int n_samples) {
    check_samples(length, n_samples);
    const double ds = length / (n_samples - 1);
    FrameTrajectory t;
    t.s.resize(n_samples);
    t.R.resize(n_samples);
    t.x.resize(n_samples);
    t.s[0] = -0.5 * length;
    t.R[0] = R0;
    t.x[0] = Vec3::Zero();
    for (int i = 1; i < n_samples; ++i) {
        t.s[i] = -0.5 * length + i * ds;
        const double mid = 0.5 * (t.s[i - 1] + t.s[i]);
        const Vec3 w = body_rate(flexure(mid), torsion(mid));
        t.x[i] = t.x[i - 1] + t.R[i - 1] * rotation_exp_integral(w, ds).col(0);
        Mat3 next = t.R[i - 1] * rotation_exp(ds * w);
        if ((next.transpose() * next - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-14) next = nearest_rotation(next);
        t.R[i] = next;
    }
    return t;
}

double RibbonMesh::area() const {
    double a = 0;
    for (const auto &t : triangles)
        a += 0.5 * (vertices[t[1]] - vertices[t[0]]).cross(vertices[t[2]] - vertices[t[0]]).norm();
    return a;
}

double RibbonMesh::min_triangle_area() const {
    double a = std::numeric_limits<double>::infinity();
    for (const auto &t : triangles)
        a = std::min(a, 0.5 * (vertices[t[1]] - vertices[t[0]]).cross(vertices[t[2]] - vertices[t[0]]).norm());
    return a;
}

namespace {

void triangulate(RibbonMesh &mesh) {
    for (int i = 0; i + 1 < mesh.n_along; ++i) {
        for (int j = 0; j + 1 < mesh.n_across; ++j) {
            mesh.triangles.push_back({mesh.index(i, j), mesh.index(i + 1, j), mesh.index(i + 1, j + 1)});
            mesh.triangles.push_back({mesh.index(i, j), mesh.index(i + 1, j + 1), mesh.index(i, j + 1)});
        }
    }
}

} // namespace

RibbonMesh ribbon_mesh(const FrameTrajectory &traj, double width, int n_across) {
    if (!(width > 0)) throw Error(ErrorKind::InvalidArgument, "ribbon width must be positive");
    if (n_across < 2 || traj.size() < 2) throw Error(ErrorKind::InvalidArgument, "ribbon mesh needs a 2x2 grid");
    RibbonMesh mesh;
    mesh.n_along = static_cast<int>(traj.size());
    mesh.n_across = n_across;
    mesh.vertices.reserve(mesh.n_along * n_across);
    for (int i = 0; i < mesh.n_along; ++i) {
        for (int j = 0; j < n_across; ++j) {
            const double t = -0.5 * width + width * j / (n_across - 1);
            mesh.vertices.push_back(traj.x[i] + t * traj.R[i].col(1));
        }
    }
    triangulate(mesh);
    mesh.metadata.emplace_back("kind", "ribbon");
    mesh.metadata.emplace_back("length", shortest(traj.s.back() - traj.s.front()));
    mesh.metadata.emplace_back("width", shortest(width));
    return mesh;
}

RibbonMesh cylinder_mesh(double phi, double kappa, const plate::PlateDomain &domain, int n_along, int n_across) {
    if (n_along < 2 || n_across < 2) throw Error(ErrorKind::InvalidArgument, "cylinder mesh needs a 2x2 grid");
    const auto cyl = plate::CylindricalIsometry::constant(phi, kappa, domain);
    RibbonMesh mesh;
    mesh.n_along = n_along;
    mesh.n_across = n_across;
    mesh.vertices.reserve(n_along * n_across);
    for (int i = 0; i < n_along; ++i) {
        const double z1 = -0.5 * domain.length + domain.length * i / (n_along - 1);
        for (int j = 0; j < n_across; ++j) {
            const double z2 = -0.5 * domain.width + domain.width * j / (n_across - 1);
            mesh.vertices.push_back(cyl.position(domain.point(z1, z2)));
        }
    }
    triangulate(mesh);
    mesh.metadata.emplace_back("kind", "cylinder");
    mesh.metadata.emplace_back("phi", shortest(phi));
    mesh.metadata.emplace_back("kappa", shortest(kappa));
    mesh.metadata.emplace_back("theta", shortest(domain.theta));
    mesh.metadata.emplace_back("length", shortest(domain.length));
    mesh.metadata.emplace_back("width", shortest(domain.width));
    return mesh;
}

RecoveredRates recover_rates(const FrameTrajectory &traj) {
    if (traj.size() < 3) throw Error(ErrorKind::InvalidArgument, "rate recovery needs at least three samples");
    const auto rates = rod::frame_rates(traj.frame_field());
    return {traj.s, rates.flexure, rates.torsion, rates.inplane};
}

std::vector<double> angle_defects(const RibbonMesh &mesh) {
    std::vector<double> sum(mesh.vertices.size(), 0.0);
    for (const auto &t : mesh.triangles) {
        for (int c = 0; c < 3; ++c) {
            const Vec3 &p = mesh.vertices[t[c]];
            const Vec3 u = mesh.vertices[t[(c + 1) % 3]] - p, v = mesh.vertices[t[(c + 2) % 3]] - p;
            sum[t[c]] += std::atan2(u.cross(v).norm(), u.dot(v));
        }
    }
    std::vector<double> defect(sum.size(), std::numeric_limits<double>::quiet_NaN());
    for (int i = 1; i + 1 < mesh.n_along; ++i)
        for (int j = 1; j + 1 < mesh.n_across; ++j) defect[mesh.index(i, j)] = 2 * pi - sum[mesh.index(i, j)];
    return defect;
}

double max_interior_angle_defect(const RibbonMesh &mesh) {
    double m = 0;
    for (double d : angle_defects(mesh))
        if (!std::isnan(d)) m = std::max(m, std::abs(d));
    return m;
}

void write_obj(std::ostream &out, const RibbonMesh &mesh) {
    out << "# ribbonlab mesh v1\n";
    for (const auto &[key, value] : mesh.metadata) out << "# ribbonlab " << key << ' ' << value << '\n';
    out << "# ribbonlab units h0\n";
    for (const auto &v : mesh.vertices)
        out << "v " << shortest(v(0)) << ' ' << shortest(v(1)) << ' ' << shortest(v(2)) << '\n';
    for (const auto &t : mesh.triangles) out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
}

void write_trajectory_csv(std::ostream &out, const FrameTrajectory &traj) {
    out << "# ribbonlab trajectory v1\n";
    out << "s,x1,x2,x3,d1_1,d1_2,d1_3,d2_1,d2_2,d2_3,d3_1,d3_2,d3_3\n";
    for (std::size_t i = 0; i < traj.size(); ++i) {
        out << shortest(traj.s[i]);
        for (int c = 0; c < 3; ++c) out << ',' << shortest(traj.x[i](c));
        for (int c = 0; c < 3; ++c)
            for (int r = 0; r < 3; ++r) out << ',' << shortest(traj.R[i](r, c));
        out << '\n';
    }
}

} // namespace ribbonlab::geometry
