#include "ribbonlab/tools/commands.hpp"

#include "ribbonlab/format.hpp"
#include "ribbonlab/geometry.hpp"
#include "ribbonlab/plate.hpp"
#include "ribbonlab/relaxation.hpp"
#include "ribbonlab/rod.hpp"
#include "ribbonlab/tools/verify.hpp"
#include "ribbonlab/version.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>

namespace ribbonlab::tools {

using nlohmann::json;

namespace units {
constexpr const char *none = "1";
constexpr const char *curvature = "1/h0";
constexpr const char *density = "mu";          // energy per unit mid-surface area
constexpr const char *plate_energy = "mu*h0^2"; // integrated over the strip
constexpr const char *rod_energy = "mu*h0";     // integrated along the centerline
constexpr const char *angle = "rad";
constexpr const char *length = "h0";
constexpr const char *time = "s";
} // namespace units

namespace {

std::ofstream open_output(const std::string &path) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot open " + path + " for writing");
    return out;
}

void finish(std::ofstream &out, const std::string &path) {
    out.flush();
    if (!out) throw Error(ErrorKind::Io, "failed writing " + path);
}

void write_json(const json &doc, const std::string &path) {
    auto out = open_output(path);
    out << doc.dump(2) << '\n';
    finish(out, path);
}

std::string output_path(const RunConfig &config, const std::string &fallback) {
    return config.out.empty() ? fallback : config.out;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json model_block(const relaxation::PlateModel &m) {
    return {{"alpha_coeff", quantity(m.alpha_coeff, units::none)},
            {"target_curvature", quantity(m.target_curvature, units::curvature)},
            {"residual", quantity(m.residual, units::density)}};
}

json comparison_block(const relaxation::ComparisonReport &rep) {
    json entries = json::array();
    for (const auto &e : rep.entries) {
        entries.push_back({{"quantity", e.quantity},
                           {"printed_expression", e.printed_expression},
                           {"printed_value", quantity(e.printed_value, e.units)},
                           {"oracle_value", quantity(e.oracle_value, e.units)},
                           {"abs_gap", quantity(e.abs_gap, e.units)},
                           {"rel_gap", quantity(e.rel_gap, units::none)},
                           {"discrepancy", e.discrepancy},
                           {"note", e.note}});
    }
    return {{"texture", rep.texture},
            {"threshold", quantity(relaxation::kDiscrepancyThreshold, units::none)},
            {"any_discrepancy", rep.any_discrepancy()},
            {"entries", entries}};
}

plate::CylinderSearch cylinder_search(const RunConfig &config) {
    plate::CylinderSearch s;
    s.scan_samples = config.scan_samples;
    return s;
}

rod::RodDensity twist_rod_density(const RunConfig &config) {
    if (config.texture != "twist")
        throw Error(ErrorKind::Config, "the rod model is defined for the twist texture only");
    auto d = rod::RodDensity::make(config.theta, config.material());
    d.d_branch_ratio = config.d_branch_ratio;
    return d;
}

} // namespace

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Io: return kExitIo;
        case ErrorKind::Config:
        case ErrorKind::InvalidArgument:
        case ErrorKind::InvalidConfiguration:
        case ErrorKind::UnsupportedTexture: return kExitConfig;
        default: return kExitNumeric;
    }
}

json quantity(double value, const std::string &units) {
    json v = std::isfinite(value) ? json(value) : json(nullptr);
    return {{"value", v}, {"units", units}};
}

json quantity(const Mat2 &value, const std::string &units) {
    return {{"value", {{value(0, 0), value(0, 1)}, {value(1, 0), value(1, 1)}}}, {"units", units}};
}

json report_header(const std::string &command, const RunConfig &config) {
    return {{"schema", kReportSchema},
            {"version", kVersion},
            {"command", command},
            {"timestamp", utc_timestamp()},
            {"config", config_to_json(config)}};
}

int cmd_derive(const RunConfig &config, std::ostream &log) {
    config.validate();
    const auto params = config.material();
    const auto texture = config.make_texture();
    relaxation::QuadratureOptions qopts;
    qopts.order = config.quad;
    const auto model = relaxation::relax_thickness(texture, params, qopts);
    const auto oracle = relaxation::relax_thickness_oracle(texture, params, config.quad);
    const auto comparison = relaxation::paper_comparison(model);
    const auto form = relaxation::Quadratic2::from(params);
    const auto minimum = plate::minimize_over_cylinders(model, form, config.domain(), cylinder_search(config));

    json report = report_header("derive", config);
    report["texture"] = model.texture_tag();
    report["closed_form"] = model_block(model);
    report["oracle"] = model_block(oracle);
    report["oracle_gap"] = {
        {"alpha_coeff", quantity(std::abs(model.alpha_coeff - oracle.alpha_coeff), units::none)},
        {"target_curvature",
         quantity((model.target_curvature - oracle.target_curvature).cwiseAbs().maxCoeff(), units::curvature)},
        {"residual", quantity(std::abs(model.residual - oracle.residual), units::density)}};
    report["paper_comparison"] = comparison_block(comparison);
    json minimizers = json::array();
    for (const auto &m : minimum.minimizers)
        minimizers.push_back({{"phi", quantity(m.phi, units::angle)}, {"kappa", quantity(m.kappa, units::curvature)}});
    report["plate_minimum"] = {{"energy_per_area", quantity(minimum.energy_per_area, units::density)},
                               {"energy", quantity(minimum.energy, units::plate_energy)},
                               {"degenerate_family", minimum.degenerate_family},
                               {"minimizers", minimizers}};

    const std::string path = output_path(config, "derive.json");
    write_json(report, path);

    log << std::setprecision(7);
    log << "texture " << model.texture_tag() << ": alpha = " << model.alpha_coeff << ", target = ["
        << model.target_curvature(0, 0) << ", " << model.target_curvature(0, 1) << "; "
        << model.target_curvature(1, 0) << ", " << model.target_curvature(1, 1) << "], residual = " << model.residual
        << '\n';
    log << "plate minimum per area " << minimum.energy_per_area << " over " << minimum.minimizers.size()
        << (minimum.degenerate_family ? " (degenerate family)" : "") << " direction(s)\n";
    if (comparison.any_discrepancy()) log << "printed closed form disagrees with the oracle (see report)\n";
    log << "wrote " << path << '\n';
    return kExitOk;
}

int cmd_rod(const RunConfig &config, std::ostream &log) {
    config.validate();
    const auto density = twist_rod_density(config);
    const auto alpha = config.grid.alpha.resolve(density.k);
    const auto beta = config.grid.beta.resolve(density.k);
    const auto min_set = rod::rod_min_set(density);
    const auto brute = rod::rod_min_brute(density, alpha, beta);

    const std::string path = output_path(config, "rod.csv");
    auto out = open_output(path);
    out << "# ribbonlab rod v1\n";
    rod::write_density_csv(out, density, alpha, beta);
    out << "# min_set alpha_lo=" << shortest(min_set.alpha_lo) << " alpha_hi=" << shortest(min_set.alpha_hi)
        << " beta=" << shortest(min_set.beta) << " value=" << shortest(min_set.value) << '\n';
    out << "# grid_min value=" << shortest(brute.value) << " alpha=" << shortest(brute.alpha)
        << " beta=" << shortest(brute.beta) << '\n';
    finish(out, path);

    log << std::setprecision(7);
    log << "theta " << config.theta << ": minimum " << min_set.value << " on [" << min_set.alpha_lo << ", "
        << min_set.alpha_hi << "] x {" << min_set.beta << "}\n";
    log << "grid minimum " << brute.value << " at (" << brute.alpha << ", " << brute.beta << ")\n";
    log << "wrote " << path << '\n';
    return kExitOk;
}

int cmd_shape(const RunConfig &config, std::ostream &log) {
    config.validate();
    const auto density = twist_rod_density(config);
    const auto min_set = rod::rod_min_set(density);
    double flexure = config.flexure, torsion = config.torsion;
    if (config.from_min_set) {
        flexure = min_set.alpha_at(*config.from_min_set);
        torsion = min_set.beta;
    }
    const auto traj = geometry::integrate_frame(flexure, torsion, Mat3::Identity(), config.length, config.samples);
    auto mesh = geometry::ribbon_mesh(traj, config.width, config.n_across);
    mesh.metadata.emplace_back("theta", shortest(config.theta));
    mesh.metadata.emplace_back("flexure", shortest(flexure));
    mesh.metadata.emplace_back("torsion", shortest(torsion));

    const double energy = rod::rod_energy(traj.frame_field(), density);
    const double gap = energy - config.length * min_set.value;

    std::string stem = output_path(config, "shape");
    if (stem.size() > 4 && stem.substr(stem.size() - 4) == ".obj") stem.resize(stem.size() - 4);
    const std::string obj_path = stem + ".obj", csv_path = stem + ".csv";
    {
        auto out = open_output(obj_path);
        geometry::write_obj(out, mesh);
        finish(out, obj_path);
    }
    {
        auto out = open_output(csv_path);
        geometry::write_trajectory_csv(out, traj);
        finish(out, csv_path);
    }

    log << std::setprecision(10);
    log << "flexure " << flexure << ", torsion " << torsion << '\n';
    log << "rod energy " << energy << " (minimum " << config.length * min_set.value << ", gap " << gap << ")\n";
    log << "wrote " << obj_path << " and " << csv_path << '\n';
    return kExitOk;
}

int cmd_gamma_check(const RunConfig &config, std::ostream &log) {
    config.validate();
    const auto params = config.material();
    const auto texture = config.make_texture();
    const auto model = relaxation::relax_thickness(texture, params);
    const auto form = relaxation::Quadratic2::from(params);
    const auto domain = config.domain();
    const auto minimum = plate::minimize_over_cylinders(model, form, domain, cylinder_search(config));
    const auto &best = minimum.minimizers.front();
    const auto base = plate::CylindricalIsometry::constant(best.phi, best.kappa, domain);

    plate::ThicknessQuadrature quad;
    quad.inplane = config.plate_quad;
    quad.thickness = config.thickness_quad;
    quad.rel_tol = config.rel_tol;
    const auto table = plate::gamma_scaling_sweep(texture, params, base, config.h_list, quad,
                                                  plate::SweepErrors::RecordPerRow);

    const std::string path = output_path(config, "gamma.csv");
    auto out = open_output(path);
    out << "# ribbonlab gamma-check v1\n";
    out << "h,energy_rescaled,gap,slope_running,error\n";
    for (const auto &r : table.rows) {
        out << shortest(r.h) << ',' << shortest(r.energy_rescaled) << ',' << shortest(r.gap) << ','
            << shortest(r.slope_running) << ',' << (r.error ? "\"" + *r.error + "\"" : "") << '\n';
    }
    out << "# plate_energy=" << shortest(table.plate_energy) << " fitted_slope=" << shortest(table.fitted_slope)
        << " monotone=" << (table.monotone ? "true" : "false") << " exact=" << (table.exact ? "true" : "false")
        << " phi=" << shortest(best.phi) << " kappa=" << shortest(best.kappa) << '\n';
    finish(out, path);

    log << std::setprecision(7);
    for (const auto &r : table.rows) {
        log << "h = " << r.h << ": ";
        if (r.error) log << "error: " << *r.error << '\n';
        else log << "F_h/h^2 = " << r.energy_rescaled << ", gap = " << r.gap << '\n';
    }
    log << "F_lim = " << table.plate_energy << ", fitted slope " << table.fitted_slope
        << (table.monotone ? ", monotone" : ", not monotone") << (table.exact ? ", exact" : "") << '\n';
    log << "wrote " << path << '\n';
    const bool pass = table.exact || table.fitted_slope >= config.slope_threshold;
    if (!pass) log << "slope below threshold " << config.slope_threshold << '\n';
    return pass ? kExitOk : kExitAcceptance;
}

int cmd_verify(const RunConfig &config, std::ostream &log) {
    config.validate();
    VerifyOptions opts;
    opts.params = config.material();
    opts.seed = config.seed;
    opts.d_branch_ratio = config.d_branch_ratio;
    opts.only = config.criteria;
    const auto result = run_acceptance(opts);

    json report = report_header("verify", config);
    json criteria = json::array();
    for (const auto &c : result.criteria) {
        criteria.push_back({{"id", c.id},
                            {"name", c.name},
                            {"pass", c.pass},
                            {"detail", c.detail},
                            {"seconds", quantity(c.seconds, units::time)}});
        log << (c.pass ? "PASS" : "FAIL") << "  " << std::setw(2) << c.id << "  " << c.name;
        if (!c.detail.empty()) log << "  (" << c.detail << ")";
        log << '\n';
    }
    report["criteria"] = criteria;
    report["all_pass"] = result.all_pass();
    json comparisons = json::array();
    for (const auto &c : result.comparisons) comparisons.push_back(comparison_block(c));
    report["paper_comparison"] = comparisons;

    const std::string path = output_path(config, "verify.json");
    write_json(report, path);
    log << (result.all_pass() ? "all criteria pass" : "acceptance failure") << "; wrote " << path << '\n';
    return result.all_pass() ? kExitOk : kExitAcceptance;
}

int guarded(const std::function<int()> &command, std::ostream &err) {
    try {
        return command();
    } catch (const Error &e) {
        err << "ribbonlab: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const json::exception &e) {
        err << "ribbonlab: config: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception &e) {
        err << "ribbonlab: numeric: " << e.what() << '\n';
        return kExitNumeric;
    }
}

} // namespace ribbonlab::tools
