#include "ribbonlab/tools/commands.hpp"
#include "ribbonlab/tools/config.hpp"
#include "ribbonlab/version.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

using namespace ribbonlab::tools;

namespace {

struct Overrides {
    std::string config_path;
    std::optional<std::string> texture, theta, out, grid, h_list, criteria;
    std::optional<double> mu, gamma, alpha0, h0, length, width, from_min_set, flexure, torsion, d_branch_ratio;
    std::optional<int> quad, samples;
    std::optional<unsigned> seed;
};

RunConfig resolve(const Overrides &o) {
    RunConfig c = o.config_path.empty() ? RunConfig{} : load_config(o.config_path);
    if (o.mu) c.mu = *o.mu;
    if (o.gamma) c.gamma = *o.gamma;
    if (o.alpha0) c.alpha0 = *o.alpha0;
    if (o.h0) c.h0 = *o.h0;
    if (o.texture) c.texture = *o.texture;
    if (o.theta) c.theta = parse_angle(*o.theta);
    if (o.length) c.length = *o.length;
    if (o.width) c.width = *o.width;
    if (o.out) c.out = *o.out;
    if (o.grid) c.grid = parse_grid(*o.grid);
    if (o.h_list) c.h_list = parse_h_list(*o.h_list);
    if (o.quad) c.quad = c.plate_quad = c.thickness_quad = *o.quad;
    if (o.samples) c.samples = *o.samples;
    if (o.flexure) c.flexure = *o.flexure;
    if (o.torsion) c.torsion = *o.torsion;
    if (o.from_min_set) c.from_min_set = *o.from_min_set;
    if (o.seed) c.seed = *o.seed;
    if (o.d_branch_ratio) c.d_branch_ratio = *o.d_branch_ratio;
    if (o.criteria) {
        c.criteria.clear();
        for (double v : parse_h_list(*o.criteria)) c.criteria.push_back(static_cast<int>(v));
    }
    c.validate();
    return c;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"ribbonlab: plate, rod and ribbon models of thin nematic elastomer sheets"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.set_version_flag("--version", std::string(ribbonlab::kVersion));
    app.require_subcommand(1);
    app.fallthrough();

    Overrides o;
    app.add_option("--config", o.config_path, "JSON run configuration (flags override its values)");
    app.add_option("--texture", o.texture, "twist|splaybend|director|bilayer [twist]");
    app.add_option("--mu", o.mu, "shear modulus [1]");
    app.add_option("--gamma", o.gamma, "volumetric ratio gamma in (0, 1) [0.3]");
    app.add_option("--alpha0", o.alpha0, "activation amplitude [1]");
    app.add_option("--h0", o.h0, "reference thickness [1]");
    app.add_option("--theta", o.theta, "cut angle in radians, or deg:<degrees> [0]");
    app.add_option("--length", o.length, "strip length [10]");
    app.add_option("--width", o.width, "strip width [1]");
    app.add_option("--out", o.out, "output path (shape: stem for .obj and .csv)");
    app.add_option("--grid", o.grid, "rod grid MIN:MAX:N[,MIN:MAX:N], k suffix scales by k [-3k:3k:601]");
    app.add_option("--h", o.h_list, "comma separated decreasing thicknesses [0.1,0.03,0.01,0.003,0.001]");
    app.add_option("--from-min-set", o.from_min_set, "point of the rod minimum set: 0 left, 1 right end");
    app.add_option("--quad", o.quad, "Gauss points per panel [16 relaxation, 8 plate]");
    app.add_option("--flexure", o.flexure, "constant flexure d1'.d3 for shape [0]");
    app.add_option("--torsion", o.torsion, "constant torsion d2'.d3 for shape [0]");
    app.add_option("--samples", o.samples, "trajectory samples for shape [400]");
    app.add_option("--seed", o.seed, "random seed for verify");
    app.add_option("--criteria", o.criteria, "comma separated subset of criteria 1-10 for verify");
    app.add_option("--d-branch-ratio", o.d_branch_ratio, "override of the rod D-branch ratio (negative control)")
        ->group("");

    const auto run = [&](int (*command)(const RunConfig &, std::ostream &)) {
        return guarded([&] { return command(resolve(o), std::cout); }, std::cerr);
    };
    int code = 0;
    app.add_subcommand("derive", "plate constants, oracle and printed-form comparison (JSON)")
        ->callback([&] { code = run(cmd_derive); });
    app.add_subcommand("rod", "tabulate the rod density on a grid (CSV)")->callback([&] { code = run(cmd_rod); });
    app.add_subcommand("shape", "ribbon reconstruction from constant rates (OBJ + CSV)")
        ->callback([&] { code = run(cmd_shape); });
    app.add_subcommand("gamma-check", "energy scaling sweep h -> 0 (CSV)")
        ->callback([&] { code = run(cmd_gamma_check); });
    app.add_subcommand("verify", "acceptance suite and comparison ledger (JSON)")
        ->callback([&] { code = run(cmd_verify); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }
    return code;
}
