#include "ribbonlab/tools/config.hpp"

#include "ribbonlab/errors.hpp"
#include "ribbonlab/format.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace ribbonlab::tools {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string &what) { throw Error(ErrorKind::Config, what); }

double parse_number(std::string_view text, const std::string &context) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    double v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
        config_error("cannot parse number '" + std::string(text) + "' in " + context);
    return v;
}

AxisSpec parse_axis(std::string_view text) {
    AxisSpec axis;
    const auto c1 = text.find(':');
    const auto c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
    if (c2 == std::string_view::npos) config_error("grid axis must read MIN:MAX:N, got '" + std::string(text) + "'");
    std::string_view lo = text.substr(0, c1), hi = text.substr(c1 + 1, c2 - c1 - 1), n = text.substr(c2 + 1);
    const bool klo = !lo.empty() && lo.back() == 'k', khi = !hi.empty() && hi.back() == 'k';
    if (klo != khi) config_error("grid bounds must both or neither carry the k suffix");
    axis.in_k = klo;
    if (klo) {
        lo.remove_suffix(1);
        hi.remove_suffix(1);
    }
    axis.lo = parse_number(lo, "grid");
    axis.hi = parse_number(hi, "grid");
    const double count = parse_number(n, "grid");
    if (count != std::floor(count) || count < 1 || count > 1e5) config_error("grid count must be an integer in [1, 1e5]");
    axis.count = static_cast<int>(count);
    if (!(axis.hi >= axis.lo)) config_error("grid MAX must not be below MIN");
    return axis;
}

void check_keys(const json &obj, const std::set<std::string> &allowed, const std::string &where) {
    if (!obj.is_object()) config_error("'" + where + "' must be a JSON object");
    for (const auto &[key, _] : obj.items())
        if (!allowed.count(key)) config_error("unknown key '" + key + "' in " + where);
}

double number(const json &v, const std::string &key) {
    if (!v.is_number()) config_error("'" + key + "' must be a number");
    return v.get<double>();
}

int integer(const json &v, const std::string &key) {
    if (!v.is_number_integer()) config_error("'" + key + "' must be an integer");
    return v.get<int>();
}

double angle(const json &v, const std::string &key) {
    if (v.is_string()) return parse_angle(v.get<std::string>());
    return number(v, key);
}

std::vector<double> numbers(const json &v, const std::string &key, std::size_t size) {
    if (!v.is_array() || (size && v.size() != size))
        config_error("'" + key + "' must be an array of " + std::to_string(size) + " numbers");
    std::vector<double> out;
    for (const auto &x : v) out.push_back(number(x, key));
    return out;
}

} // namespace

rod::GridAxis AxisSpec::resolve(double k) const {
    const double scale = in_k ? std::abs(k) : 1.0;
    return {lo * scale, hi * scale, count};
}

std::string AxisSpec::to_string() const {
    const std::string suffix = in_k ? "k" : "";
    return shortest(lo) + suffix + ":" + shortest(hi) + suffix + ":" + std::to_string(count);
}

std::string GridSpec::to_string() const { return alpha.to_string() + "," + beta.to_string(); }

double parse_angle(const std::string &text) {
    constexpr std::string_view prefix = "deg:";
    if (text.rfind(prefix, 0) == 0) return parse_number(std::string_view(text).substr(prefix.size()), "angle") * pi / 180;
    return parse_number(text, "angle");
}

GridSpec parse_grid(const std::string &text) {
    GridSpec g;
    const auto comma = text.find(',');
    g.alpha = parse_axis(std::string_view(text).substr(0, comma));
    g.beta = comma == std::string::npos ? g.alpha : parse_axis(std::string_view(text).substr(comma + 1));
    return g;
}

std::vector<double> parse_h_list(const std::string &text) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = std::min(text.find(',', start), text.size());
        out.push_back(parse_number(std::string_view(text).substr(start, end - start), "h list"));
        start = end + 1;
    }
    return out;
}

material::MaterialParams RunConfig::material() const {
    return material::MaterialParams::from_gamma(mu, gamma, alpha0, h0);
}

material::Texture RunConfig::make_texture() const {
    if (texture == "twist") return material::Twist{};
    if (texture == "splaybend") return material::SplayBend{};
    if (texture == "director") return material::ConstantDirector{director.normalized()};
    if (texture == "bilayer") return material::Bilayer{m1, m2};
    config_error("unknown texture '" + texture + "' (expected twist|splaybend|director|bilayer)");
}

plate::PlateDomain RunConfig::domain() const { return {length, width, theta}; }

void RunConfig::validate() const {
    if (!(mu > 0)) config_error("mu must be positive");
    if (!(gamma > 0 && gamma < 1)) config_error("gamma must lie in (0, 1)");
    if (!(alpha0 >= 0)) config_error("alpha0 must be non-negative");
    if (!(h0 > 0)) config_error("h0 must be positive");
    if (!(width > 0)) config_error("width must be positive");
    if (!(length > width)) config_error("length must exceed width");
    if (!(theta >= 0 && theta < pi)) config_error("theta must lie in [0, pi)");
    make_texture();
    if (texture == "director" && !(director.norm() > 0)) config_error("director must be non-zero");
    if (quad < 2 || plate_quad < 2 || thickness_quad < 2) config_error("quadrature orders must be at least 2");
    if (!(rel_tol > 0)) config_error("rel_tol must be positive");
    if (scan_samples < 8) config_error("scan_samples must be at least 8");
    if (samples < 3) config_error("samples must be at least 3");
    if (n_across < 2) config_error("n_across must be at least 2");
    if (h_list.empty()) config_error("h list must not be empty");
    for (std::size_t i = 0; i < h_list.size(); ++i) {
        if (!(h_list[i] > 0)) config_error("h values must be positive");
        if (i && !(h_list[i] < h_list[i - 1])) config_error("h values must be strictly decreasing");
    }
    if (from_min_set && !(*from_min_set >= 0 && *from_min_set <= 1)) config_error("from_min_set must lie in [0, 1]");
    if (!std::isfinite(flexure) || !std::isfinite(torsion)) config_error("rates must be finite");
    for (int c : criteria)
        if (c < 1 || c > 10) config_error("criteria are numbered 1 to 10");
}

std::vector<double> pack_symmetric(const Mat3 &m) {
    return {m(0, 0), m(1, 1), m(2, 2), m(1, 2), m(0, 2), m(0, 1)};
}

Mat3 unpack_symmetric(const std::vector<double> &v) {
    if (v.size() != 6) config_error("symmetric matrices are packed as 6 numbers (11, 22, 33, 23, 13, 12)");
    Mat3 m;
    m << v[0], v[5], v[4],
         v[5], v[1], v[3],
         v[4], v[3], v[2];
    return m;
}

RunConfig config_from_json(const json &doc) {
    RunConfig c;
    check_keys(doc, {"schema", "material", "texture", "domain", "numerics", "shape", "verify", "output"}, "config");
    if (doc.contains("schema") && doc["schema"] != "ribbonlab.config/1")
        config_error("unsupported config schema " + doc["schema"].dump());

    if (doc.contains("material")) {
        const auto &m = doc["material"];
        check_keys(m, {"mu", "gamma", "wvol2", "alpha0", "h0"}, "material");
        if (m.contains("gamma") && m.contains("wvol2")) config_error("give either gamma or wvol2, not both");
        if (m.contains("mu")) c.mu = number(m["mu"], "mu");
        if (m.contains("gamma")) c.gamma = number(m["gamma"], "gamma");
        if (m.contains("wvol2")) {
            const double w = number(m["wvol2"], "wvol2");
            c.gamma = w / (2 * c.mu + w);
        }
        if (m.contains("alpha0")) c.alpha0 = number(m["alpha0"], "alpha0");
        if (m.contains("h0")) c.h0 = number(m["h0"], "h0");
    }
    if (doc.contains("texture")) {
        const auto &t = doc["texture"];
        check_keys(t, {"kind", "director", "m1", "m2"}, "texture");
        if (t.contains("kind")) {
            if (!t["kind"].is_string()) config_error("'kind' must be a string");
            c.texture = t["kind"].get<std::string>();
        }
        if (t.contains("director")) {
            const auto v = numbers(t["director"], "director", 3);
            c.director = Vec3(v[0], v[1], v[2]);
        }
        if (t.contains("m1")) c.m1 = unpack_symmetric(numbers(t["m1"], "m1", 6));
        if (t.contains("m2")) c.m2 = unpack_symmetric(numbers(t["m2"], "m2", 6));
    }
    if (doc.contains("domain")) {
        const auto &d = doc["domain"];
        check_keys(d, {"length", "width", "theta"}, "domain");
        if (d.contains("length")) c.length = number(d["length"], "length");
        if (d.contains("width")) c.width = number(d["width"], "width");
        if (d.contains("theta")) c.theta = angle(d["theta"], "theta");
    }
    if (doc.contains("numerics")) {
        const auto &n = doc["numerics"];
        check_keys(n, {"quad", "plate_quad", "thickness_quad", "rel_tol", "scan_samples", "grid", "h", "samples",
                       "n_across", "slope_threshold"},
                   "numerics");
        if (n.contains("quad")) c.quad = integer(n["quad"], "quad");
        if (n.contains("plate_quad")) c.plate_quad = integer(n["plate_quad"], "plate_quad");
        if (n.contains("thickness_quad")) c.thickness_quad = integer(n["thickness_quad"], "thickness_quad");
        if (n.contains("rel_tol")) c.rel_tol = number(n["rel_tol"], "rel_tol");
        if (n.contains("scan_samples")) c.scan_samples = integer(n["scan_samples"], "scan_samples");
        if (n.contains("grid")) {
            if (!n["grid"].is_string()) config_error("'grid' must be a string MIN:MAX:N[,MIN:MAX:N]");
            c.grid = parse_grid(n["grid"].get<std::string>());
        }
        if (n.contains("h")) c.h_list = numbers(n["h"], "h", 0);
        if (n.contains("samples")) c.samples = integer(n["samples"], "samples");
        if (n.contains("n_across")) c.n_across = integer(n["n_across"], "n_across");
        if (n.contains("slope_threshold")) c.slope_threshold = number(n["slope_threshold"], "slope_threshold");
    }
    if (doc.contains("shape")) {
        const auto &s = doc["shape"];
        check_keys(s, {"flexure", "torsion", "from_min_set"}, "shape");
        if (s.contains("flexure")) c.flexure = number(s["flexure"], "flexure");
        if (s.contains("torsion")) c.torsion = number(s["torsion"], "torsion");
        if (s.contains("from_min_set") && !s["from_min_set"].is_null())
            c.from_min_set = number(s["from_min_set"], "from_min_set");
    }
    if (doc.contains("verify")) {
        const auto &v = doc["verify"];
        check_keys(v, {"seed", "d_branch_ratio", "criteria"}, "verify");
        if (v.contains("seed")) {
            if (!v["seed"].is_number_unsigned()) config_error("'seed' must be a non-negative integer");
            c.seed = v["seed"].get<std::uint32_t>();
        }
        if (v.contains("d_branch_ratio") && !v["d_branch_ratio"].is_null())
            c.d_branch_ratio = number(v["d_branch_ratio"], "d_branch_ratio");
        if (v.contains("criteria")) {
            if (!v["criteria"].is_array()) config_error("'criteria' must be an array of integers");
            for (const auto &x : v["criteria"]) c.criteria.push_back(integer(x, "criteria"));
        }
    }
    if (doc.contains("output")) {
        const auto &o = doc["output"];
        check_keys(o, {"out"}, "output");
        if (o.contains("out")) {
            if (!o["out"].is_string()) config_error("'out' must be a string");
            c.out = o["out"].get<std::string>();
        }
    }
    c.validate();
    return c;
}

json config_to_json(const RunConfig &c) {
    json doc;
    doc["schema"] = "ribbonlab.config/1";
    doc["material"] = {{"mu", c.mu}, {"gamma", c.gamma}, {"alpha0", c.alpha0}, {"h0", c.h0}};
    json tex = {{"kind", c.texture}};
    if (c.texture == "director") tex["director"] = {c.director(0), c.director(1), c.director(2)};
    if (c.texture == "bilayer") {
        tex["m1"] = pack_symmetric(c.m1);
        tex["m2"] = pack_symmetric(c.m2);
    }
    doc["texture"] = tex;
    doc["domain"] = {{"length", c.length}, {"width", c.width}, {"theta", c.theta}};
    doc["numerics"] = {{"quad", c.quad},
                       {"plate_quad", c.plate_quad},
                       {"thickness_quad", c.thickness_quad},
                       {"rel_tol", c.rel_tol},
                       {"scan_samples", c.scan_samples},
                       {"grid", c.grid.to_string()},
                       {"h", c.h_list},
                       {"samples", c.samples},
                       {"n_across", c.n_across},
                       {"slope_threshold", c.slope_threshold}};
    json shape = {{"flexure", c.flexure}, {"torsion", c.torsion}};
    shape["from_min_set"] = c.from_min_set ? json(*c.from_min_set) : json(nullptr);
    doc["shape"] = shape;
    json verify = {{"seed", c.seed}, {"criteria", c.criteria}};
    verify["d_branch_ratio"] = c.d_branch_ratio ? json(*c.d_branch_ratio) : json(nullptr);
    doc["verify"] = verify;
    doc["output"] = {{"out", c.out}};
    return doc;
}

RunConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open config file " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error &e) {
        config_error("config " + path + " is not valid JSON: " + e.what());
    }
    return config_from_json(doc);
}

} // namespace ribbonlab::tools
