#include "ribbonlab/errors.hpp"
#include "ribbonlab/tools/config.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace ribbonlab;
using namespace ribbonlab::tools;
using nlohmann::json;

namespace {

ErrorKind kind_of(const std::function<void()> &f) {
    try {
        f();
    } catch (const Error &e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorKind::InternalConsistency;
}

} // namespace

TEST(ParseAngle, RadiansAndDegrees) {
    EXPECT_DOUBLE_EQ(parse_angle("0.5"), 0.5);
    EXPECT_NEAR(parse_angle("deg:45"), pi / 4, 1e-15);
    EXPECT_EQ(kind_of([] { parse_angle("45deg"); }), ErrorKind::Config);
    EXPECT_EQ(kind_of([] { parse_angle(""); }), ErrorKind::Config);
}

TEST(ParseGrid, KSuffixAndPlain) {
    const GridSpec g = parse_grid("-3k:3k:601");
    EXPECT_TRUE(g.alpha.in_k);
    EXPECT_EQ(g.alpha.count, 601);
    const rod::GridAxis a = g.beta.resolve(-0.5);
    EXPECT_DOUBLE_EQ(a.lo, -1.5);
    EXPECT_DOUBLE_EQ(a.hi, 1.5);
    const GridSpec h = parse_grid("-1:1:11,0:2:5");
    EXPECT_FALSE(h.alpha.in_k);
    EXPECT_EQ(h.beta.count, 5);
    EXPECT_DOUBLE_EQ(h.beta.resolve(7).hi, 2.0);
    EXPECT_EQ(parse_grid(h.to_string()).to_string(), h.to_string());
}

TEST(ParseGrid, Rejections) {
    for (const char *bad : {"-3k:3:601", "1:0:5", "0:1:2.5", "0:1", "a:b:3", "0:1:0"})
        EXPECT_EQ(kind_of([&] { parse_grid(bad); }), ErrorKind::Config) << bad;
}

TEST(ParseHList, Values) {
    const auto h = parse_h_list("0.1,0.01, 0.001");
    ASSERT_EQ(h.size(), 3u);
    EXPECT_DOUBLE_EQ(h[2], 0.001);
    EXPECT_EQ(kind_of([] { parse_h_list("0.1,,0.01"); }), ErrorKind::Config);
}

TEST(ConfigJson, RoundTrip) {
    RunConfig c;
    c.mu = 2.0;
    c.gamma = 0.25;
    c.texture = "bilayer";
    c.m1 << 0.1, 0.2, 0.3, 0.2, 0.4, 0.5, 0.3, 0.5, 0.6;
    c.m2 = -c.m1;
    c.theta = 0.7;
    c.grid = parse_grid("-2k:2k:101");
    c.h_list = {0.1, 0.01};
    c.from_min_set = 0.5;
    c.criteria = {1, 6};
    c.out = "x/y.json";
    const json doc = config_to_json(c);
    const RunConfig back = config_from_json(doc);
    EXPECT_EQ(config_to_json(back), doc);
    EXPECT_EQ(back.m1, c.m1);
    EXPECT_EQ(*back.from_min_set, 0.5);
    EXPECT_EQ(config_to_json(config_from_json(config_to_json(RunConfig{}))), config_to_json(RunConfig{}));
}

TEST(ConfigJson, UnknownKeysRejected) {
    EXPECT_EQ(kind_of([] { config_from_json(json{{"materal", json::object()}}); }), ErrorKind::Config);
    EXPECT_EQ(kind_of([] { config_from_json(json{{"material", {{"nu", 0.3}}}}); }), ErrorKind::Config);
    EXPECT_EQ(kind_of([] { config_from_json(json{{"schema", "other/1"}}); }), ErrorKind::Config);
}

TEST(ConfigJson, ValueChecks) {
    EXPECT_EQ(kind_of([] { config_from_json(json{{"material", {{"gamma", 1.5}}}}); }), ErrorKind::Config);
    EXPECT_EQ(kind_of([] { config_from_json(json{{"material", {{"gamma", 0.3}, {"wvol2", 1.0}}}}); }),
              ErrorKind::Config);
    EXPECT_EQ(kind_of([] { config_from_json(json{{"numerics", {{"quad", 2.5}}}}); }), ErrorKind::Config);
    EXPECT_EQ(kind_of([] { config_from_json(json{{"texture", {{"kind", "smectic"}}}}); }), ErrorKind::Config);
    const RunConfig c = config_from_json(json{{"material", {{"wvol2", 6.0 / 7}}}, {"domain", {{"theta", "deg:90"}}}});
    EXPECT_NEAR(c.gamma, 0.3, 1e-15);
    EXPECT_NEAR(c.theta, pi / 2, 1e-15);
}

TEST(ConfigJson, MissingFileIsIo) {
    EXPECT_EQ(kind_of([] { load_config("/nonexistent/ribbonlab.json"); }), ErrorKind::Io);
}

TEST(Voigt, PackUnpack) {
    Mat3 m;
    m << 1, 6, 5, 6, 2, 4, 5, 4, 3;
    const auto v = pack_symmetric(m);
    EXPECT_EQ(v, (std::vector<double>{1, 2, 3, 4, 5, 6}));
    EXPECT_EQ(unpack_symmetric(v), m);
}

TEST(RunConfig, Textures) {
    RunConfig c;
    for (const char *name : {"twist", "splaybend", "director", "bilayer"}) {
        c.texture = name;
        EXPECT_NO_THROW(c.validate()) << name;
        EXPECT_NO_THROW(c.make_texture()) << name;
    }
}
