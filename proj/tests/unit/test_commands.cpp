#include "ribbonlab/errors.hpp"
#include "ribbonlab/tools/commands.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ribbonlab;
using namespace ribbonlab::tools;
namespace fs = std::filesystem;

namespace {

class CommandTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir = fs::temp_directory_path() / ("ribbonlab_cmd_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }

    std::string path(const std::string &name) const { return (dir / name).string(); }

    static std::string slurp(const std::string &p) {
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    fs::path dir;
    std::ostringstream log;
};

} // namespace

TEST(ExitCodes, Mapping) {
    EXPECT_EQ(exit_code_for(ErrorKind::Io), 1);
    EXPECT_EQ(exit_code_for(ErrorKind::Config), 2);
    EXPECT_EQ(exit_code_for(ErrorKind::InvalidArgument), 2);
    EXPECT_EQ(exit_code_for(ErrorKind::UnsupportedTexture), 2);
    EXPECT_EQ(exit_code_for(ErrorKind::Quadrature), 3);
    EXPECT_EQ(exit_code_for(ErrorKind::DomainSingularity), 3);
}

TEST(Guarded, PrintsMessageOnce) {
    std::ostringstream err;
    const int rc = guarded([]() -> int { throw Error(ErrorKind::Config, "bad key"); }, err);
    EXPECT_EQ(rc, 2);
    EXPECT_EQ(err.str(), "ribbonlab: config: bad key\n");
}

TEST(Quantity, NanIsNull) {
    EXPECT_TRUE(quantity(std::nan(""), "1")["value"].is_null());
    EXPECT_EQ(quantity(2.5, "mu")["units"], "mu");
}

TEST_F(CommandTest, DeriveReport) {
    RunConfig c;
    c.out = path("derive.json");
    ASSERT_EQ(cmd_derive(c, log), 0);
    const auto doc = nlohmann::json::parse(slurp(c.out));
    EXPECT_EQ(doc["schema"], kReportSchema);
    EXPECT_EQ(doc["command"], "derive");
    EXPECT_NEAR(doc["closed_form"]["residual"]["value"].get<double>(), 0.02548703, 1e-8);
    EXPECT_LT(doc["oracle_gap"]["residual"]["value"].get<double>(), 1e-9);
    EXPECT_NEAR(doc["plate_minimum"]["energy_per_area"]["value"].get<double>(), 0.0506486799, 1e-9);
    EXPECT_EQ(doc["plate_minimum"]["minimizers"].size(), 2u);
}

TEST_F(CommandTest, RodCsvIsDeterministic) {
    RunConfig c;
    c.theta = pi / 4;
    c.grid = parse_grid("-3k:3k:41");
    c.out = path("a.csv");
    ASSERT_EQ(cmd_rod(c, log), 0);
    c.out = path("b.csv");
    ASSERT_EQ(cmd_rod(c, log), 0);
    const std::string a = slurp(path("a.csv"));
    EXPECT_EQ(a, slurp(path("b.csv")));
    EXPECT_EQ(a.rfind("# ribbonlab rod v1\ntheta,alpha,beta,region,value\n", 0), 0u);
    EXPECT_NE(a.find("# min_set "), std::string::npos);
    EXPECT_EQ(a.find(",D,"), std::string::npos);
}

TEST_F(CommandTest, RodRejectsOtherTextures) {
    RunConfig c;
    c.texture = "splaybend";
    c.out = path("rod.csv");
    std::ostringstream err;
    EXPECT_EQ(guarded([&] { return cmd_rod(c, log); }, err), 2);
}

TEST_F(CommandTest, ShapeFromMinimumSet) {
    RunConfig c;
    c.theta = pi / 4;
    c.from_min_set = 0.5;
    c.out = path("ribbon");
    ASSERT_EQ(cmd_shape(c, log), 0);
    EXPECT_TRUE(fs::exists(path("ribbon.obj")));
    EXPECT_TRUE(fs::exists(path("ribbon.csv")));
    EXPECT_EQ(slurp(path("ribbon.obj")).rfind("# ribbonlab mesh v1", 0), 0u);
    EXPECT_NE(log.str().find("gap"), std::string::npos);
}

TEST_F(CommandTest, GammaCheckWithoutActivationIsExact) {
    RunConfig c;
    c.alpha0 = 0;
    c.h_list = {0.1, 0.01};
    c.out = path("gamma.csv");
    ASSERT_EQ(cmd_gamma_check(c, log), 0);
    EXPECT_NE(slurp(c.out).find("exact=true"), std::string::npos);
}

TEST_F(CommandTest, VerifySubsetAndNegativeControl) {
    RunConfig c;
    c.criteria = {6};
    c.out = path("verify.json");
    EXPECT_EQ(cmd_verify(c, log), 0);
    EXPECT_TRUE(nlohmann::json::parse(slurp(c.out))["all_pass"].get<bool>());
    c.d_branch_ratio = 0.5;
    EXPECT_EQ(cmd_verify(c, log), 4);
    EXPECT_FALSE(nlohmann::json::parse(slurp(c.out))["all_pass"].get<bool>());
}

TEST_F(CommandTest, UnwritableOutputIsIo) {
    RunConfig c;
    c.out = "/proc/ribbonlab/derive.json";
    std::ostringstream err;
    EXPECT_EQ(guarded([&] { return cmd_derive(c, log); }, err), 1);
}
