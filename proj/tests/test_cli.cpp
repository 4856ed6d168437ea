#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "commands.hpp"
#include "json.hpp"
#include "malab/errors.hpp"
#include "malab/keyvalue.hpp"

using namespace malab;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class CliTest : public testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("malab_cli_" + std::string(testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  json summary() const {
    std::ifstream in(dir_ / "summary.json");
    return json::parse(in);
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, RadialExpandFitsFirstOmittedTerm) {
  const auto doc = KeyValueDoc::parse("n = 3\nzeta = 1/2\nJ = 1\nr_min = 256\nr_max = 65536\n");
  EXPECT_EQ(cli::cmd_radial_expand(doc, dir_), cli::kExitPass);
  const auto s = summary();
  EXPECT_NEAR(s["fitted"]["gamma"].get<double>(), 1.0, 0.05);
  EXPECT_EQ(s["fitted"]["p"].get<int>(), 0);
  EXPECT_TRUE(fs::exists(dir_ / "radial_expand.csv"));
}

TEST_F(CliTest, RadialExpandConstantMode) {
  const auto doc = KeyValueDoc::parse("n = 2\nforce_constant = true\n");
  EXPECT_EQ(cli::cmd_radial_expand(doc, dir_), cli::kExitPass);
  EXPECT_TRUE(summary()["residual_check"]["pass"].get<bool>());
}

TEST_F(CliTest, RadialExpandLogSquared) {
  // Residual after J = 1 still carries ln-r terms of order r^-2 (ln r)^2.
  const auto doc = KeyValueDoc::parse("n = 2\nzeta = 2\nJ = 1\nr_min = 16\nr_max = 1024\n");
  EXPECT_EQ(cli::cmd_radial_expand(doc, dir_), cli::kExitPass);
  const auto s = summary();
  EXPECT_EQ(s["first_omitted"]["r_power"], "-2");
  EXPECT_EQ(s["fitted"]["p"].get<int>(), 2);
}

TEST_F(CliTest, PoissonCatalogSource) {
  const auto doc = KeyValueDoc::parse("source = radial_inv_r\nr_max = 65536\n");
  EXPECT_EQ(cli::cmd_poisson(doc, dir_), cli::kExitPass);
  const auto s = summary();
  EXPECT_EQ(s["decay"]["k_log"].get<int>(), 1);
  EXPECT_LE(s["laplacian"]["max_relative_error"].get<double>(), 1e-6);
  EXPECT_TRUE(fs::exists(dir_ / "modes.csv"));
}

TEST_F(CliTest, PoissonCoefficientFile) {
  fs::create_directories(dir_);
  {
    std::ofstream f(dir_ / "coeffs.csv");
    f << "k,m,r,b\n";
    f.precision(17);
    for (int i = 0; i <= 96; ++i) {
      const double r = std::exp2(i / 8.0);
      f << "0,1," << r << "," << std::pow(r, -1.5) << "\n";
    }
  }
  const auto doc = KeyValueDoc::parse("coefficients = " + (dir_ / "coeffs.csv").string() +
                                      "\nn = 3\nk1 = 1.5\nk2 = 0\nc0 = 1\nL = 0\nr_max = 4096\n");
  const int rc = cli::cmd_poisson(doc, dir_ / "out");
  EXPECT_NE(rc, cli::kExitError);
  EXPECT_TRUE(fs::exists(dir_ / "out" / "summary.json"));
}

TEST_F(CliTest, ExtractShear) {
  const auto doc = KeyValueDoc::parse("n = 2\nzeta = 3/2\nT = 1, 0.5, 0, 1\n");
  EXPECT_EQ(cli::cmd_extract(doc, dir_), cli::kExitPass);
  const auto s = summary();
  const auto A = s["A"].get<std::vector<double>>();
  EXPECT_NEAR(A[1], 0.5, 1e-2);
  EXPECT_NEAR(A[3], 1.25, 1e-2);
  EXPECT_TRUE(s["det_check"]["pass"].get<bool>());
  EXPECT_TRUE(s["rates"]["match"].get<bool>());
}

TEST_F(CliTest, ExtractReportsCauchyFailure) {
  const auto doc = KeyValueDoc::parse("n = 2\nzeta = 1/2\nK = 2\ncauchy_tol = 1e-6\n");
  EXPECT_EQ(cli::cmd_extract(doc, dir_), cli::kExitCertificate);
  EXPECT_NE(summary()["error"].get<std::string>().find("drift"), std::string::npos);
}

TEST_F(CliTest, BadConfigThrows) {
  EXPECT_THROW(cli::cmd_poisson(KeyValueDoc::parse("source = nope\n"), dir_), InvalidArgument);
  EXPECT_THROW(cli::cmd_radial_expand(KeyValueDoc::parse("n = 3\nzeta = 7\n"), dir_),
               InvalidArgument);
}

TEST_F(CliTest, ToleranceScaleFromEnvironment) {
  ::setenv("MALAB_TOL_SCALE", "2.5", 1);
  EXPECT_EQ(cli::tolerance_scale(), 2.5);
  ::setenv("MALAB_TOL_SCALE", "-1", 1);
  EXPECT_THROW(cli::tolerance_scale(), InvalidArgument);
  ::unsetenv("MALAB_TOL_SCALE");
  EXPECT_EQ(cli::tolerance_scale(), 1.0);
}
