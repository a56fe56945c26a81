#include "ryssub/ryssub.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <sys/wait.h>

using namespace ryssub;

namespace {

const std::string kCli = RYSSUB_CLI;
const std::string kManifests = std::string(RYSSUB_DATA_DIR) + "/manifests/";

struct Result {
  int status = -1;
  std::string out;
};

/// Runs the CLI with `args`; stderr is discarded.
Result run(const std::string &args) {
  Result r;
  FILE *p = popen((kCli + " " + args + " 2>/dev/null").c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), got);
  const int w = pclose(p);
  r.status = WIFEXITED(w) ? WEXITSTATUS(w) : -1;
  return r;
}

}  // namespace

TEST(Cli, SolitonText) {
  const auto r = run("soliton " + kManifests + "heisenberg3.json --alpha 1 --beta 0");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "lambda = 1/2, mu = -1, shrinking, exact\n");
}

TEST(Cli, SolitonJsonRereads) {
  const auto r = run("soliton " + kManifests + "heisenberg3.json --alpha 1 --beta 0 --json");
  ASSERT_EQ(r.status, 0);
  const Json j = Json::parse(r.out);
  EXPECT_EQ(parse_scalar(j["lambda"].get<std::string>()), Scalar::fraction(1, 2));
  EXPECT_EQ(parse_scalar(j["mu"].get<std::string>()), Scalar(-1));
  EXPECT_TRUE(j["exact"].get<bool>());
}

TEST(Cli, CurvatureJsonAbelianIsZero) {
  const auto r = run("curvature " + kManifests + "abelian3.json --json");
  ASSERT_EQ(r.status, 0);
  const Json j = Json::parse(r.out);
  EXPECT_TRUE(j["connection"].empty());
  EXPECT_TRUE(j["riemann"].empty());
  EXPECT_TRUE(j["ricci"].empty());
  EXPECT_EQ(j["scalar"], "0");
}

TEST(Cli, CurvatureJsonMatchesEngine) {
  const auto r = run("curvature " + kManifests + "example51.json --json");
  ASSERT_EQ(r.status, 0);
  const Json j = Json::parse(r.out);
  const auto p = curvature(build_frame(load_manifest(kManifests + "example51.json")));
  const auto idx = iota_indices(6);
  EXPECT_EQ(report::read_tensor<4>(j["riemann"], idx), p.riemann);
  EXPECT_EQ(report::read_tensor<3>(j["connection"], idx), p.gamma);
  EXPECT_EQ(report::read_scalar(j["scalar"]), Scalar(-30));
}

TEST(Cli, AffineClaimedTensors) {
  const auto r = run("affine " + kManifests + "example52.json --domain fiber --claimed-tensors --json");
  ASSERT_EQ(r.status, 0);
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["lambda"]["c_alpha"], "-2");
  EXPECT_EQ(j["lambda"]["c_beta"], "5/2");
  EXPECT_EQ(j["mu"]["c_alpha"], "1");
}

TEST(Cli, VerifyExitsZeroWithMismatches) {
  const auto r = run("verify " + kManifests + "example51.json");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("MISMATCH example51/total/scalar"), std::string::npos);
}

TEST(Cli, LedgerCommandMatchesLibrary) {
  const auto r = run("paper");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.out, dump_report(bundled_ledger(std::string(RYSSUB_DATA_DIR) + "/manifests")));
}

TEST(Cli, OtherCommandsRun) {
  EXPECT_EQ(run("submersion " + kManifests + "example51.json --json").status, 0);
  EXPECT_EQ(run("harmonic " + kManifests + "heisenberg3.json --alpha 1 --beta 0 --domain fiber").status, 0);
  EXPECT_EQ(run("theorems " + kManifests + "example51.json --alpha 1 --beta 0").status, 0);
  EXPECT_EQ(run("canonicalize " + kManifests + "example52.json").status, 0);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("").status, 2);
  EXPECT_EQ(run("frobnicate").status, 2);
  EXPECT_EQ(run("soliton " + kManifests + "heisenberg3.json --alpha 1").status, 2);
  EXPECT_EQ(run("curvature " + kManifests + "abelian3.json --bogus").status, 2);
  EXPECT_EQ(run("soliton " + kManifests + "heisenberg3.json --alpha 1 --beta 0 --domain sideways").status, 2);
  EXPECT_EQ(run("curvature /nonexistent.json").status, 1);
  EXPECT_EQ(run("soliton " + kManifests + "heisenberg3.json --alpha 1/0 --beta 0").status, 1);
  EXPECT_EQ(run("submersion " + kManifests + "abelian3.json").status, 1);
}
