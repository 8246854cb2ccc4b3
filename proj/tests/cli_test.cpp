#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "torelli/cli.hpp"

using namespace torelli;

namespace {

const std::string kData = TORELLI_DATA_DIR;

std::filesystem::path fresh_dir(const std::string& name) {
  auto d = std::filesystem::temp_directory_path() / ("torelli_test_" + name);
  std::filesystem::remove_all(d);
  std::filesystem::create_directories(d);
  return d;
}

Json without_timing(Json j) {
  j.erase("timing");
  return j;
}

RunRequest request(const std::string& cmd, const std::string& polytope) {
  RunRequest r;
  r.command = cmd;
  r.polytope_path = polytope.empty() ? "" : kData + "/" + polytope;
  r.seed = 7;
  return r;
}

}  // namespace

TEST(Json, PolytopeRoundTrip) {
  const auto p = polytopes::cross_polytope(3);
  EXPECT_EQ(polytope_from_json(polytope_to_json(p)), p);
}

TEST(Json, PolytopeParseErrors) {
  EXPECT_THROW(polytope_from_json(Json::parse(R"({"dim": 2})")), ParseError);
  EXPECT_THROW(polytope_from_json(Json::parse(R"({"dim": 2, "vertices": [[0,0],[1]]})")), ParseError);
  EXPECT_THROW(polytope_from_json(Json::parse(R"({"dim": 2, "vertices": [[0,0],[1,1],[2,2]]})")), ParseError);
  EXPECT_THROW(polytope_from_json(Json::parse(R"({"dim": 2, "vertices": [[0,0.5],[1,1],[2,0]]})")), ParseError);
}

TEST(Json, PolynomialSpecs) {
  const auto r = polynomial_spec_from_json(Json::parse(R"({"mode":"random","seed":4,"bound":10})"), 2);
  ASSERT_TRUE(std::holds_alternative<RandomCoefficients>(r));
  EXPECT_EQ(std::get<RandomCoefficients>(r).seed, 4u);
  const auto e = polynomial_spec_from_json(
      Json::parse(R"({"mode":"explicit","terms":[{"exp":[1,0],"coeff":"-3/6"},{"exp":[0,1],"coeff":2}]})"), 2);
  const auto& t = std::get<ExplicitTerms>(e).terms;
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[0].second, Rational(-1, 2));
  EXPECT_THROW(polynomial_spec_from_json(Json::parse(R"({"mode":"other"})"), 2), ParseError);
  EXPECT_THROW(parse_rational("1/0"), ParseError);
  EXPECT_THROW(parse_rational("x"), ParseError);
}

TEST(Cli, HodgeReport) {
  const auto out = run(request("hodge", "corpus/octahedron.json"));
  EXPECT_EQ(out.exit_code, kExitOk);
  EXPECT_EQ(out.report["result"]["hodge"], Json::parse("[1,3,1]"));
  EXPECT_EQ(out.report["result"]["duality"], "pass");
  EXPECT_EQ(out.report["result"]["certificate"], "certified_generic");
  EXPECT_EQ(out.report["schema_version"], kSchemaVersion);
  EXPECT_EQ(out.report["input_hash"].get<std::string>().size(), 64u);
}

TEST(Cli, KernelReport) {
  auto r = request("kernel", "inputs/quartic_curve.json");
  r.k = 1;
  const auto out = run(r);
  EXPECT_EQ(out.exit_code, kExitOk);
  const auto& res = out.report["result"];
  EXPECT_EQ(res["dim_theorem"], 6);
  EXPECT_EQ(res["dim_bruteforce"], 6);
  EXPECT_EQ(res["spans_equal"], true);
  for (const auto& e : res["elements"])
    if (e["class"] != "Zero") EXPECT_EQ(e["class"], "Root");
}

TEST(Cli, HypothesisViolationIsPartial) {
  const auto out = run(request("classify", "corpus/octahedron.json"));
  EXPECT_EQ(out.exit_code, kExitHypothesis);
  EXPECT_EQ(out.report["result"]["verdict"], "INAPPLICABLE");
  EXPECT_FALSE(out.report["warnings"].empty());
}

TEST(Cli, SingularPolynomialFlagged) {
  auto r = request("nondegen", "corpus/octahedron.json");
  r.poly = kData + "/inputs/octahedron_singular_poly.json";
  r.trials = 5;
  EXPECT_EQ(run(r).report["result"]["status"], "degenerate_suspect");
}

TEST(Cli, StableWithoutInteriorPoints) {
  const auto out = run(request("stable", "inputs/standard_simplex.json"));
  EXPECT_EQ(out.report["result"]["stable"], false);
  EXPECT_FALSE(out.report["warnings"].empty());
}

TEST(Cli, StableRecordsNormalizationShift) {
  const auto dir = fresh_dir("shift");
  std::ofstream(dir / "s.json") << R"({"dim":2,"vertices":[[0,0],[3,0],[0,3]]})";
  auto r = request("stable", "");
  r.polytope_path = (dir / "s.json").string();
  const auto out = run(r);
  EXPECT_EQ(out.report["result"]["normalization_shift"], Json::parse("[-1,-1]"));
  EXPECT_EQ(out.report["result"]["normalized"]["origin_interior"], true);
}

TEST(Cli, WhiteSweep) {
  RunRequest r;
  r.command = "verify-white";
  r.q_max = 12;
  const auto out = run(r);
  EXPECT_EQ(out.exit_code, kExitOk);
  EXPECT_TRUE(out.report["result"]["violations"].empty());
}

TEST(Cli, PropositionViolationExitCode) {
  auto r = request("verify-prop", "corpus/octahedron.json");
  r.k = 2;
  EXPECT_EQ(run(r).exit_code, kExitOk);
  r.k = 3;
  const auto out = run(r);
  EXPECT_EQ(out.exit_code, kExitOracle);
  EXPECT_EQ(out.report["result"]["span_equal"], false);
}

TEST(Cli, ParseErrors) {
  EXPECT_THROW(run(request("hodge", "inputs/missing.json")), ParseError);
  auto r = request("hodge", "corpus/octahedron.json");
  r.poly = "{not json";
  EXPECT_THROW(run(r), ParseError);
  r.poly = R"({"mode":"explicit","terms":[{"exp":[1,0,0],"coeff":"1"}]})";
  EXPECT_THROW(run(r), ParseError);
  EXPECT_THROW(run(request("frobnicate", "")), ParseError);
}

TEST(Cli, DeterministicApartFromTiming) {
  const auto a = run(request("hodge", "corpus/octahedron.json"));
  const auto b = run(request("hodge", "corpus/octahedron.json"));
  EXPECT_EQ(without_timing(a.report).dump(), without_timing(b.report).dump());
  auto other = request("hodge", "corpus/octahedron.json");
  other.seed = 8;
  EXPECT_NE(run(other).report["input_hash"], a.report["input_hash"]);
}

TEST(Cli, ExplicitAndRandomSpecsHashAlike) {
  const auto p = polytope_from_json(read_json_file(kData + "/corpus/octahedron.json"));
  const auto f = realize(RandomCoefficients{7, 997, std::nullopt}, p);
  auto r = request("hodge", "corpus/octahedron.json");
  r.poly = polynomial_to_json(f).dump();
  EXPECT_EQ(run(r).report["input_hash"], run(request("hodge", "corpus/octahedron.json")).report["input_hash"]);
}

TEST(Cli, CacheHitAndCorruption) {
  const auto dir = fresh_dir("cache");
  const auto req = request("hodge", "corpus/octahedron.json");
  const auto first = run(req, dir.string());
  EXPECT_FALSE(first.cache_hit);
  const auto hash = first.report["input_hash"].get<std::string>();
  const auto file = dir / (hash + ".json");
  ASSERT_TRUE(std::filesystem::exists(file));
  const auto second = run(req, dir.string());
  EXPECT_TRUE(second.cache_hit);
  EXPECT_EQ(without_timing(first.report)["result"], without_timing(second.report)["result"]);

  std::ofstream(file) << "{ truncated";
  const auto third = run(req, dir.string());
  EXPECT_FALSE(third.cache_hit);
  EXPECT_EQ(third.report["timing"]["cache"], "corrupt_recomputed");
  EXPECT_EQ(third.report["result"], first.report["result"]);
  EXPECT_TRUE(run(req, dir.string()).cache_hit);
  for (const auto& e : std::filesystem::directory_iterator(dir)) EXPECT_EQ(e.path().extension(), ".json");
}
