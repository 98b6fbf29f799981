#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>
#include <string>

#include "steinkit/io.hpp"
#include "test_support.hpp"

using namespace steinkit;
using namespace testsupport;

TEST_CASE("matrix json round trip is lossless") {
  std::mt19937_64 rng(17001);
  ComplexMatrix m = random_matrix(rng, 3, 4);
  m(0, 0) = Complex(1.0 / 3.0, -2.0 / 7.0);
  m(1, 2) = Complex(1e-300, 1e300);
  ComplexMatrix back = matrix_from_json(matrix_to_json(m));
  CHECK(entrywise_close(back, m, 0.0));  // exact, not approximate

  ComplexMatrix empty(0, 0);
  CHECK(matrix_from_json(matrix_to_json(empty)).size() == 0);

  ComplexMatrix wide(0, 3);
  ComplexMatrix wide_back = matrix_from_json(matrix_to_json(wide));
  CHECK(wide_back.rows() == 0);
  CHECK(wide_back.cols() == 3);
}

TEST_CASE("real matrices omit the imaginary block and parse without one") {
  ComplexMatrix m = ComplexMatrix::Identity(2, 2);
  Json j = matrix_to_json(m);
  CHECK_FALSE(j.contains("im"));
  CHECK(entrywise_close(matrix_from_json(j), m, 0.0));
}

TEST_CASE("malformed matrix json is rejected") {
  CHECK_THROWS_AS(matrix_from_json(Json::parse(R"({"rows": 2, "cols": 2})")), JsonParseError);
  CHECK_THROWS_AS(matrix_from_json(Json::parse(R"({"rows": 2, "cols": 2, "re": [[1, 2], [3]]})")),
                  JsonParseError);
  CHECK_THROWS_AS(matrix_from_json(Json::parse(R"({"rows": 1, "cols": 1, "re": [["x"]]})")),
                  JsonParseError);
  CHECK_THROWS_AS(matrix_from_json(Json::parse(R"({"rows": 2, "cols": 1, "re": [[1]]})")),
                  JsonParseError);
  CHECK_THROWS_AS(
      matrix_from_json(Json::parse(R"({"rows": 1, "cols": 1, "re": [[1]], "im": [[1, 2]]})")),
      JsonParseError);
  CHECK_THROWS_AS(matrix_from_json(Json::parse("[1, 2, 3]")), JsonParseError);
}

TEST_CASE("stein set round trip") {
  std::mt19937_64 rng(17002);
  SteinSetSpec s(random_psd(rng, 3, 0.2), 1.5, true);
  SteinSetSpec back = stein_set_from_json(stein_set_to_json(s));
  CHECK(entrywise_close(back.h(), s.h(), 0.0));
  CHECK(back.alpha() == 1.5);
  CHECK(back.closed());

  CHECK_THROWS_AS(stein_set_from_json(Json::parse(R"({"alpha": 1.0, "closed": true})")),
                  JsonParseError);
}

TEST_CASE("isometry tuple round trip") {
  std::mt19937_64 rng(17003);
  IsometryTuple t = random_isometry_tuple(rng, 2, {1, 2, 3});
  IsometryTuple back = isometry_tuple_from_json(isometry_tuple_to_json(t));
  CHECK(back.target_order() == 2);
  REQUIRE(back.blocks().size() == 3);
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(entrywise_close(back.blocks()[j], t.blocks()[j], 0.0));
  }
}

TEST_CASE("realization round trip, block form and flat form") {
  std::mt19937_64 rng(17004);
  RealizationArray r = random_contractive_realization(rng, 2, 3, 0.8);
  Json j = realization_to_json(r);
  RealizationArray back = realization_from_json(j);
  CHECK(back.state_order() == 2);
  CHECK(entrywise_close(back.matrix(), r.matrix(), 0.0));

  Json flat;
  flat["n"] = 2;
  flat["m"] = 3;
  flat["R"] = matrix_to_json(r.matrix());
  CHECK(entrywise_close(realization_from_json(flat).matrix(), r.matrix(), 0.0));

  // constant functions: no state blocks at all
  RealizationArray constant(0, 2, ComplexMatrix(0, 0), ComplexMatrix(0, 2), ComplexMatrix(2, 0),
                            ComplexMatrix::Identity(2, 2));
  Json cj = realization_to_json(constant);
  CHECK_FALSE(cj.contains("A"));
  RealizationArray cback = realization_from_json(cj);
  CHECK(cback.state_order() == 0);
  CHECK(entrywise_close(cback.d(), constant.d(), 0.0));

  Json missing;
  missing["n"] = 1;
  missing["m"] = 1;
  missing["D"] = matrix_to_json(ComplexMatrix::Identity(1, 1));
  CHECK_THROWS_AS(realization_from_json(missing), JsonParseError);
}

TEST_CASE("matrix set round trip rejects complex members") {
  std::mt19937_64 rng(17005);
  MatrixSet m(2, {random_real_matrix(rng, 2, 2), random_real_matrix(rng, 2, 2)});
  MatrixSet back = matrix_set_from_json(matrix_set_to_json(m));
  CHECK(back.order() == 2);
  REQUIRE(back.members().size() == 2);
  CHECK((back.members()[0] - m.members()[0]).cwiseAbs().maxCoeff() == 0.0);

  Json bad;
  bad["n"] = 1;
  ComplexMatrix c(1, 1);
  c(0, 0) = Complex(0.0, 1.0);
  bad["members"] = Json::array({matrix_to_json(c)});
  CHECK_THROWS_AS(matrix_set_from_json(bad), JsonParseError);
}

TEST_CASE("report serializations carry the advertised keys") {
  SteinSetSpec set(ComplexMatrix::Identity(2, 2), 1.0, true);
  Json gap = stein_gap_report_to_json(stein_gap(set, ComplexMatrix::Zero(2, 2)));
  CHECK(gap["member"] == "yes");
  CHECK(gap.contains("lambda_min"));
  CHECK(gap.contains("gap"));

  RealizationArray rot = rotation_realization(0.8);
  Json cert = kyp_certificate_to_json(kyp_check_balanced(rot));
  CHECK(cert["verdict"] == "yes");
  CHECK(cert.contains("P"));
  CHECK(cert.contains("residual"));
  CHECK(cert.contains("lambda_min"));

  DbOptions opts;
  opts.boundary_samples = 16;
  opts.radii = {1.1};
  Json v = db_verdict_to_json(db_check(rot, opts));
  CHECK(v.contains("verdict"));
  CHECK(v.contains("sampled_sup"));
  CHECK(v["worst_z"].contains("re"));
  CHECK(v["certificate"].is_null());  // search is inconclusive for this member
}

TEST_CASE("trajectory serialization and csv golden") {
  RealMatrix half = RealMatrix::Identity(2, 2) * 0.5;
  MatrixSet m(2, {half});
  RealVector x0(2);
  x0 << 1.0, 0.0;
  Trajectory t = simulate(m, x0, 2, Schedule::fixed({0, 0}));

  Json j = trajectory_to_json(t);
  CHECK(j["norms"].size() == 3);
  CHECK(j["schedule"].size() == 2);
  CHECK(j["states"].size() == 3);

  const std::string csv = trajectory_to_csv(t);
  CHECK(csv == "j,norm,member\n0,1,0\n1,0.5,0\n2,0.25,-1\n");
}

TEST_CASE("json files load or raise parse errors") {
  const std::string dir = "/tmp/steinkit_io_test";
  std::remove((dir + "/ok.json").c_str());
  std::string ok_path = dir + "_ok.json";
  std::string bad_path = dir + "_bad.json";
  {
    std::ofstream out(ok_path);
    out << R"({"rows": 1, "cols": 1, "re": [[2.5]]})";
  }
  {
    std::ofstream out(bad_path);
    out << "{not json";
  }
  ComplexMatrix m = matrix_from_json(load_json_file(ok_path));
  CHECK(m(0, 0) == Complex(2.5, 0.0));
  CHECK_THROWS_AS(load_json_file(bad_path), JsonParseError);
  CHECK_THROWS_AS(load_json_file(dir + "_missing.json"), JsonParseError);
  std::remove(ok_path.c_str());
  std::remove(bad_path.c_str());
}

TEST_CASE("serialized json is deterministic") {
  std::mt19937_64 rng(17006);
  ComplexMatrix m = random_matrix(rng, 4, 4);
  CHECK(matrix_to_json(m).dump() == matrix_to_json(m).dump());
  RealizationArray r = random_contractive_realization(rng, 3, 2, 0.7);
  CHECK(realization_to_json(r).dump(2) == realization_to_json(r).dump(2));
}
