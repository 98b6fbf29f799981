#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "steinkit/io.hpp"
#include "test_support.hpp"

using namespace steinkit;
using namespace testsupport;

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(STEINKIT_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

// Fixture directory, private to this process.
const std::string& fixture_dir() {
  static const std::string dir = [] {
    std::string d = (std::filesystem::temp_directory_path() /
                     ("steinkit_cli_fixtures_" + std::to_string(getpid())))
                        .string();
    std::filesystem::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write_fixture(const std::string& name, const Json& j) {
  const std::string path = fixture_dir() + "/" + name;
  std::ofstream out(path);
  out << j.dump(2) << "\n";
  return path;
}

std::string write_raw(const std::string& name, const std::string& text) {
  const std::string path = fixture_dir() + "/" + name;
  std::ofstream out(path);
  out << text;
  return path;
}

Json identity_set(double alpha, bool closed) {
  Json j;
  j["H"] = matrix_to_json(ComplexMatrix::Identity(2, 2));
  j["alpha"] = alpha;
  j["closed"] = closed;
  return j;
}

}  // namespace

TEST_CASE("membership checks map verdicts to exit codes") {
  const std::string set = write_fixture("set.json", identity_set(1.0, true));
  const std::string open_set = write_fixture("open_set.json", identity_set(1.0, false));
  const std::string inside =
      write_fixture("inside.json", matrix_to_json(ComplexMatrix(0.5 * ComplexMatrix::Identity(2, 2))));
  ComplexMatrix big = ComplexMatrix::Zero(2, 2);
  big(0, 1) = 2.0;
  const std::string outside = write_fixture("outside.json", matrix_to_json(big));
  ComplexMatrix edge = ComplexMatrix::Zero(2, 2);
  edge(0, 0) = 1.0;
  const std::string boundary = write_fixture("boundary.json", matrix_to_json(edge));

  RunResult in = run_cli("stein-check --set " + set + " --matrix " + inside);
  CHECK(in.exit_code == 0);
  Json report = Json::parse(in.out);
  CHECK(report["stein_gap"]["member"] == "yes");
  CHECK(report["norm_membership"] == "yes");
  CHECK(report["weighted_norm"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));

  CHECK(run_cli("stein-check --set " + set + " --matrix " + outside).exit_code == 1);
  CHECK(run_cli("stein-check --set " + open_set + " --matrix " + boundary).exit_code == 2);
  CHECK(run_cli("stein-check --set " + set + " --matrix " + boundary).exit_code == 0);
}

TEST_CASE("witness construction") {
  const std::string b =
      write_fixture("b.json", matrix_to_json(ComplexMatrix(2.0 * ComplexMatrix::Identity(2, 2))));
  RunResult r = run_cli("stein-witness --matrix " + b);
  CHECK(r.exit_code == 0);
  Json j = Json::parse(r.out);
  CHECK(j["epsilon"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(j["product_norm"].get<double>() == doctest::Approx(4.0 / 3.0).epsilon(1e-12));

  const std::string small =
      write_fixture("small.json", matrix_to_json(ComplexMatrix::Identity(2, 2)));
  CHECK(run_cli("stein-witness --matrix " + small).exit_code == 1);
}

TEST_CASE("isometry tuple validation and combination") {
  std::mt19937_64 rng(18001);
  IsometryTuple t = random_isometry_tuple(rng, 2, {2, 3});
  const std::string tuple = write_fixture("tuple.json", isometry_tuple_to_json(t));
  RunResult r = run_cli("mconvex --tuple " + tuple);
  CHECK(r.exit_code == 0);
  CHECK(Json::parse(r.out)["validation"]["verdict"] == "yes");

  Json blocks = Json::array({matrix_to_json(random_matrix(rng, 2, 2)),
                             matrix_to_json(random_matrix(rng, 3, 3))});
  const std::string blocks_path = write_fixture("blocks.json", blocks);
  RunResult rc = run_cli("mconvex --tuple " + tuple + " --blocks " + blocks_path);
  CHECK(rc.exit_code == 0);
  Json cj = Json::parse(rc.out);
  CHECK(cj.contains("combined"));
  CHECK(matrix_from_json(cj["combined"]).rows() == 2);
}

TEST_CASE("certificate subcommands on a boundary-tight member") {
  const std::string rot =
      write_fixture("rot.json", realization_to_json(rotation_realization(1.0)));

  RunResult direct = run_cli("kyp-check --realization " + rot);
  CHECK(direct.exit_code == 0);
  CHECK(Json::parse(direct.out)["verdict"] == "yes");

  // the fixed-point search cannot settle on the boundary: not found
  RunResult searched = run_cli("certify-riccati --realization " + rot);
  CHECK(searched.exit_code == 2);
  CHECK(Json::parse(searched.out)["verdict"] == "not-found");
}

TEST_CASE("certificate subcommands on a strict contraction") {
  std::mt19937_64 rng(18002);
  RealizationArray r = random_contractive_realization(rng, 3, 2, 0.8);
  const std::string path = write_fixture("contraction.json", realization_to_json(r));

  RunResult searched = run_cli("certify-riccati --realization " + path);
  CHECK(searched.exit_code == 0);
  Json cert = Json::parse(searched.out);
  CHECK(cert["verdict"] == "yes");
  CHECK(matrix_from_json(cert["P"]).rows() == 3);

  RunResult balanced = run_cli("balance --realization " + path);
  CHECK(balanced.exit_code == 0);
  Json bj = Json::parse(balanced.out);
  CHECK(bj["balanced_check"]["verdict"] == "yes");
  RealizationArray out = realization_from_json(bj["realization"]);
  CHECK(out.state_order() == 3);
}

TEST_CASE("bounded-realness checks") {
  ExampleFamily fam = example_family(0.5, 3.0);
  const std::string f1 = write_fixture("f1.json", realization_to_json(fam.f1));
  RunResult pass = run_cli("db-check --realization " + f1 + " --samples 90 --radii 1.000001,1.1,2");
  CHECK(pass.exit_code == 0);
  Json pj = Json::parse(pass.out);
  CHECK(pj["verdict"] == "certified");
  CHECK(pj["sampled_sup"].get<double>() <= 1.0 + 1e-8);

  Json too_big;
  too_big["n"] = 0;
  too_big["m"] = 1;
  too_big["D"] = matrix_to_json(ComplexMatrix(2.0 * ComplexMatrix::Identity(1, 1)));
  const std::string big = write_fixture("big.json", too_big);
  RunResult fail = run_cli("db-check --realization " + big + " --samples 30");
  CHECK(fail.exit_code == 1);
  CHECK(Json::parse(fail.out)["verdict"] == "fail");

  // bad options are usage-level errors from validation inside the library
  CHECK(run_cli("db-check --realization " + f1 + " --radii 0.5").exit_code == 1);
}

TEST_CASE("function-level combination through the cli") {
  std::mt19937_64 rng(18003);
  IsometryTuple t = random_isometry_tuple(rng, 1, {1, 2});
  const std::string tuple = write_fixture("comb_tuple.json", isometry_tuple_to_json(t));
  Json members = Json::array({realization_to_json(random_contractive_realization(rng, 2, 1, 0.9)),
                              realization_to_json(random_contractive_realization(rng, 1, 2, 0.9))});
  const std::string rs = write_fixture("comb_members.json", members);
  RunResult r =
      run_cli("db-combine --tuple " + tuple + " --realizations " + rs + " --samples 60 --radii 1.1,2");
  CHECK(r.exit_code == 0);
  Json j = Json::parse(r.out);
  CHECK(j["verdict"]["verdict"] != "fail");
  CHECK(realization_from_json(j["realization"]).port_size() == 1);
}

TEST_CASE("series product emits a realization that feeds back into db-check") {
  ExampleFamily fam = example_family(0.5, 3.0);
  const std::string f1 = write_fixture("sp_f1.json", realization_to_json(fam.f1));
  const std::string f2 = write_fixture("sp_f2.json", realization_to_json(fam.f2));
  RunResult r = run_cli("series-product --left " + f1 + " --right " + f2);
  CHECK(r.exit_code == 0);
  Json j = Json::parse(r.out);
  CHECK(j["max_relative_sample_err"].get<double>() <= 1e-10);
  RealizationArray prod = realization_from_json(j["realization"]);
  CHECK(prod.state_order() == 2);

  const std::string prod_path = write_fixture("sp_prod.json", j["realization"]);
  CHECK(run_cli("db-check --realization " + prod_path + " --samples 60 --radii 1.1,2").exit_code ==
        0);
}

TEST_CASE("simulation output formats and determinism") {
  Json mset;
  mset["n"] = 2;
  mset["members"] = Json::array({matrix_to_json(ComplexMatrix(0.5 * ComplexMatrix::Identity(2, 2)))});
  const std::string set = write_fixture("mset.json", mset);
  ComplexMatrix x0(2, 1);
  x0(0, 0) = 1.0;
  x0(1, 0) = 0.0;
  const std::string x0_path = write_fixture("x0.json", matrix_to_json(x0));

  RunResult csv = run_cli("simulate --set " + set + " --x0 " + x0_path +
                          " --steps 2 --schedule fixed --indices 0,0 --format csv");
  CHECK(csv.exit_code == 0);
  CHECK(csv.out == "j,norm,member\n0,1,0\n1,0.5,0\n2,0.25,-1\n");

  RunResult j1 = run_cli("simulate --set " + set + " --x0 " + x0_path +
                         " --steps 5 --schedule random --seed 42");
  RunResult j2 = run_cli("simulate --set " + set + " --x0 " + x0_path +
                         " --steps 5 --schedule random --seed 42");
  CHECK(j1.exit_code == 0);
  CHECK(j1.out == j2.out);
  Json traj = Json::parse(j1.out);
  CHECK(traj["norms"].size() == 6);

  RunResult greedy = run_cli("simulate --set " + set + " --x0 " + x0_path + " --steps 3");
  CHECK(greedy.exit_code == 0);
}

TEST_CASE("inclusion certification through the cli") {
  Json mset;
  mset["n"] = 2;
  mset["members"] = Json::array({matrix_to_json(ComplexMatrix(0.5 * ComplexMatrix::Identity(2, 2)))});
  const std::string set = write_fixture("cert_set.json", mset);

  CHECK(run_cli("certify-inclusion --set " + set + " --alpha 0.5").exit_code == 0);
  CHECK(run_cli("certify-inclusion --set " + set + " --alpha 0.4").exit_code == 1);

  // weighted route: lower-triangular member that only a weighted factor accepts
  Json tri_set;
  tri_set["n"] = 2;
  ComplexMatrix tri = ComplexMatrix::Zero(2, 2);
  tri(0, 0) = 0.9;
  tri(1, 0) = 0.5;
  tri(1, 1) = 0.9;
  tri_set["members"] = Json::array({matrix_to_json(tri)});
  const std::string tri_path = write_fixture("tri_set.json", tri_set);
  CHECK(run_cli("certify-inclusion --set " + tri_path + " --alpha 1").exit_code == 1);

  ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  h(0, 0) = 1.0;
  h(1, 1) = 0.1;
  const std::string h_path = write_fixture("h.json", matrix_to_json(h));
  RunResult weighted =
      run_cli("certify-inclusion --set " + tri_path + " --alpha 1 --weight " + h_path);
  CHECK(weighted.exit_code == 0);
  Json wj = Json::parse(weighted.out);
  CHECK(wj["verdict"] == "yes");
  CHECK(wj["beta"].get<double>() == doctest::Approx(std::sqrt(10.0)).epsilon(1e-12));
}

TEST_CASE("demonstration family output is golden and byte-deterministic") {
  RunResult a = run_cli("demo-examples --theta 0.5 --a 3");
  RunResult b = run_cli("demo-examples --theta 0.5 --a 3");
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);

  Json j = Json::parse(a.out);
  CHECK(j["all_checks_pass"] == true);
  CHECK(j["checks"]["f5_golden"]["pass"] == true);
  CHECK(j["checks"]["balanced"]["f4"]["verdict"] == "yes");

  RealizationArray f5 = realization_from_json(j["f5"]);
  RealMatrix golden(3, 3);
  golden << 0.0, -8.0, -10.0, 8.0, 0.0, 14.0, 14.0, 10.0, 1.0;
  golden /= 36.0;
  CHECK(entrywise_close(f5.matrix(), golden.cast<Complex>(), 1e-13));

  // generic parameters trigger the same internal checks minus the goldens
  CHECK(run_cli("demo-examples --theta 0.25 --a 2").exit_code == 0);
  CHECK(run_cli("demo-examples --theta 2 --a 3").exit_code == 1);
}

TEST_CASE("usage and input errors use distinct exit codes") {
  CHECK(run_cli("no-such-command").exit_code == 64);
  CHECK(run_cli("").exit_code == 64);
  CHECK(run_cli("stein-check --set only").exit_code == 64);  // missing required --matrix
  CHECK(run_cli("--help").exit_code == 0);

  const std::string garbage = write_raw("garbage.json", "{not json");
  const std::string set = write_fixture("err_set.json", identity_set(1.0, true));
  CHECK(run_cli("stein-check --set " + set + " --matrix " + garbage).exit_code == 65);
  CHECK(run_cli("stein-check --set " + set + " --matrix /nonexistent/x.json").exit_code == 65);

  // structurally valid json that fails domain validation is a domain error
  const std::string skew = write_fixture(
      "skew.json", Json{{"H", matrix_to_json(ComplexMatrix::Identity(2, 2))},
                        {"alpha", -1.0},
                        {"closed", true}});
  const std::string m = write_fixture("m.json", matrix_to_json(ComplexMatrix::Identity(2, 2)));
  CHECK(run_cli("stein-check --set " + skew + " --matrix " + m).exit_code == 1);
}

TEST_CASE("results can be written to a file instead of stdout") {
  const std::string out_path = fixture_dir() + "/result.json";
  const std::string b =
      write_fixture("wb.json", matrix_to_json(ComplexMatrix(2.0 * ComplexMatrix::Identity(2, 2))));
  RunResult r = run_cli("stein-witness --matrix " + b + " --out " + out_path);
  CHECK(r.exit_code == 0);
  CHECK(r.out.empty());
  Json j = load_json_file(out_path);
  CHECK(j["a_norm"].get<double>() == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}
