#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "support.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cbnorm/acceptance.hpp"
#include "cbnorm/cli.hpp"
#include "cbnorm/json_io.hpp"

using cbnorm::io::json;

namespace {

struct Outcome {
  int code;
  std::string out;
  json doc() const { return json::parse(out); }
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cbnorm::cli::run(args, out, err);
  return {code, out.str()};
}

const std::string c2 = R"({"kind":"cyclic","n":2})";
const std::string s3 = R"({"kind":"symmetric","n":3})";

}  // namespace

TEST_CASE("schur-norm reports norm, gap and witness") {
  const auto r = run({"schur-norm", "[[1,1],[1,-1]]"});
  REQUIRE(r.code == 0);
  const auto d = r.doc();
  CHECK(d["norm"].get<double>() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
  CHECK(d.contains("gap"));
  CHECK(d["residual"].get<double>() <= 1e-6);
  CHECK(d["witness"]["bound"].get<double>() <= std::sqrt(2.0) + 1e-5);
  CHECK(d.begin().key() == "norm");
}

TEST_CASE("schur-apply and predual-norm") {
  const auto a = run({"schur-apply", "[[1,0],[0,1]]", "[[2,3],[4,5]]"});
  REQUIRE(a.code == 0);
  const auto m = cbnorm::io::matrix_from_json(a.doc()["result"], "out");
  CHECK(m == cbnorm::ComplexMatrix::from_real_rows({{2, 0}, {0, 5}}));
  for (const char* method : {"max", "factored"}) {
    const auto p = run({"predual-norm", "[[1,0],[0,1]]", "--method", method});
    REQUIRE(p.code == 0);
    CHECK(p.doc()["norm"].get<double>() == doctest::Approx(2.0).epsilon(1e-6));
  }
}

TEST_CASE("group commands") {
  const auto cb = run({"cb-norm", "--group", c2, "--u", "[1, -3]"});
  REQUIRE(cb.code == 0);
  CHECK(cb.doc()["norm"].get<double>() == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(cb.doc()["schur_matrix"]["rows"] == 2);

  const auto an = run({"a-norm", "--group", s3, "--u", "[1,0,0,0,0,0]"});
  REQUIRE(an.code == 0);
  CHECK(an.doc()["norm"].get<double>() == doctest::Approx(1.0).epsilon(1e-6));

  for (const char* method : {"dual", "primal"}) {
    const auto q = run({"q-norm", "--group", c2, "--f", "[1,-1]", "--method", method});
    REQUIRE(q.code == 0);
    CHECK(q.doc()["norm"].get<double>() == doctest::Approx(2.0).epsilon(1e-6));
  }
  const auto cs = run({"cstar-norm", "--group", c2, "--f", "[1,1]"});
  REQUIRE(cs.code == 0);
  CHECK(cs.doc()["norm"].get<double>() == doctest::Approx(2.0));

  const auto pa = run({"pairing", "--u", "[1,1,1]", "--f", "[1,0,0]"});
  REQUIRE(pa.code == 0);
  CHECK(pa.out.find("1") != std::string::npos);
}

TEST_CASE("free group sections") {
  const auto r = run({"sections", "--free", "2", "--radius", "1..2", "--u", "decay:0.5"});
  REQUIRE(r.code == 0);
  const auto d = r.doc();
  REQUIRE(d["sections"].size() == 2);
  CHECK(d["sections"][1]["size"] == 17);
  for (const auto& s : d["sections"]) {
    CHECK(s["report"]["norm"].get<double>() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(s["report"]["lower_bound"] == true);
  }
  const auto cb = run({"cb-norm", "--group", R"({"kind":"free_section","gens":1,"radius":2})", "--u", "decay:0.5"});
  REQUIRE(cb.code == 0);
  CHECK(cb.doc()["lower_bound"] == true);
}

TEST_CASE("functorial commands") {
  const auto re = run({"restrict", "--group", s3, "--subgroup", "[0,3,4]", "--u", "[1,0.5,0.2,-1,0.3,0]", "--verify"});
  REQUIRE(re.code == 0);
  CHECK(re.out.find("nonincreasing") != std::string::npos);
  const auto ex = run({"extend", "--group", s3, "--gens", "[3]", "--u", "[1,0.5,-0.2]", "--verify"});
  REQUIRE(ex.code == 0);
  CHECK(ex.out.find("\"equal\"") != std::string::npos);
  const auto li = run({"lift", "--group", R"({"kind":"cyclic","n":4})", "--normal", "[0,2]", "--u", "[1,2]", "--verify"});
  REQUIRE(li.code == 0);
  const auto pb = run({"pullback", "--source", R"({"kind":"cyclic","n":4})", "--target", c2, "--gens", "[1]",
                       "--images", "[1]", "--u", "[1,-0.5]", "--verify"});
  REQUIRE(pb.code == 0);
  CHECK(pb.out.find("true") != std::string::npos);
}

TEST_CASE("input errors exit with code 2 and a JSON error") {
  const auto bad = run({"cb-norm", "--group", R"({"kind":"table","cayley":[[0,1],[1,1]]})", "--u", "[1,1]"});
  CHECK(bad.code == 2);
  CHECK(bad.doc()["error"].get<std::string>().find("no inverse") != std::string::npos);
  const auto malformed = run({"schur-norm", "[[1,2],[3"});
  CHECK(malformed.code == 2);
  CHECK(malformed.doc().contains("error"));
  CHECK(run({"schur-norm", "/nonexistent/file.json"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"cb-norm", "--group", c2, "--u", "[1,2,3]"}).code == 2);
  const auto nn = run({"lift", "--group", s3, "--normal", "[0,2]", "--u", "[1,1,1]"});
  CHECK(nn.code == 2);
  CHECK(nn.doc()["error"].get<std::string>().find("not normal") != std::string::npos);
  CHECK(run({"schur-norm", "[[1]]", "--gap-tol", "-1"}).code == 2);
}

TEST_CASE("solver failures exit with code 1") {
  const auto r = run({"schur-norm", "[[1,2],[3,4]]", "--max-iters", "2"});
  CHECK(r.code == 1);
  CHECK(r.doc()["status"] == "max_iterations");
}

TEST_CASE("help exits cleanly") {
  const auto r = run({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("schur-norm") != std::string::npos);
}

TEST_CASE("output is deterministic and can go to a file") {
  const std::vector<std::string> args{"q-norm", "--group", s3, "--f", "[1,0.5,-0.25,0,2,1]"};
  CHECK(run(args).out == run(args).out);
  const auto path = (std::filesystem::temp_directory_path() / "cbnorm_test_output.json").string();
  auto with_file = args;
  with_file.insert(with_file.end(), {"--output", path});
  REQUIRE(run(with_file).code == 0);
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str() == run(args).out);
  std::remove(path.c_str());
}

TEST_CASE("acceptance subcommand") {
  const auto r = run({"acceptance", "--suite", "primary", "--criteria", "1,3", "--json"});
  REQUIRE(r.code == 0);
  const auto d = r.doc();
  CHECK(d["all_pass"] == true);
  CHECK(d["criteria"].size() == 2);
  const auto table = run({"acceptance", "--criteria", "3"});
  CHECK(table.out.find("PASS") != std::string::npos);
}

TEST_CASE("loosening the gap tolerance makes a criterion fail") {
  cbnorm::acceptance::Config cfg;
  cfg.tol.gap_tol = 1e-2;
  cfg.only = {1, 2};
  bool any_fail = false;
  for (const auto& r : cbnorm::acceptance::run(cfg)) any_fail = any_fail || !r.pass;
  CHECK(any_fail);
  const auto cli = run({"acceptance", "--criteria", "1", "--gap-tol", "1e-2", "--json"});
  CHECK(cli.code == 0);
  CHECK(cli.doc()["all_pass"] == false);
}

TEST_CASE("outcomes do not depend on the seed") {
  for (std::uint64_t seed : {1u, 77u}) {
    cbnorm::acceptance::Config cfg;
    cfg.seed = seed;
    cfg.only = {1, 2, 3, 5};
    for (const auto& r : cbnorm::acceptance::run(cfg)) CHECK_MESSAGE(r.pass, r.name);
  }
}
