#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

const std::string kData = WASSERCOP_DATA_DIR;

Run run(const std::string& args) {
  const std::string cmd = std::string(WASSERCOP_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int status = ::pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string data(const std::string& name) { return kData + "/" + name; }

std::string temp_file(const std::string& name, const std::string& text) {
  const auto dir = fs::temp_directory_path() / "wassercop_test_cli";
  fs::create_directories(dir);
  const auto path = dir / name;
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST_CASE("compute on the two-atom example", "[cli][compute]") {
  const auto r = run("compute --p 1 " + data("f.csv") + " " + data("g.csv"));
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["value"].get<double>() == Catch::Approx(1.0).margin(1e-15));
  CHECK(j["method"] == "QuantileIntegral");

  for (const char* method : {"copula", "cdf"}) {
    const auto m = run(std::string("compute --p 1 --method ") + method + " " + data("f.csv") +
                       " " + data("g.csv"));
    REQUIRE(m.code == 0);
    CHECK(json::parse(m.out)["value"].get<double>() == Catch::Approx(1.0).margin(1e-15));
  }
  const auto same = run("compute --p 2 " + data("f.csv") + " " + data("f.csv"));
  REQUIRE(same.code == 0);
  CHECK(json::parse(same.out)["value"] == 0.0);
}

TEST_CASE("compute formats", "[cli][compute]") {
  const auto csv = run("compute --p 2 --format csv " + data("f.csv") + " " + data("g.csv"));
  REQUIRE(csv.code == 0);
  CHECK(csv.out.rfind("p,q,value,power_value,method", 0) == 0);
  const auto human = run("compute --p 2 --format human " + data("f.csv") + " " + data("g.csv"));
  REQUIRE(human.code == 0);
  CHECK(human.out.find("W_p^p:          1.5") != std::string::npos);
}

TEST_CASE("compute with a shared copula", "[cli][compute]") {
  const auto r = run("compute --p 2 --copula " + data("copula.csv") + " --margins-f " +
                     data("u01.json") + " " + data("u01.json") + " --margins-g " +
                     data("u02.json") + " " + data("u02.json"));
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["method"] == "SharedCopulaSum");
  CHECK(j["power_value"].get<double>() == Catch::Approx(2.0 / 3).margin(1e-9));
  CHECK(j.contains("copula"));
}

TEST_CASE("bounds ratios", "[cli][bounds]") {
  const auto d1 = run("bounds --p 2 --q 1 " + data("f.csv") + " " + data("g.csv"));
  REQUIRE(d1.code == 0);
  const auto b1 = json::parse(d1.out)["bounds"];
  CHECK(b1["lower"] == b1["upper"]);

  const auto d2 = run("bounds --p 2 --q 1 --copula " + data("copula.csv") + " --margins-f " +
                      data("f.csv") + " " + data("f.csv") + " --margins-g " + data("g.csv") +
                      " " + data("g.csv"));
  REQUIRE(d2.code == 0);
  const auto b2 = json::parse(d2.out)["bounds"];
  CHECK(b2["upper"].get<double>() / b2["lower"].get<double>() == Catch::Approx(2.0));

  const auto c3 = temp_file("c3.csv", "0.2,0.3,0.4\n0.6,0.1,0.9\n0.9,0.8,0.5\n");
  const auto d3 = run("bounds --p 1 --q 2 --copula " + c3 + " --margins-f " + data("f.csv") +
                      " " + data("f.csv") + " " + data("f.csv") + " --margins-g " +
                      data("g.csv") + " " + data("g.csv") + " " + data("g.csv"));
  REQUIRE(d3.code == 0);
  const auto b3 = json::parse(d3.out)["bounds"];
  CHECK(b3["lower"].get<double>() / b3["upper"].get<double>() ==
        Catch::Approx(1 / std::sqrt(3.0)));

  CHECK(run("bounds --p 2 --q 2 " + data("f.csv") + " " + data("g.csv")).code == 2);
}

TEST_CASE("sample writes the comonotone atoms", "[cli][sample]") {
  const auto r = run("sample " + data("f.csv") + " " + data("g.csv"));
  REQUIRE(r.code == 0);
  CHECK(r.out == "x,y,mass\n0,0,0.25\n0,2,0.25\n1,2,0.5\n");
  CHECK(run("sample " + data("f.csv") + " " + data("f.csv")).out ==
        "x,y,mass\n0,0,0.5\n1,1,0.5\n");
  const auto a = temp_file("a.csv", "x\n0\n");
  const auto b = temp_file("b.csv", "x\n3\n");
  CHECK(run("sample " + a + " " + b).out == "x,y,mass\n0,3,1\n");
  const auto out = (fs::temp_directory_path() / "wassercop_test_cli" / "pairs.csv").string();
  REQUIRE(run("sample --out " + out + " " + data("f.csv") + " " + data("g.csv")).code == 0);
  std::ifstream in(out);
  std::string first;
  std::getline(in, first);
  CHECK(first == "x,y,mass");
  const auto grid = run("sample --grid uniform:4 " + data("u01.json") + " " + data("u02.json"));
  REQUIRE(grid.code == 0);
  CHECK(grid.out == "x,y,mass\n0.125,0.25,0.25\n0.375,0.75,0.25\n0.625,1.25,0.25\n0.875,1.75,0.25\n");
}

TEST_CASE("oracle subcommand", "[cli][oracle]") {
  const auto r = run("oracle --p 2 " + data("mu.csv") + " " + data("nu.csv"));
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["value"].get<double>() == Catch::Approx(0.25));
  CHECK(j["entries"].size() >= 2);
  CHECK(run("oracle --p 2 --cap 1 " + data("mu.csv") + " " + data("nu.csv")).code == 4);
  CHECK(run("oracle --p 2 --no-fast-path " + data("mu.csv") + " " + data("nu.csv")).code == 0);
}

TEST_CASE("verify subcommand", "[cli][verify]") {
  const auto all = run("verify");
  CHECK(all.code == 0);
  CHECK(all.out.find("FAIL") == std::string::npos);
  CHECK(all.out.find("PASS assignment") != std::string::npos);
  const auto bad = run("verify --corrupt formula");
  CHECK(bad.code == 1);
  CHECK(bad.out.find("FAIL") != std::string::npos);
  const auto nec = run("verify --suite necessity");
  CHECK(nec.code == 0);
  CHECK(nec.out.find("witness") != std::string::npos);
  const auto js = run("verify --suite frechet --format json");
  REQUIRE(js.code == 0);
  CHECK_NOTHROW(json::parse(js.out));
  CHECK(run("verify --suite nope").code == 2);
}

TEST_CASE("exit codes", "[cli][errors]") {
  CHECK(run("").code == 2);
  CHECK(run("compute --p 0.5 " + data("f.csv") + " " + data("g.csv")).code == 2);
  CHECK(run("compute --p 1 " + data("f.csv") + " /nonexistent.csv").code == 2);
  const auto garbage = temp_file("garbage.csv", "x\nhello\n");
  CHECK(run("compute --p 1 " + data("f.csv") + " " + garbage).code == 2);
  const auto huge = temp_file("huge.csv", "x\n1e200\n-1e200\n");
  CHECK(run("compute --p 2 " + data("f.csv") + " " + huge).code == 3);
  CHECK(run("compute --p 1 --grid uniform:1 " + data("u01.json") + " " + data("u02.json"))
            .code == 2);
  CHECK(run("--help").code == 0);
}

TEST_CASE("output is deterministic", "[cli][determinism]") {
  const std::string args = "compute --p 2 " + data("normal.json") + " " + data("u02.json");
  const auto a = run(args);
  const auto b = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const auto va = run("verify --seed 7 --format json");
  const auto vb = run("verify --seed 7 --format json");
  CHECK(va.out == vb.out);
  const auto oa = run("oracle --p 1 " + data("mu.csv") + " " + data("nu.csv"));
  CHECK(oa.out == run("oracle --p 1 " + data("mu.csv") + " " + data("nu.csv")).out);
}
