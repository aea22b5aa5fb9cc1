#include "doctest.h"
#include "oracles.hpp"
#include "cli.hpp"
#include "json.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

using namespace roughlab;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = ROUGHLAB_FIXTURES;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string command_of(const fs::path& spec) {
  std::ifstream in(spec);
  return nlohmann::json::parse(in).at("command").get<std::string>();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("roughlab_cli_" + name);
  fs::remove_all(p);
  return p;
}

int exit_code(const std::string& args) {
  const std::string cmd = std::string(ROUGHLAB_BIN) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::vector<fs::path> good_fixtures() {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(kFixtures)) {
    const auto name = e.path().filename().string();
    if (e.path().extension() == ".json" && name.rfind("bad_", 0) != 0 &&
        name.rfind("big_", 0) != 0)
      out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("every fixture runs twice with byte-identical output") {
  const auto specs = good_fixtures();
  std::set<std::string> commands;
  for (const auto& spec : specs) {
    CAPTURE(spec.filename().string());
    cli::Options a{command_of(spec), spec, scratch("a"), {}, {}};
    cli::Options b = a;
    b.out_dir = scratch("b");
    std::ostringstream log;
    REQUIRE(cli::run_main(a, log) == 0);
    REQUIRE(cli::run_main(b, log) == 0);
    std::size_t files = 0;
    for (const auto& e : fs::directory_iterator(a.out_dir)) {
      const fs::path other = b.out_dir / e.path().filename();
      REQUIRE(fs::exists(other));
      CHECK(slurp(e.path()) == slurp(other));
      ++files;
    }
    CHECK(files >= 1);
    commands.insert(a.command);
  }
  CHECK(commands.size() == cli::kCommands.size());
}

TEST_CASE("pvar on the triangle loop matches the subsequence oracle") {
  const auto out = scratch("tri");
  cli::Options o{"pvar", kFixtures / "pvar_triangle.json", out, {}, {}};
  cli::run(o);
  std::ifstream in(out / "pvar_triangle.json");
  const auto j = nlohmann::json::parse(in);
  const auto path = read_csv_file((kFixtures / "triangle.csv").string());
  const double brute = oracle::brute_pvar(path, 2.0);
  CHECK(brute == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(j.at("value").get<double>() == doctest::Approx(brute).epsilon(1e-15));
  CHECK(j.at("partition_size").get<int>() == 4);
  const std::string csv = slurp(out / "pvar_triangle_partition.csv");
  CHECK(csv.rfind("index,t,x0,x1\n0,0,0,0\n2,", 0) == 0);
}

TEST_CASE("lacunary table: block-boundary rows alternate in sign") {
  const auto out = scratch("lac");
  cli::run({"lacunary", kFixtures / "lacunary_f.json", out, {}, {}});
  std::ifstream in(out / "lacunary_f.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "N,value,block_index");
  std::map<long, double> v;
  while (std::getline(in, line)) {
    long N;
    double x;
    char c;
    std::istringstream ss(line);
    ss >> N >> c >> x;
    v[N] = x;
  }
  // Last rows of block 1 and block 2.
  REQUIRE(v.count(37));
  REQUIRE(v.count(1050072));
  CHECK(v[37] < 0.0);
  CHECK(v[1050072] > 0.0);
  const std::string body = slurp(out / "lacunary_f.csv");
  CHECK(body.find("37,-19.878026157591435,1\n") != std::string::npos);
}

TEST_CASE("seed override changes random inputs deterministically") {
  const fs::path spec = kFixtures / "pvar_random.json";
  cli::Options a{"pvar", spec, scratch("s1"), {}, 5};
  cli::Options b{"pvar", spec, scratch("s2"), {}, 5};
  cli::Options c{"pvar", spec, scratch("s3"), {}, {}};
  cli::run(a);
  cli::run(b);
  cli::run(c);
  CHECK(slurp(a.out_dir / "pvar.json") == slurp(b.out_dir / "pvar.json"));
  CHECK(slurp(a.out_dir / "pvar.json") != slurp(c.out_dir / "pvar.json"));
}

TEST_CASE("exit codes") {
  const std::string fx = kFixtures.string();
  CHECK(exit_code("pvar --spec " + fx + "/pvar_triangle.json --out " +
                  scratch("ok").string()) == 0);
  CHECK(exit_code("pvar --spec " + fx + "/bad_pvar.json --out /tmp") == 2);
  CHECK(exit_code("pvar --spec " + fx + "/big_random.json --out /tmp") == 3);
  CHECK(exit_code("area --spec " + fx + "/pvar_triangle.json --out /tmp") == 2);
  CHECK(exit_code("nonsense --spec " + fx + "/pvar_triangle.json") == 2);
  CHECK(exit_code("pvar") == 2);
  CHECK(exit_code("pvar --spec /nonexistent.json") == 2);
  CHECK(exit_code("pvar --spec " + fx + "/pvar_triangle.json --tol -1") == 2);
}

TEST_CASE("validation messages name the field") {
  const auto dir = scratch("bad");
  fs::create_directories(dir);
  auto message = [&](const std::string& body) {
    std::ofstream(dir / "s.json") << body;
    try {
      cli::run({"probe", dir / "s.json", dir, {}, {}});
    } catch (const ValidationError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message(R"({"input": {"kind": "trig", "terms": [{"a": 1}], "grid": {"dyadic": 3}}})")
            .find("input.terms[0].freq") != std::string::npos);
  CHECK(message(R"({"input": {"kind": "spline"}})").find("input.kind") !=
        std::string::npos);
  CHECK(message("{\"input\":\n  {\"kind\": }").find("line 2") != std::string::npos);
  CHECK(message(R"({"input": {"kind": "rn", "n": 2, "grid": {"uniform": 65}}, "probe": "strong"})")
            .find("'probe'") != std::string::npos);
}

TEST_CASE("divergence is a result, not a failure") {
  const auto out = scratch("div");
  cli::Options o{"integrate", kFixtures / "integrate_necessity.json", out, {}, {}};
  std::ostringstream log;
  REQUIRE(cli::run_main(o, log) == 0);
  std::ifstream in(out / "integrate_necessity.json");
  const auto j = nlohmann::json::parse(in);
  CHECK(j.at("status").get<std::string>() != "converged");
  CHECK(j.at("final_value").is_null());
}
