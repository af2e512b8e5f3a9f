#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "numsys/report.hpp"
#include "numsys/types.hpp"

using namespace numsys;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run_cli(std::vector<std::string> args) {
  const auto path = std::filesystem::temp_directory_path() / "numsys_cli_test.out";
  std::filesystem::remove(path);
  args.insert(args.begin(), "numsys");
  args.push_back("--out");
  args.push_back(path.string());
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  Run r{cli::run(static_cast<int>(argv.size()), argv.data()), ""};
  std::ifstream is(path);
  std::stringstream ss;
  ss << is.rdbuf();
  r.out = ss.str();
  return r;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::stringstream ss(s);
  for (std::string l; std::getline(ss, l);) v.push_back(l);
  return v;
}

}  // namespace

TEST_CASE("count") {
  const Run r = run_cli({"count", "--beta", "2", "--digits", "0,1", "--upto", "100"});
  CHECK(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 102);
  CHECK(ls[0] == "n,r");
  for (std::size_t i = 1; i < ls.size(); ++i) CHECK(ls[i] == std::to_string(i - 1) + ",1");
  const Run s = run_cli({"count", "--base", "fibonacci", "--digits", "0,1", "--at", "10,7/2"});
  CHECK(s.code == 0);
  CHECK(lines(s.out) == std::vector<std::string>{"x,S", "10,18", "7/2,5"});
}

TEST_CASE("zeta") {
  const Run r = run_cli({"zeta", "--beta", "2", "--digits", "0,1", "--s", "-1"});
  CHECK(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 2);
  CHECK(ls[0] == "s_re,s_im,value_re,value_im,method,lambda_cut,ell_cut,c_shift,est_error");
  CHECK(std::abs(std::stod(ls[1].substr(ls[1].find(',', ls[1].find(',') + 1) + 1)) + 1.0 / 12) < 1e-10);
  const Run p = run_cli({"zeta", "--beta", "3", "--digits", "0,1,5", "--poles", "--jmax", "1", "--kmax", "1"});
  CHECK(p.code == 0);
  CHECK(lines(p.out)[0] == "j,k,loc_re,loc_im,res_re,res_im");
  CHECK(lines(p.out).size() == 7);
}

TEST_CASE("density and figure1 schemas") {
  const Run d = run_cli({"density", "--beta", "3", "--digits", "0,1,5", "--points", "8", "--depth", "8"});
  CHECK(d.code == 0);
  CHECK(lines(d.out)[0] == "x,psi,depth,error_bound");
  CHECK(lines(d.out).size() == 9);

  const Run f = run_cli({"figure1", "--panel", "a", "--format", "json"});
  CHECK(f.code == 0);
  const Report rep = from_json(f.out);
  REQUIRE(rep.rows.size() == 1001);
  for (std::size_t k = 0; k < rep.rows.size(); ++k) {
    CHECK(std::get<double>(rep.rows[k][1]) == 8 + static_cast<double>(k) / 500);
    CHECK(std::get<double>(rep.rows[k][2]) > 0);
  }
}

TEST_CASE("exit codes") {
  CHECK(run_cli({"count", "--beta", "2", "--digits", "1,2", "--upto", "5"}).code == 2);
  CHECK(run_cli({"count", "--digits", "0,1", "--upto", "5"}).code == 2);
  CHECK(run_cli({"zeta", "--beta", "2", "--digits", "0,1", "--s", "abc"}).code == 2);
  CHECK(run_cli({"count", "--beta", "2", "--digits", "0,1", "--upto", "5", "--format", "xml"}).code == 2);
  CHECK(run_cli({"nosuch"}).code == 2);
  // A pole is a computation failure, not a configuration error.
  CHECK(run_cli({"zeta", "--beta", "2", "--digits", "0,1", "--s", "1"}).code == 1);
  CHECK(run_cli({"count", "--beta", "2", "--digits", "0,1", "--at", "1e30", "--max-count", "1000"}).code == 0);
  CHECK(run_cli({"count", "--base", "fibonacci", "--digits", "0,1", "--at", "1e12", "--max-count", "100"}).code == 1);
}

TEST_CASE("report emission") {
  Report r;
  r.name = "demo";
  r.meta = {{"note", std::string("a \"quoted\", value")}, {"n", std::int64_t{3}}};
  r.columns = {"a", "b,c", "d"};
  CHECK(to_csv(r) == "a,\"b,c\",d\n");
  r.rows = {{std::int64_t{1}, 0.1, std::string("x\"y")}, {std::int64_t{-2}, 1.0 / 3, std::string("line\nbreak")},
            {std::int64_t{0}, std::nan(""), std::string("")}};
  const std::string csv = to_csv(r);
  CHECK(csv.find("1,0.10000000000000001,\"x\"\"y\"\n") != std::string::npos);
  CHECK(csv.find("\"line\nbreak\"") != std::string::npos);
  CHECK(csv.find('\r') == std::string::npos);

  const std::string j = to_json(r);
  CHECK(to_json(from_json(j)) == j);
  CHECK(j.find("null") != std::string::npos);
  CHECK(j.rfind("{\"report\":\"demo\",\"meta\":", 0) == 0);
  CHECK_THROWS_AS(from_json("{not json"), DomainError);
  CHECK_THROWS_AS(parse_format("xml"), DomainError);

  // Every CLI report survives the JSON round trip byte for byte.
  const Run c = run_cli({"coeffs", "--beta", "3", "--digits", "0,1,5", "--format", "json", "--m", "8"});
  CHECK(c.code == 0);
  CHECK(to_json(from_json(c.out)) == c.out);
  const Run m = run_cli({"moments", "--report", "chow-slattery", "--base", "fibonacci", "--n-max", "12", "--format",
                         "json"});
  CHECK(m.code == 0);
  CHECK(to_json(from_json(m.out)) == m.out);
}
