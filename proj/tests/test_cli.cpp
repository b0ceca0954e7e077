#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "bertrand/cli.hpp"
#include "bertrand/errors.hpp"

using namespace bertrand;

namespace {
struct Run {
  int rc;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "bertrand");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int rc = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {rc, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("bertrand_cli_" + name);
}
}  // namespace

TEST_CASE("argument parsing") {
  CHECK(parse_count("10000") == 10000);
  CHECK(parse_count("1e4") == 10000);
  CHECK(parse_count("2.5e6") == 2'500'000);
  CHECK_THROWS_AS(parse_count("1.5"), DomainError);
  CHECK_THROWS_AS(parse_count("ten"), DomainError);
  CHECK(parse_point("k=8,n=10000") == Point{{"k", 8}, {"n", 10000}});
  CHECK_THROWS_AS(parse_point("k8"), DomainError);
  CHECK(parse_range("6818..1e5") == std::pair<std::int64_t, std::int64_t>{6818, 100000});
  CHECK_THROWS_AS(parse_range("6818-100"), DomainError);
}

TEST_CASE("verify writes a certificate and exits 0") {
  const auto r = run({"verify", "thm-2.1.3", "--from", "3", "--to", "6817"});
  CHECK(r.rc == kExitPass);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("status") == "verified");
  CHECK(j.at("range") == nlohmann::json::array({3, 6817}));
}

TEST_CASE("failed verification exits 1 with a summary on stderr") {
  const auto r = run({"verify", "thm-2.3.1", "--from", "31400", "--to", "31420"});
  CHECK(r.rc == kExitCheckFailed);
  const auto line = r.err.substr(r.err.find('{'));
  const auto j = nlohmann::json::parse(line);
  // 31397 and 31469 are consecutive primes
  CHECK(j.at("failures") == nlohmann::json::array({31400, 31401, 31402, 31403, 31404, 31405, 31406, 31407, 31408}));
}

TEST_CASE("usage and resource errors") {
  CHECK(run({"verify", "thm-0.0.0"}).rc == kExitUsage);
  CHECK(run({"bounds", "eval", "X9", "--at", "n=3"}).rc == kExitUsage);
  CHECK(run({"bounds", "eval", "L2.1.1d", "--at", "n=2"}).rc == kExitUsage);
  CHECK(run({"table", "--k", "5", "--n-list", "10"}).rc == kExitUsage);
  CHECK(run({}).rc == kExitUsage);
  const auto big = run({"--budget", "100", "table", "--k", "4", "--n-list", "1e4"});
  CHECK(big.rc == kExitResource);
  CHECK(big.err.find("budget") != std::string::npos);
}

TEST_CASE("bounds eval prints the rounded headline value") {
  const auto r = run({"bounds", "eval", "T4.0.1count", "--at", "n=10000"});
  CHECK(r.rc == kExitPass);
  CHECK(r.out.find("11.7") != std::string::npos);
  const auto j = run({"bounds", "eval", "L2.1.1a", "--at", "n=6818", "--json"});
  CHECK(nlohmann::json::parse(j.out).at("verdict") == "satisfied");
}

TEST_CASE("bounds scan and threshold") {
  const auto s = run({"bounds", "scan", "L2.2.7a", "--range", "93..1e4"});
  CHECK(s.rc == kExitPass);
  const auto trace = scratch("trace.csv");
  const auto t = run({"bounds", "scan", "L2.2.4", "--range", "10437..10500", "--param", "n", "--at", "m=5",
                      "--trace", trace.string()});
  CHECK(t.rc == kExitPass);
  std::ifstream f(trace);
  std::string header;
  std::getline(f, header);
  CHECK(header.find("slack") != std::string::npos);
  std::filesystem::remove(trace);
  const auto bad = run({"bounds", "scan", "L2.1.1d", "--range", "4..7000"});
  CHECK(bad.rc == kExitCheckFailed);
  const auto th = run({"bounds", "threshold", "fpos5", "--range", "1..20"});
  CHECK(th.rc == kExitPass);
  CHECK(nlohmann::json::parse(th.out).at("head_end") == 7);
  CHECK(run({"bounds", "list"}).rc == kExitPass);
}

TEST_CASE("table output matches the k=4 comparison rows") {
  const auto r = run({"table", "--k", "4", "--n-list", "1e4,1e5,1e6"});
  CHECK(r.rc == kExitPass);
  CHECK(r.out ==
        "n,result,weak_pnt,actual\n10000,11.7,846.4,930\n100000,399.9,7093.3,7678\n1000000,4200.5,61023.5,65367\n");
  const auto again = run({"--jobs", "3", "table", "--k", "4", "--n-list", "1e4,1e5,1e6"});
  CHECK(again.out == r.out);
  const auto j = run({"table", "--k", "8", "--n-list", "1e4", "--json"});
  const auto rows = nlohmann::json::parse(j.out);
  CHECK(rows.at(0).at("actual") == 876);
}

TEST_CASE("verify output survives recheck") {
  const auto cert = scratch("cert.json");
  CHECK(run({"verify", "thm-3.1.2", "--out", cert.string()}).rc == kExitPass);
  const auto r = run({"recheck", cert.string()});
  CHECK(r.rc == kExitPass);
  CHECK(nlohmann::json::parse(r.out).at("ok") == true);
  nlohmann::json j;
  std::ifstream(cert) >> j;
  j["witnesses"][0]["prime"] = 4;
  std::ofstream(cert) << j.dump();
  CHECK(run({"recheck", cert.string(), "--fraction", "1"}).rc == kExitCheckFailed);
  std::ofstream(cert) << "{}";
  CHECK(run({"recheck", cert.string()}).rc == kExitUsage);
  std::filesystem::remove(cert);
}

TEST_CASE("registry dumps") {
  for (const char* what : {"bounds", "analytic", "cases", "theorems"}) {
    const auto r = run({"registry", what});
    CHECK(r.rc == kExitPass);
    CHECK_FALSE(nlohmann::json::parse(r.out).is_null());
  }
  CHECK(run({"--version"}).out.find("bertrand-kit") != std::string::npos);
}
