// End-to-end runs of the command line tool: JSON shape, exit codes, and
// run-to-run determinism of everything except the timing fields.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "sftlab/serialize.hpp"

using namespace sftlab;

namespace {

struct CliRun {
  int exit_code = -1;
  Json out;
};

CliRun run_cli(const std::string& args) {
  const std::string cmd = std::string(SFTLAB_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string raw;
  char buf[4096];
  while (true) {
    const size_t got = fread(buf, 1, sizeof(buf), pipe);
    if (got == 0) break;
    raw.append(buf, got);
  }
  const int status = pclose(pipe);
  CliRun r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  REQUIRE(!raw.empty());
  r.out = Json::parse(raw);
  return r;
}

}  // namespace

TEST_CASE("models lists the registry") {
  const CliRun r = run_cli("models");
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.out.at("subcommand") == "models");
  const Json& models = r.out.at("result").at("models");
  REQUIRE(models.size() == 6);
  const std::vector<std::string> names = {"hard_core", "ising",   "potts",
                                          "checkerboard", "iceberg", "lipschitz"};
  for (size_t i = 0; i < names.size(); ++i) {
    REQUIRE(models.at(i).at("name") == names[i]);
    REQUIRE(!models.at(i).at("params").get<std::string>().empty());
  }
}

TEST_CASE("certify derives the chain from single site fillability") {
  const CliRun r = run_cli("certify --model checkerboard --k 5");
  REQUIRE(r.exit_code == 0);
  const Json& res = r.out.at("result");
  REQUIRE(res.at("ssf") == true);
  REQUIRE(res.at("tssm_gap") == 2);
  REQUIRE(res.at("strong_irreducibility_gap") == 2);
  REQUIRE(res.at("safe_symbols").empty());
  const Json& certs = res.at("certificates");
  REQUIRE(certs.size() == 3);
  REQUIRE(certs.at(0).at("property") == "ssf");
  REQUIRE(certs.at(0).at("gap") == 0);
  REQUIRE(certs.at(0).at("provenance") == "exhaustive_check");
  REQUIRE(certs.at(1).at("property") == "tssm");
  REQUIRE(certs.at(1).at("from") == "ssf");
  REQUIRE(certs.at(2).at("property") == "strong-irreducible");
  REQUIRE(certs.at(2).at("gap") == 2);
  REQUIRE(certs.at(2).at("from") == "tssm");
}

TEST_CASE("certify falls back to fillability when ssf fails") {
  const CliRun r = run_cli("certify --model checkerboard --k 4 --fill-n-max 2");
  REQUIRE(r.exit_code == 0);
  const Json& res = r.out.at("result");
  REQUIRE(res.at("ssf") == false);
  REQUIRE(res.at("tssm_gap").is_null());
  REQUIRE(res.at("strong_irreducibility_gap") == 6);
  const Json& certs = res.at("certificates");
  REQUIRE(certs.size() == 2);
  REQUIRE(certs.at(0).at("property") == "n-fillable");
  REQUIRE(certs.at(0).at("gap") == 2);
  REQUIRE(certs.at(0).at("provenance") == "exhaustive_check");
  REQUIRE(certs.at(1).at("property") == "strong-irreducible");
  REQUIRE(certs.at(1).at("gap") == 6);
  REQUIRE(certs.at(1).at("from") == "n-fillable");
}

TEST_CASE("certify runs the tssm decision in one dimension") {
  const CliRun r = run_cli("certify --model hard_core --d 1 --tssm-gap 2");
  REQUIRE(r.exit_code == 0);
  const Json& res = r.out.at("result");
  REQUIRE(res.at("safe_symbols") == Json::array({"0"}));
  REQUIRE(res.at("tssm_gap") == 2);
  const Json& check = res.at("tssm_check");
  REQUIRE(check.at("verdict") == "certified");
  REQUIRE(check.at("gap") == 2);
  REQUIRE(check.at("subsets_processed") == 16);
  REQUIRE(check.at("subsets_total") == 16);
  const Json& certs = res.at("certificates");
  REQUIRE(certs.size() == 5);
  REQUIRE(certs.at(2).at("property") == "top-mixing-1d");
  REQUIRE(certs.at(3).at("property") == "tssm");
  REQUIRE(certs.at(3).at("from") == "top-mixing-1d");
  REQUIRE(r.out.at("assumptions") == Json::array({"tssm gap 2 via top-mixing-1d"}));
}

TEST_CASE("certify reads a shift description from a config file") {
  const std::string path = "/tmp/sftlab_cli_golden_mean.json";
  {
    std::ofstream f(path);
    f << R"({"alphabet":["0","1"],"axes":1,"forbidden":{"axis_0":[["1","1"]]}})";
  }
  const CliRun r = run_cli("certify --config " + path);
  std::remove(path.c_str());
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.out.at("inputs").at("description").at("alphabet") == Json::array({"0", "1"}));
  const Json& res = r.out.at("result");
  REQUIRE(res.at("ssf") == true);
  REQUIRE(res.at("safe_symbols") == Json::array({"0"}));
  REQUIRE(res.at("tssm_gap") == 2);
  REQUIRE(!res.contains("tssm_check"));
}

TEST_CASE("unknown models exit with an input error") {
  const CliRun r = run_cli("certify --model nonsense");
  REQUIRE(r.exit_code == 4);
  REQUIRE(r.out.at("result").at("error") == "unknown model: nonsense");
}

TEST_CASE("admissible refutes a touching pair and certifies a diagonal one") {
  const CliRun bad =
      run_cli(R"(admissible --model hard_core --pattern '{"sites":[[0,0],[1,0]],"letters":["1","1"]}')");
  REQUIRE(bad.exit_code == 2);
  REQUIRE(bad.out.at("result").at("locally_admissible") == false);

  const CliRun good =
      run_cli(R"(admissible --model hard_core --pattern '{"sites":[[0,0],[1,1]],"letters":["1","1"]}')");
  REQUIRE(good.exit_code == 0);
  const Json& res = good.out.at("result");
  REQUIRE(res.at("locally_admissible") == true);
  REQUIRE(res.at("globally_admissible") == true);
  REQUIRE(res.at("method") == "local implies global under single-site fillability");
  REQUIRE(good.out.at("assumptions") == Json::array({"ssf via exhaustive check"}));
}

TEST_CASE("tssm-search finds a stripe violation for the chequerboard") {
  const CliRun r = run_cli(
      "tssm-search --model checkerboard --k 4 --gap 6 --si-gap 6 --strategy stripes");
  REQUIRE(r.exit_code == 2);
  const Json& res = r.out.at("result");
  REQUIRE(res.at("found") == true);
  const Json& wit = res.at("witness");
  REQUIRE(wit.at("u").at("sites") == Json::array({Json::array({-4, 0})}));
  REQUIRE(wit.at("u").at("letters") == Json::array({"2"}));
  REQUIRE(wit.at("v").at("sites") == Json::array({Json::array({4, 0})}));
  REQUIRE(wit.at("v").at("letters") == Json::array({"3"}));
  REQUIRE(wit.at("s").at("sites").size() == 18);
  REQUIRE(res.at("checks").at("us_admissible") == true);
  REQUIRE(res.at("checks").at("sv_admissible") == true);
  REQUIRE(res.at("checks").at("usv_admissible") == false);
}

TEST_CASE("tssm-search reports nothing at a certified gap") {
  const CliRun r = run_cli(
      "tssm-search --model hard_core --gap 3 --strategy singletons --strategy combs");
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.out.at("result").at("found") == false);
}

TEST_CASE("entropy-bounds emits the exact value in one dimension") {
  const CliRun r = run_cli("entropy-bounds --model hard_core --d 1");
  REQUIRE(r.exit_code == 0);
  const Json& res = r.out.at("result");
  const double golden = std::log((1.0 + std::sqrt(5.0)) / 2.0);
  REQUIRE(res.at("exact").get<double>() == Catch::Approx(golden).margin(1e-14));
  const Json& ub = res.at("upper_bounds");
  REQUIRE(ub.size() == 4);
  REQUIRE(ub.at(0).at("n") == 1);
  REQUIRE(ub.at(0).at("upper").get<double>() == Catch::Approx(std::log(5.0) / 3.0).margin(1e-14));
  for (size_t i = 0; i + 1 < ub.size(); ++i) {
    REQUIRE(ub.at(i + 1).at("upper").get<double>() < ub.at(i).at("upper").get<double>());
    REQUIRE(ub.at(i).at("upper").get<double>() > golden);
  }
}

TEST_CASE("entropy-bounds in two dimensions starts at the one-row bound") {
  const CliRun r = run_cli("entropy-bounds --model hard_core --d 2 --n-max 2");
  REQUIRE(r.exit_code == 0);
  const Json& res = r.out.at("result");
  REQUIRE(!res.contains("exact"));
  const Json& ub = res.at("upper_bounds");
  REQUIRE(ub.size() == 2);
  REQUIRE(ub.at(0).at("upper").get<double>() ==
          Catch::Approx(std::log(63.0) / 9.0).margin(1e-14));
  REQUIRE(ub.at(1).at("upper").get<double>() < ub.at(0).at("upper").get<double>());
}

TEST_CASE("pressure brackets the hard square constant") {
  const CliRun r = run_cli("pressure --model hard_core --epsilon 0.05 --n-max 6");
  REQUIRE(r.exit_code == 0);
  const Json& res = r.out.at("result");
  REQUIRE(res.at("converged") == true);
  const double lower = res.at("lower").get<double>();
  const double upper = res.at("upper").get<double>();
  REQUIRE(lower <= 0.4074951);
  REQUIRE(upper >= 0.4074951);
  REQUIRE(upper - lower <= 0.05);
  const Json& trace = res.at("trace");
  REQUIRE(!trace.empty());
  REQUIRE(trace.back().at("n") == res.at("n"));
  REQUIRE(r.out.at("assumptions") ==
          Json::array({"tssm gap 2 via ssf", "local implies global via ssf",
                       "full support via D-condition"}));
}

TEST_CASE("periodic tries constant cells first") {
  const CliRun hc = run_cli("periodic --model hard_core --periods 2 2");
  REQUIRE(hc.exit_code == 0);
  REQUIRE(hc.out.at("result").at("found") == true);
  REQUIRE(hc.out.at("result").at("point").at("cell").at("letters") ==
          Json::array({"0", "0", "0", "0"}));

  const CliRun cb = run_cli("periodic --model checkerboard --k 2 --periods 2 2");
  REQUIRE(cb.exit_code == 0);
  REQUIRE(cb.out.at("result").at("point").at("cell").at("letters") ==
          Json::array({"0", "1", "1", "0"}));
}

TEST_CASE("pivot connects two rows one site at a time") {
  const CliRun r = run_cli(
      R"(pivot --model hard_core --from '{"sites":[[0,0],[1,0],[2,0]],"letters":["0","0","0"]}')"
      R"( --to '{"sites":[[0,0],[1,0],[2,0]],"letters":["1","0","1"]}' --gap 2)");
  REQUIRE(r.exit_code == 0);
  const Json& res = r.out.at("result");
  REQUIRE(res.at("admissible_endpoints") == true);
  REQUIRE(res.at("steps") == 2);
  const Json& seq = res.at("sequence");
  REQUIRE(seq.size() == 3);
  REQUIRE(seq.at(0).at("letters") == Json::array({"0", "0", "0"}));
  REQUIRE(seq.at(1).at("letters") == Json::array({"1", "0", "0"}));
  REQUIRE(seq.at(2).at("letters") == Json::array({"1", "0", "1"}));
}

TEST_CASE("ssm-profile fits an exponential rate") {
  const CliRun r = run_cli(
      "ssm-profile --model hard_core --d 1 --geometry interval --n-min 1 --n-max 4 --target 0");
  REQUIRE(r.exit_code == 0);
  const Json& res = r.out.at("result");
  REQUIRE(res.at("distances") == Json::array({2, 3, 4, 5}));
  const Json& disc = res.at("max_discrepancy");
  REQUIRE(disc.size() == 4);
  REQUIRE(disc.at(0).get<double>() == Catch::Approx(0.3).margin(1e-12));
  for (size_t i = 0; i + 1 < disc.size(); ++i) {
    REQUIRE(disc.at(i + 1).get<double>() < disc.at(i).get<double>());
  }
  REQUIRE(res.at("fit").at("alpha").get<double>() > 0.5);
}

TEST_CASE("rate-bounds reports the published threshold exactly") {
  const CliRun hi = run_cli("rate-bounds --g 1 --lambda 9217");
  REQUIRE(hi.exit_code == 0);
  const Json& res = hi.out.at("result");
  REQUIRE(res.at("guaranteed") == true);
  REQUIRE(res.at("lambda_pub") == "21760664753063325144711168");
  REQUIRE(res.at("beta").get<double>() < 1.0);
  REQUIRE(res.at("alpha").get<double>() > 0.0);
  REQUIRE(std::isfinite(res.at("C").get<double>()));

  const CliRun lo = run_cli("rate-bounds --g 1 --lambda 9216");
  REQUIRE(lo.exit_code == 0);
  REQUIRE(lo.out.at("result").at("guaranteed") == false);
  REQUIRE(lo.out.at("result").at("beta").get<double>() == 1.0);
}

TEST_CASE("offenders lists the minimal inadmissible patterns") {
  const CliRun r = run_cli("offenders --model hard_core --diameter 2");
  REQUIRE(r.exit_code == 0);
  const Json& res = r.out.at("result");
  REQUIRE(res.at("count") == 2);
  const Json& off = res.at("offenders");
  REQUIRE(off.at(0).at("sites") == Json::array({Json::array({0, 0}), Json::array({0, 1})}));
  REQUIRE(off.at(0).at("letters") == Json::array({"1", "1"}));
  REQUIRE(off.at(1).at("sites") == Json::array({Json::array({0, 0}), Json::array({1, 0})}));
  REQUIRE(off.at(1).at("letters") == Json::array({"1", "1"}));
}

TEST_CASE("repeated runs agree on everything except timing") {
  const std::string cmd =
      "tssm-search --model checkerboard --k 4 --gap 6 --si-gap 6 --strategy stripes";
  CliRun a = run_cli(cmd);
  CliRun b = run_cli(cmd);
  REQUIRE(a.exit_code == b.exit_code);
  a.out.erase("seconds");
  b.out.erase("seconds");
  REQUIRE(a.out == b.out);
}
