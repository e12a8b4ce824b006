#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "fracbvp/config.hpp"
#include "fracbvp/errors.hpp"

using namespace fracbvp;
using nlohmann::json;

namespace {

const std::string kTmp = FRACBVP_TEST_TMPDIR;
const std::string kCli = FRACBVP_CLI_PATH;

int run_cli(const std::string& args) {
    const std::string cmd = kCli + " " + args + " >" + kTmp + "/cli_stdout.txt 2>" + kTmp +
                            "/cli_stderr.txt";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kDefaultConfig = R"({
  "beta": 0.3,
  "theta": 0.5,
  "K": {"kind": "constant", "value": 1.0},
  "f": {"kind": "constant", "value": 1.0},
  "mesh": {"n": 16, "grading": "uniform"},
  "method": "petrov"
})";

}  // namespace

TEST_CASE("config parsing: round trip through the canonical echo") {
    const json j = json::parse(kDefaultConfig);
    const ProblemConfig a = parse_config_json(j);
    const json echo1 = config_echo(a);
    const ProblemConfig b = parse_config_json(echo1);
    const json echo2 = config_echo(b);
    CHECK(echo1 == echo2);
    CHECK(a.beta == b.beta);
    CHECK(a.mesh.n == b.mesh.n);
}

TEST_CASE("config parsing: precise error locations") {
    json j = json::parse(kDefaultConfig);
    j["beta"] = 1.7;
    CHECK_THROWS_WITH_AS(parse_config_json(j), "/beta: beta must lie in (0,1)", ConfigError);
    j["beta"] = 0.7;  // petrov needs < 1/2
    CHECK_THROWS_AS(parse_config_json(j), ConfigError);
    j["beta"] = 0.3;
    j["K"] = json{{"kind", "weird"}};
    CHECK_THROWS_AS(parse_config_json(j), ConfigError);
    j = json::parse(kDefaultConfig);
    j["mesh"]["n"] = 1;
    CHECK_THROWS_AS(parse_config_json(j), ConfigError);
}

TEST_CASE("manufactured configs derive their source at parse time") {
    json j = json::parse(kDefaultConfig);
    j["f"] = json{{"kind", "manufactured"}, {"u_exact", {0.0, 1.0, -1.0}}};
    const ProblemConfig c = parse_config_json(j);
    CHECK(c.u_exact.has_value());
    CHECK(!c.f.empty());
}

TEST_CASE("cli: verify passes by default and fails under fault injection") {
    write_file(kTmp + "/verify.json", kDefaultConfig);
    CHECK(run_cli("verify --config " + kTmp + "/verify.json --out " + kTmp) == 0);
    CHECK(run_cli("verify --config " + kTmp + "/verify.json --out " + kTmp +
                  " --inject-gamma-fault 1e-6") == 1);
    const json rep = json::parse(read_file(kTmp + "/verify_report.json"));
    CHECK(rep["all_pass"] == false);
    CHECK(rep.contains("input_hash"));
    CHECK(rep["version"] == "0.1.0");
}

TEST_CASE("cli: malformed and invalid configs exit with 2") {
    write_file(kTmp + "/broken.json", "{ not json");
    CHECK(run_cli("verify --config " + kTmp + "/broken.json --out " + kTmp) == 2);
    write_file(kTmp + "/beta_big.json", R"({"beta": 0.7, "method": "petrov"})");
    CHECK(run_cli("solve --config " + kTmp + "/beta_big.json --out " + kTmp) == 2);
    CHECK(run_cli("solve --config " + kTmp + "/missing_file.json --out " + kTmp) == 2);
}

TEST_CASE("cli: solve writes deterministic outputs and the indicator") {
    write_file(kTmp + "/solve.json", kDefaultConfig);
    CHECK(run_cli("solve --config " + kTmp + "/solve.json --out " + kTmp) == 0);
    const std::string csv1 = read_file(kTmp + "/solution.csv");
    CHECK(csv1.rfind("x,u,Iu\r\n", 0) == 0);
    const json rep = json::parse(read_file(kTmp + "/solve_report.json"));
    CHECK(rep["wellposedness"]["xi"].get<double>() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(rep["wellposedness"]["verdict"] == "wellposed");

    CHECK(run_cli("solve --config " + kTmp + "/solve.json --out " + kTmp) == 0);
    CHECK(read_file(kTmp + "/solution.csv") == csv1);
}

TEST_CASE("cli: galerkin solve flags a coercivity certificate coefficient") {
    json j = json::parse(kDefaultConfig);
    j["method"] = "galerkin";
    j["beta"] = 0.5;
    j["theta"] = 0.25;  // the certificate below was constructed for this weight
    j["K"] = json{{"kind", "piecewise_constant"},
                  {"breaks", {0.2067, 0.25}},
                  {"values", {0.015625, 1.0, 0.015625}}};
    write_file(kTmp + "/cert_k.json", j.dump());
    CHECK(run_cli("solve --config " + kTmp + "/cert_k.json --out " + kTmp) == 0);
    const json rep = json::parse(read_file(kTmp + "/solve_report.json"));
    CHECK(rep["coercivity_certificate_exists"] == true);
}

TEST_CASE("cli: counterexample writes a negative certificate") {
    CHECK(run_cli("counterexample --beta 0.5 --theta 0.25 --out " + kTmp) == 0);
    const json cert = json::parse(read_file(kTmp + "/certificate.json"));
    CHECK(cert["B_ww"].get<double>() < 0.0);
    CHECK(cert["delta"].get<double>() > 0.0);
    CHECK(cert["K"]["kind"] == "piecewise_constant");
    CHECK(run_cli("counterexample --beta 1.5 --theta 0.25 --out " + kTmp) == 2);
}

TEST_CASE("cli: wellposed exit codes") {
    write_file(kTmp + "/wp.json", kDefaultConfig);
    CHECK(run_cli("wellposed --config " + kTmp + "/wp.json --out " + kTmp) == 0);
    const json rep = json::parse(read_file(kTmp + "/wellposed_report.json"));
    CHECK(rep["wellposedness"]["xi"].get<double>() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("cli: converge emits the table and the orders file") {
    json j = json::parse(kDefaultConfig);
    j["method"] = "galerkin";
    j["beta"] = 0.5;
    j["f"] = json{{"kind", "manufactured"}, {"u_exact", {0.0, 1.0, -1.0}}};
    j["n_list"] = {8, 16, 32, 64};
    write_file(kTmp + "/conv.json", j.dump());
    CHECK(run_cli("converge --config " + kTmp + "/conv.json --out " + kTmp) == 0);
    const std::string csv = read_file(kTmp + "/convergence.csv");
    CHECK(csv.rfind("n,h,err_l2,err_energy,order\r\n", 0) == 0);
    const json rep = json::parse(read_file(kTmp + "/converge_report.json"));
    const double last_order = rep["rows"].back()["order_energy"].get<double>();
    CHECK(last_order >= 1.0);
    CHECK(last_order <= 1.5);

    // determinism of the emitted table
    CHECK(run_cli("converge --config " + kTmp + "/conv.json --out " + kTmp) == 0);
    CHECK(read_file(kTmp + "/convergence.csv") == csv);
}
