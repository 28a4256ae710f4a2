#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "xxz/cli.hpp"

using namespace xxz;
using nlohmann::json;

namespace {

std::string temp_dir(const std::string& name) {
    const auto d = std::filesystem::temp_directory_path() / ("xxz_cli_" + name);
    std::filesystem::remove_all(d);
    return d.string();
}

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("config round trip") {
    RunConfig c;
    c.chain.N = 4;
    c.chain.J = 0.5;
    c.X = {cplx(0.1, 0.0)};
    c.seeds = {cplx(0.0, 3.5)};
    c.trotter_limit = true;
    const RunConfig d = RunConfig::from_json(c.to_json());
    CHECK(d.to_json() == c.to_json());
}

TEST_CASE("config errors") {
    CHECK_THROWS_AS(RunConfig::from_json(json{{"bogus", 1}}), Error);
    CHECK_THROWS_AS(RunConfig::from_json(json{{"trotter", "big"}}), Error);
    RunConfig c;
    c.format = "xml";
    CHECK_THROWS_AS(c.validate(), Error);
    std::ostringstream log, err;
    CHECK(cmd_spectrum(c, log, err) == kExitConfigError);
    CHECK(json::parse(err.str())["code"] == "ConfigError");
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), Error);
}

TEST_CASE("complex json helpers") {
    CHECK(cplx_json(cplx(1.5, -2.0)) == json::array({1.5, -2.0}));
    CHECK(cplx_json(infinite_root(-1))[0] == "-inf");
    CHECK(std::isinf(json_cplx(json::array({"inf", 0.0})).real()));
    CHECK(json_cplx(json(0.25)) == cplx(0.25, 0.0));
}

TEST_CASE("spectrum command is reproducible") {
    RunConfig c;
    c.chain.N = 3;
    c.chain.T = 20;
    c.out = temp_dir("spectrum");
    std::ostringstream log, err;
    REQUIRE(cmd_spectrum(c, log, err) == kExitOk);
    const std::string first = slurp(c.out + "/spectrum.json");
    REQUIRE(cmd_spectrum(c, log, err) == kExitOk);
    CHECK(first == slurp(c.out + "/spectrum.json"));
    c.format = "csv";
    REQUIRE(cmd_spectrum(c, log, err) == kExitOk);
    CHECK(std::filesystem::exists(c.out + "/spectrum.csv"));
}

TEST_CASE("hlbae command") {
    RunConfig c;
    c.chain.J = 0.5;
    c.chain.N = 5;
    c.seeds = {cplx(-1.140806e-3, 0.575835), cplx(-1.140806e-3, -0.575835)};
    c.X = {-2.979061e-3, 7.029353e-4};
    c.out = temp_dir("hlbae");
    std::ostringstream log, err;
    REQUIRE(cmd_hlbae(c, log, err) == kExitOk);
    const json j = json::parse(slurp(c.out + "/hlbae.json"));
    CHECK(j["hlbae1"]["y"].size() == 2);
    CHECK(std::abs(json_cplx(j["hlbae2"]["y"][0]).imag()) == doctest::Approx(0.577224).epsilon(1e-5));
}

TEST_CASE("free-energy and nlie commands") {
    RunConfig c;
    c.chain.T = 1e4;
    c.trotter_limit = true;
    c.out = temp_dir("fe");
    std::ostringstream log, err;
    REQUIRE(cmd_free_energy(c, log, err) == kExitOk);
    const json j = json::parse(slurp(c.out + "/free_energy.json"));
    CHECK(j["r"].get<double>() < 1e-6);
    c.trotter_limit = false;
    c.chain.N = 3;
    c.chain.T = 100;
    REQUIRE(cmd_nlie(c, log, err) == kExitOk);
    CHECK(std::filesystem::exists(c.out + "/nlie.json"));
}

TEST_CASE("table 6 diff report passes") {
    const json paper = load_paper_values();
    std::ostringstream log;
    const TableReport rep = run_table(6, paper, 1, log);
    CHECK(rep.entries.size() == 12);
    CHECK(rep.all_pass());
    CHECK(rep.to_json()["all_pass"] == true);
}

TEST_CASE("a perturbed paper value is reported as a mismatch") {
    json paper = load_paper_values();
    paper["table6"]["states"][0]["hlbae1"][0] = json::array({0.0, 3.49});
    std::ostringstream log;
    const TableReport rep = run_table(6, paper, 1, log);
    CHECK_FALSE(rep.all_pass());
    CHECK(rep.entries[0].status == "fail");
}
