#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

RunResult run_cli(const std::string& args) {
    const char* bin = std::getenv("CBU_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "CBU_BIN must point at the cbu binary");
    std::string err_path = "cli_stderr.txt";
    std::string cmd = std::string(bin) + " " + args + " 2>" + err_path;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = slurp(err_path);
    std::remove(err_path.c_str());
    return r;
}

}  // namespace

TEST_CASE("exit codes: pass, verification failure, usage") {
    CHECK(run_cli("cut --a 1 --b 1").exit_code == 0);

    RunResult not_free = run_cli("cut --a 2 --b 4");
    CHECK(not_free.exit_code == 1);
    CHECK(not_free.err.find("action not free") != std::string::npos);

    RunResult small = run_cli("cut --a 3 --b 1 --radius 1.5");
    CHECK(small.exit_code == 1);
    CHECK(small.err.find("tube too small") != std::string::npos);

    CHECK(run_cli("no-such-command").exit_code == 2);
    CHECK(run_cli("cut --b 1").exit_code == 2);  // missing required --a
    CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("model dump matches the golden text") {
    RunResult r = run_cli("model dump");
    CHECK(r.exit_code == 0);
    const std::string golden =
        "tube model: n = 2, r in (0.02, 2)\n"
        "coordinates: theta r rho phi1 phi2\n"
        "alpha_std = (form 1 ((phi1) (^ (cos rho) 2)) ((phi2) (^ (sin rho) 2)))\n"
        "eta       = (form 1 ((theta) 1) ((phi1) (neg (* (^ r 2) (^ (cos rho) 2)))) "
        "((phi2) (neg (* (^ r 2) (^ (sin rho) 2)))))\n"
        "lambda    = (form 1 ((theta) (^ r 2)) ((phi1) (^ (cos rho) 2)) "
        "((phi2) (^ (sin rho) 2)))\n"
        "xi_1 rep  = (form 1 ((theta) (+ (neg (^ r -2)) 1)) ((phi1) (^ (cos rho) 2)) "
        "((phi2) (^ (sin rho) 2)))\n"
        "contact(eta): yes, margin 1.2389066512299428e-05, sign -1\n"
        "contact(lambda): yes, margin 0.002265085151772477, sign +1\n"
        "reeb(eta) = d/dtheta: verified\n";
    CHECK(r.out == golden);
}

TEST_CASE("fixed command line and seed give byte-identical output") {
    const std::string args = "cut --a 2 --b 3 --seed 99 --report cli_report.json";
    RunResult first = run_cli(args);
    std::string first_report = slurp("cli_report.json");
    RunResult second = run_cli(args);
    std::string second_report = slurp("cli_report.json");
    std::remove("cli_report.json");

    CHECK(first.exit_code == 0);
    CHECK(second.exit_code == 0);
    CHECK(first.out == second.out);
    CHECK(first_report == second_report);
    // the stdout report and the --report file are the same document
    CHECK(first.out == first_report);
    CHECK(first_report.find("\"seed\": 99") != std::string::npos);
    CHECK(first_report.find("\"all_pass\": true") != std::string::npos);

    RunResult compare1 = run_cli("uniq compare --a 1 --b 2");
    RunResult compare2 = run_cli("uniq compare --a 1 --b 2");
    CHECK(compare1.exit_code == 0);
    CHECK(compare1.out == compare2.out);
}

TEST_CASE("cut prints its descriptor as JSON") {
    RunResult r = run_cli("cut --a 2 --b 3");
    CHECK(r.exit_code == 0);
    nlohmann::json doc = nlohmann::json::parse(r.out);
    CHECK(doc["schema"] == 1);
    CHECK(doc["data"]["feasible"] == true);
    CHECK(std::abs(double(doc["data"]["zero_radius"]) - std::sqrt(2.0 / 3.0)) < 1e-12);
    CHECK(doc["data"]["divisor_lens_order"] == 2);
    CHECK(doc["data"]["quotient_curvature"] == nlohmann::json::array({3, 2}));
    CHECK(doc["data"]["moment_map"].get<std::string>().find("r") != std::string::npos);
    CHECK(doc["all_pass"] == true);
    bool saw_radial = false;
    for (const auto& check : doc["checks"]) {
        if (check["name"] == "radial presentation") {
            saw_radial = true;
            CHECK(check["pass"] == true);
            CHECK(double(check["value"]) > 0);
        }
    }
    CHECK(saw_radial);
}

TEST_CASE("surgery profile CSV: header, LF endings, monotone H") {
    RunResult r = run_cli("blowup surgery --l 1 --emit-profile cli_profile.csv");
    CHECK(r.exit_code == 0);
    std::string csv = slurp("cli_profile.csv");
    std::remove("cli_profile.csv");

    CHECK(csv.find('\r') == std::string::npos);
    CHECK(csv.rfind("r,H,dH_dr\n", 0) == 0);

    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);  // header
    int rows = 0;
    double prev_h = -1;
    bool monotone = true;
    while (std::getline(lines, line)) {
        double rr, h, hp;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf", &rr, &h, &hp) == 3);
        monotone = monotone && h > prev_h;
        prev_h = h;
        ++rows;
    }
    CHECK(rows == 1024);
    CHECK(monotone);
}

TEST_CASE("bw product prints curvature and exactness as JSON, rejects non-free weights") {
    RunResult ok = run_cli("bw product --a 2 --b 3");
    CHECK(ok.exit_code == 0);
    nlohmann::json doc = nlohmann::json::parse(ok.out);
    CHECK(doc["data"]["curvature"] == nlohmann::json::array({3, 2}));
    CHECK(doc["data"]["sequence_first"] == nlohmann::json::array({2, -3}));
    CHECK(doc["data"]["sequence_second"] == nlohmann::json::array({3, 2}));
    CHECK(doc["data"]["label"] == "S_(3,2)(W1 x W2)");
    CHECK(doc["checks"][0]["name"] == "sequence exact");
    CHECK(doc["checks"][0]["pass"] == true);
    CHECK(doc["all_pass"] == true);

    RunResult bad = run_cli("bw product --a 2 --b 4");
    CHECK(bad.exit_code == 1);
    CHECK(bad.err.find("action not free") != std::string::npos);
}

TEST_CASE("uniq path subcommand") {
    RunResult ok = run_cli("uniq path --a 1 --b 2 --lhs surgery --rhs cut");
    CHECK(ok.exit_code == 0);
    CHECK(ok.out.find("all 33 grid points pass") != std::string::npos);

    RunResult bad = run_cli("uniq path --a 2 --b 1 --lhs surgery --rhs cut");
    CHECK(bad.exit_code == 1);
    CHECK(bad.err.find("surgery presentation needs a = 1") != std::string::npos);

    RunResult margins = run_cli("uniq path --a 3 --b 1 --lhs gromov --rhs cut "
                                "--emit cli_margins.csv");
    CHECK(margins.exit_code == 0);
    std::string csv = slurp("cli_margins.csv");
    std::remove("cli_margins.csv");
    CHECK(csv.rfind("t,slope_margin\n", 0) == 0);
}

TEST_CASE("verify-all passes and reports every criterion") {
    RunResult r = run_cli("verify-all");
    CHECK(r.exit_code == 0);
    for (int i = 1; i <= 10; ++i) {
        std::string label = "criterion " + std::string(i < 10 ? " " : "") + std::to_string(i);
        CHECK(r.out.find("PASS " + label) != std::string::npos);
    }
    CHECK(r.out.find("all criteria pass") != std::string::npos);
    // timings stay off stdout so output is reproducible
    CHECK(r.out.find("wall time") == std::string::npos);
    CHECK(r.err.find("wall time") != std::string::npos);
}
