#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "cyclo/cli.hpp"

using namespace cyclo;

namespace {
struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}
}  // namespace

TEST_CASE("irregular command") {
    auto r = run_cli({"irregular", "--range", "5:7"});
    CHECK(r.code == 0);
    CHECK(r.out == "p=5 u=2 i_p=0 indices=[] minus=[]\np=7 u=3 i_p=0 indices=[] minus=[]\n");

    auto r37 = run_cli({"irregular", "--range", "37:37", "--format", "csv"});
    CHECK(r37.code == 0);
    CHECK(r37.out == "p,i_p,indices,minus_eigenvalues\n37,1,32,32\n");

    auto empty = run_cli({"irregular", "--range", "4:4"});
    CHECK(empty.code == 0);
    CHECK(empty.out.empty());

    CHECK(run_cli({"irregular", "--range", "5:99999"}).code == 2);  // cap
    CHECK(run_cli({"irregular", "--range", "9:5"}).code == 2);      // lo > hi
    CHECK(run_cli({"irregular"}).code == 2);                        // missing option
}

TEST_CASE("irregular json output is deterministic") {
    const std::vector<std::string> args{"irregular", "--range", "31:37", "--format", "json",
                                        "--seed", "7"};
    auto a = run_cli(args);
    auto b = run_cli(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("\"schema\": 1") != std::string::npos);
    CHECK(a.out.find("\"seed\": 7") != std::string::npos);
    CHECK(a.out.find("\"irregular_indices\": [\n        32\n      ]") != std::string::npos);
}

TEST_CASE("annihilator command") {
    // mu = 2 equals the primitive root of 13, so the exploration needs the
    // exclusion toggle; the rank laws themselves hold for any M
    auto ok = run_cli({"annihilator", "--prime", "13", "--mu", "2,6", "--split", "3:4",
                       "--no-exclusions"});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("r1=2") != std::string::npos);
    CHECK(ok.out.find("split d=3 g=4: r_d=1 r_g=2") != std::string::npos);
    CHECK(ok.out.find("all inequalities hold") != std::string::npos);

    auto ok2 = run_cli({"annihilator", "--prime", "13", "--mu", "6,7"});
    CHECK(ok2.code == 0);

    auto rej = run_cli({"annihilator", "--prime", "7", "--mu", "3"});
    CHECK(rej.code == 3);
    CHECK(rej.err.find("mu-equals-u") != std::string::npos);

    auto rej1 = run_cli({"annihilator", "--prime", "13", "--mu", "1"});
    CHECK(rej1.code == 3);
    CHECK(rej1.err.find("mu-equals-one") != std::string::npos);

    auto noex = run_cli({"annihilator", "--prime", "13", "--mu", "1", "--no-exclusions"});
    CHECK(noex.code == 0);

    // splitting preconditions: coprimality and divisor violations are usage errors
    CHECK(run_cli({"annihilator", "--prime", "13", "--mu", "6", "--split", "2:6"}).code == 2);
    CHECK(run_cli({"annihilator", "--prime", "13", "--mu", "6", "--split", "5:4"}).code == 2);
}

TEST_CASE("singular command") {
    auto ok = run_cli({"singular", "--prime", "11", "--m", "3", "--gamma", "1"});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("v=7 exact") != std::string::npos);
    CHECK(ok.out.find("not primary") != std::string::npos);
    CHECK(ok.out.find("agreement: ok") != std::string::npos);
    CHECK(ok.out.find("11 2\n") != std::string::npos);  // serialized candidate

    auto triv = run_cli({"singular", "--prime", "11", "--m", "3", "--gamma", "0"});
    CHECK(triv.code == 0);
    CHECK(triv.out.find("singular primary") != std::string::npos);

    CHECK(run_cli({"singular", "--prime", "11", "--m", "1"}).code == 2);
    CHECK(run_cli({"singular", "--prime", "12", "--m", "3"}).code == 2);
}

TEST_CASE("units command") {
    auto r7 = run_cli({"units", "--prime", "7"});
    CHECK(r7.code == 0);
    CHECK(r7.out.find("rho1=0 primary={} bounds=pass ok") != std::string::npos);

    auto r37 = run_cli({"units", "--prime", "37", "--format", "csv"});
    CHECK(r37.code == 0);
    CHECK(r37.out.find("37,32,") != std::string::npos);
    CHECK(r37.out.find(",1\n") != std::string::npos);  // a primary row

    CHECK(run_cli({"units", "--prime", "9"}).code == 2);
}

TEST_CASE("verify command") {
    auto ok = run_cli({"verify", "--range", "5:13", "--suites", "annihilator,bernoulli"});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("all suites passed") != std::string::npos);

    auto fault = run_cli({"verify", "--range", "5:5", "--suites", "lambda", "--inject-fault"});
    CHECK(fault.code == 1);
    CHECK(fault.out.find("counterexample") != std::string::npos);
    CHECK(fault.out.find("5 2\n") != std::string::npos);  // serialized element

    auto empty = run_cli({"verify", "--range", "24:28"});
    CHECK(empty.code == 0);
    CHECK(empty.out.find("(0 checks)") != std::string::npos);

    CHECK(run_cli({"verify", "--range", "5:7", "--suites", "nope"}).code == 2);
}

TEST_CASE("output file and precision flag") {
    const std::string path = "cli_test_output.tmp";
    auto r = run_cli({"irregular", "--range", "5:5", "--out", path});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    CHECK(ss.str() == "p=5 u=2 i_p=0 indices=[] minus=[]\n");
    std::remove(path.c_str());

    CHECK(run_cli({"units", "--prime", "7", "--precision", "9"}).code == 2);
    CHECK(run_cli({"units", "--prime", "7", "--precision", "3"}).code == 0);
}

TEST_CASE("verify json summary is machine readable") {
    auto r = run_cli({"verify", "--range", "5:7", "--suites", "bernoulli", "--format", "json"});
    CHECK(r.code == 0);
    CHECK(r.out.find("\"schema\": 1") != std::string::npos);
    CHECK(r.out.find("\"suite\": \"bernoulli\"") != std::string::npos);
    CHECK(r.out.find("\"pass\": true") != std::string::npos);
}

TEST_CASE("environment variable sets the default precision") {
    setenv("CYCLOLAB_PRECISION", "9", 1);
    CHECK(run_cli({"units", "--prime", "7"}).code == 2);  // out of [2, 8]
    setenv("CYCLOLAB_PRECISION", "3", 1);
    auto r = run_cli({"units", "--prime", "7"});
    CHECK(r.code == 0);
    CHECK(r.out.find("precision=3") != std::string::npos);
    unsetenv("CYCLOLAB_PRECISION");
}

TEST_CASE("reports are identical regardless of worker count") {
    const std::vector<std::string> base{"verify", "--range", "5:31", "--seed", "11",
                                        "--suites", "bernoulli,singular", "--format", "json"};
    auto one = base, four = base;
    one.insert(one.end(), {"--jobs", "1"});
    four.insert(four.end(), {"--jobs", "4"});
    const auto a = run_cli(one), b = run_cli(four);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("help exits zero") {
    auto r = run_cli({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("cyclolab") != std::string::npos);
}
