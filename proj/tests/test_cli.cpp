// End-to-end checks of the command-line interface: exact output for the
// documented requests, byte-identical reruns, exit codes.

#include <doctest.h>

#include <array>
#include <cstdio>
#include <string>

namespace {

struct RunResult {
    int code;
    std::string out;
};

RunResult run(const std::string& args) {
    std::string cmd = std::string(CMK3_BIN) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf;
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

}  // namespace

TEST_CASE("k3-exists on the conductor-51 field: exact verdict and exit code") {
    RunResult r = run("k3-exists --conductor 51 --subgroup 16");
    CHECK(r.code == 1);
    CHECK(r.out ==
          "{\"verdict\":\"none\",\"reason\":\"ramified prime 3 with f=8 > 6\","
          "\"offending_primes\":[3]}\n");
}

TEST_CASE("picard on the Kondo surface") {
    RunResult r = run("picard --cyclotomic 44 --N 1");
    CHECK(r.code == 0);
    CHECK(r.out == "{\"picard\":\"U(1)\",\"N\":\"1\",\"note\":\"Kondo\"}\n");
}

TEST_CASE("craig lattice via --a reproduces det 343") {
    RunResult r = run("lattice --craig --p 7 --a 3");
    CHECK(r.code == 0);
    CHECK(r.out.find("\"det\":\"343\"") != std::string::npos);
    CHECK(r.out.find("\"gram\":") != std::string::npos);
}

TEST_CASE("byte-identical output for identical requests") {
    for (const char* args :
         {"disc-enumerate --cyclotomic 7 --norm-bound 2000", "surface --p 7 --a 1 --J 13:0",
          "witt --lambda --p 11 --a 3", "field --cyclotomic 44"}) {
        RunResult a = run(args);
        RunResult b = run(args);
        CHECK(a.code == b.code);
        CHECK(a.out == b.out);
        CHECK(!a.out.empty());
    }
}

TEST_CASE("usage errors exit 2, mathematical failures exit 1") {
    CHECK(run("no-such-command").code > 0);
    CHECK(run("splits --cyclotomic 7").code == 2);         // missing --p
    CHECK(run("picard --cyclotomic 44").code == 2);        // need --N or --det
    CHECK(run("picard --cyclotomic 44 --N 43").code == 1); // not realizable
    CHECK(run("glue --p 7 --a 1").code == 0);
}
