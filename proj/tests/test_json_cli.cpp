#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "ybx/json_io.hpp"
#include "ybx/rational_r.hpp"
#include "ybx/trig_r.hpp"

using namespace ybx;

TEST_CASE("rational matrix JSON round trip is bit exact") {
    Rat u(22, 7);
    auto R = restrict_second(2, 1, u);
    MatrixMeta meta{"rational", {2, 1}, "22/7", SpectralConvention<Rat>::description()};
    json j = matrix_to_json(R, meta);
    CHECK(j["field"] == "rational");
    CHECK(j["rows"] == 6);
    auto back = matrix_from_json<Rat>(j);
    REQUIRE(back.rows() == R.rows());
    for (int r = 0; r < R.rows(); ++r)
        for (int c = 0; c < R.cols(); ++c) CHECK(back.at(r, c) == R.at(r, c));
    // canonical strings: lowest terms, positive denominator
    CHECK(Rat::parse("-6/-8").str() == "3/4");
}

TEST_CASE("complex matrix JSON round trip") {
    ModularParams par;
    auto R = restrict_second_trig(1, 1, Cplx(0.23, 0.11), par);
    MatrixMeta meta{"trig", {1, 1}, "0.23,0.11", trig_shift_description()};
    json j = matrix_to_json(R, meta);
    auto back = matrix_from_json<Cplx>(j);
    for (int r = 0; r < R.rows(); ++r)
        for (int c = 0; c < R.cols(); ++c) CHECK(back.at(r, c) == R.at(r, c));
    // field tag mismatch is rejected
    CHECK_THROWS_AS(matrix_from_json<Rat>(j), ConfigError);
}

TEST_CASE("operator-valued emission carries the space-2 basis inline") {
    RationalSpinPair pair = RationalSpinPair::generic_pair(1, Rat(5, 2), 4);
    auto R = build_R_factorized(pair, Rat(1, 3));
    MatrixMeta meta{"rational", {1, -1}, "1/3", SpectralConvention<Rat>::description()};
    json j = blockop_to_json(R, meta);
    CHECK(j["rows"] == 2);
    CHECK(j["basis2"].size() == size_t(pair.carrier_degree() + 1));
    CHECK(j["basis2"][0] == "z^0");
    // entry (0,0) is a matrix; its (0,0) element is the scalar part of u + S
    CHECK(j["entries"][0][0].is_array());
}

TEST_CASE("report serialization round trip") {
    ResidualReport r;
    r.name = "x/y";
    r.max_abs = 1.25e-11;
    r.relative = 2.5e-12;
    r.passed = true;
    r.exact_zero = false;
    r.context = "ctx";
    r.runtime_ms = 12.5;
    json j = reports_to_json({r}, 99, {"conv-a"});
    CHECK(j["seed"] == 99);
    auto back = report_from_json(j["reports"][0]);
    CHECK(back.name == r.name);
    CHECK(back.max_abs == r.max_abs);
    CHECK(back.relative == r.relative);
    CHECK(back.passed == r.passed);
    CHECK(back.runtime_ms == r.runtime_ms);
}

#ifdef YBX_CLI_PATH
static int run_cli(const std::string& args) {
    std::string cmd = std::string(YBX_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

TEST_CASE("CLI exit codes") {
    CHECK(run_cli("build --model rational --n 1 --m 1 --u 3/2") == 0);
    CHECK(run_cli("build --model nosuch --u 1") == 2);
    CHECK(run_cli("build --model rational --mode float --n 1 --m 1 --u 1/2") == 2);
    CHECK(run_cli("verify --suite ybe --model rational") == 0);
    CHECK(run_cli("build --model trig --factor M --m 2 --u 0.3") == 0);
    CHECK(run_cli("build --model elliptic --factor V --n 1 --u 0.2") == 0);
    CHECK(run_cli("build --model trig --m 1 --m2 1 --u 0.2,0.1") == 0);
    CHECK(run_cli("build --model elliptic --n 1 --n2 1 --u 0.15,0.05") == 0);
    CHECK(run_cli("build --model rational --n 1 --ell 5/2 --u 1/3") == 0);
}

TEST_CASE("CLI key=value config file, flags win") {
    std::string cfg = "/tmp/ybx_test_cfg.ini";
    {
        std::ofstream f(cfg);
        f << "# comment\nsuite=ybe\nmodel=rational\nseed=4242\n";
    }
    std::string out = "/tmp/ybx_test_cfg_rep.json";
    REQUIRE(run_cli("verify --config " + cfg + " --out " + out) == 0);
    {
        std::ifstream f(out);
        json j;
        f >> j;
        CHECK(j["seed"] == 4242);
        REQUIRE(j["reports"].size() == 1);
        CHECK(j["reports"][0]["name"] == "rational/ybe");
    }
    REQUIRE(run_cli("verify --config " + cfg + " --seed 77 --out " + out) == 0);
    {
        std::ifstream f(out);
        json j;
        f >> j;
        CHECK(j["seed"] == 77);
    }
    CHECK(run_cli("verify --config /tmp/ybx_no_such_file.ini") == 2);
    std::remove(cfg.c_str());
    std::remove(out.c_str());
}

TEST_CASE("CLI emitted rational matrix reloads bit-identically") {
    std::string path = "/tmp/ybx_cli_roundtrip.json";
    REQUIRE(run_cli("build --model rational --n 1 --m 1 --u 3/2 --out " + path) == 0);
    std::ifstream f(path);
    REQUIRE(f.good());
    json j;
    f >> j;
    auto m = matrix_from_json<Rat>(j);
    auto direct = restrict_second(1, 1, Rat(3, 2));
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) CHECK(m.at(r, c) == direct.at(r, c));
    std::remove(path.c_str());
}
#endif
