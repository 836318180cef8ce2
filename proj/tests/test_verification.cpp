#include <catch2/catch_amalgamated.hpp>

#include "ybx/suite.hpp"

using namespace ybx;

namespace {
LinOp<Cplx> small(const std::vector<Cplx>& entries, int d) {
    auto b = BasisDescriptor::monomial(d - 1);
    LinOp<Cplx> m(b, b);
    m.a = entries;
    return m;
}
}  // namespace

TEST_CASE("ybe_residual basics") {
    auto b = BasisDescriptor::monomial(3);  // 4 = 2*2, pair dims (2,2)
    auto id = LinOp<Cplx>::identity(b);
    auto rep = ybe_residual(id, id, id, 2, 2, 2, 1e-12, "identity");
    CHECK(rep.passed);
    CHECK(rep.max_abs == 0.0);

    // a nontrivial solution: the rational 4x4 restricted matrix
    Rat u(3, 7), v(-2, 5);
    auto build = [](int n, int m, Rat w) {
        return restrict_second(n, m, SpectralConvention<Rat>::physical_to_builder(w, n));
    };
    auto R12 = build(1, 1, u - v);
    auto R13 = build(1, 1, u);
    auto R23 = build(1, 1, v);
    auto base = ybe_residual(R12, R13, R23, 2, 2, 2, 0.0, "");
    CHECK(base.exact_zero);
    // scaling one factor leaves both sides identical (each R appears once per side)
    auto scaled = Rat(7) * R13;
    auto rep2 = ybe_residual(R12, scaled, R23, 2, 2, 2, 0.0, "");
    CHECK(rep2.exact_zero);
    // sides are symmetric: swapping LHS and RHS gives the same max_abs
    auto repA = ybe_residual(R12, R13, R23, 2, 2, 2, 0.0, "");
    auto repB = ybe_residual(R23, R13, R12, 2, 2, 2, 0.0, "");  // reversed roles
    CHECK(repA.max_abs == repB.max_abs);
}

TEST_CASE("equal_up_to_scalar") {
    auto A = small({Cplx(1, 2), Cplx(0.5, 0), Cplx(-1, 1), Cplx(2, -1)}, 2);
    auto threeA = Cplx(3, 0) * A;
    CHECK(equal_up_to_scalar(A, threeA, 1e-12, "").passed);
    // perturbation of one entry shows up as ~ eps / |pivot|
    auto P = A;
    P.at(0, 0) += Cplx(1e-6, 0);
    auto rep = equal_up_to_scalar(P, A, 1e-12, "");
    CHECK(!rep.passed);
    CHECK(rep.relative > 1e-7);
    CHECK(rep.relative < 1e-5);
    // symmetric verdict at doubled tolerance
    auto r1 = equal_up_to_scalar(P, A, 2e-6, "");
    auto r2 = equal_up_to_scalar(A, P, 2e-6, "");
    CHECK(r1.passed == r2.passed);

    auto Z = small({Cplx(0, 0), Cplx(0, 0), Cplx(0, 0), Cplx(0, 0)}, 2);
    CHECK_THROWS_AS(equal_up_to_scalar(A, Z, 1e-12, ""), ZeroMatrix);

    // exact mode: exact ratio of pivot entries
    auto b = BasisDescriptor::monomial(1);
    LinOp<Rat> RA(b, b);
    RA.at(0, 0) = Rat(2, 3);
    RA.at(1, 1) = Rat(-5, 7);
    auto RB = Rat(9, 4) * RA;
    CHECK(equal_up_to_scalar(RA, RB, 0.0, "").exact_zero);
}

TEST_CASE("pivot tie-break is the lowest flat index") {
    auto A = small({Cplx(2, 0), Cplx(-2, 0), Cplx(0, 2), Cplx(1, 0)}, 2);
    CHECK(pivot_index(A) == 0);
}

TEST_CASE("commutant_residual") {
    auto b = BasisDescriptor::monomial(1);
    auto id4 = LinOp<Cplx>::identity(BasisDescriptor::monomial(3));
    std::vector<CoproductPair<Cplx>> gens = {
        {small({Cplx(1, 0), Cplx(0, 0), Cplx(0, 0), Cplx(-1, 0)}, 2),
         small({Cplx(1, 0), Cplx(0, 0), Cplx(0, 0), Cplx(-1, 0)}, 2), false, "S3"}};
    auto rep = commutant_residual(id4, gens, 1e-12, "");
    CHECK(rep.passed);
    CHECK(rep.max_abs == 0.0);
    // shape mismatch
    std::vector<CoproductPair<Cplx>> bad = {
        {LinOp<Cplx>::identity(BasisDescriptor::monomial(2)),
         LinOp<Cplx>::identity(BasisDescriptor::monomial(2)), false, "bad"}};
    CHECK_THROWS_AS(commutant_residual(id4, bad, 1e-12, ""), DimensionMismatch);
}

TEST_CASE("run_suite determinism and filtering") {
    SuiteConfig cfg;
    cfg.suite = "identities";
    cfg.seed = 424242;
    auto a = run_suite(cfg);
    auto b = run_suite(cfg);
    REQUIRE(a.size() == b.size());
    CHECK(a.size() >= 3);
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].name == b[i].name);
        CHECK(a[i].max_abs == b[i].max_abs);  // bitwise reproducible
        CHECK(a[i].passed);
    }
    // empty model selection yields the model-independent checks only
    SuiteConfig none = cfg;
    none.models.clear();
    auto c = run_suite(none);
    for (const auto& r : c) CHECK(r.name.rfind("special/", 0) == 0);
    // suite filter
    SuiteConfig ybe_only;
    ybe_only.suite = "ybe";
    ybe_only.models = {"rational"};
    auto d = run_suite(ybe_only);
    REQUIRE(d.size() == 1);
    CHECK(d[0].name == "rational/ybe");
    CHECK(d[0].exact_zero);
}

TEST_CASE("guard failures surface as failed reports, not exceptions") {
    SuiteConfig cfg;
    cfg.suite = "algebra";
    cfg.models = {"elliptic"};
    cfg.eta = Cplx(0.5, 0.0);  // theta_2(eta) = 0: structure constants undefined
    std::vector<ResidualReport> reps;
    REQUIRE_NOTHROW(reps = run_suite(cfg));
    REQUIRE(!reps.empty());
    for (const auto& r : reps) {
        CHECK(!r.passed);
        CHECK(r.context.rfind("aborted:", 0) == 0);
    }
}
