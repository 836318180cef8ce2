#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ybx/rational_r.hpp"
#include "ybx/verification.hpp"

using namespace ybx;

static std::mt19937_64 rng(7741);
static Rat rrand() {
    std::uniform_int_distribution<int> num(-17, 17), den(1, 17);
    return Rat(num(rng), den(rng));
}

namespace {

struct Entry {
    int i, j;
    Rat coeff;
    int pow;  // power of z (for Z) or of d (for D)
};

// expected block operator: entries coeff * op^pow on the shared inner space
BlockOp<Rat> expected_block(int outer, const LinOp<Rat>& op, const std::vector<Entry>& es) {
    BlockOp<Rat> B(outer, op.domain, op.codomain);
    for (const auto& e : es) {
        LinOp<Rat> p = LinOp<Rat>::identity(op.domain);
        for (int t = 0; t < e.pow; ++t) p = op * p;
        B.block(e.i, e.j) = e.coeff * p;
    }
    return B;
}

bool blocks_match(const BlockOp<Rat>& a, const BlockOp<Rat>& b) {
    return a.flatten().equal_untainted(b.flatten());
}

}  // namespace

TEST_CASE("sl2 generators and commutation relations") {
    auto basis = BasisDescriptor::monomial(7);
    Rat ell(5, 3);
    auto g = sl2_generators<Rat>(ell, basis);
    // S 1 = -l (lowest vector)
    CHECK(g.S.at(0, 0) == -ell);
    // [S+, S-] = 2S and [S, S+-] = +-S+- on untainted columns
    auto two_s = Rat(2) * g.S;
    CHECK((g.Sp * g.Sm - g.Sm * g.Sp).equal_untainted(two_s));
    CHECK((g.S * g.Sp - g.Sp * g.S).equal_untainted(g.Sp));
    CHECK((g.S * g.Sm - g.Sm * g.S).equal_untainted(Rat(-1) * g.Sm));
    // at 2l = m the finite block decouples: S+ z^m = 0 exactly, no taint
    auto fin = sl2_generators<Rat>(Rat(3, 2), BasisDescriptor::monomial(3));
    CHECK(fin.Sp.col_taint[3] == 0);
    for (int r = 0; r < 4; ++r) CHECK(fin.Sp.at(r, 3) == Rat(0));
}

TEST_CASE("printed Z and D instances") {
    auto inner = BasisDescriptor::monomial(10);
    auto z = mult_by_coordinate<Rat>(inner);
    auto d = derivative<Rat>(inner);

    CHECK(blocks_match(build_Z(1, z), expected_block(2, z, {{0, 0, Rat(1), 0},
                                                            {1, 0, Rat(1), 1},
                                                            {1, 1, Rat(1), 0}})));
    CHECK(blocks_match(build_Z(2, z), expected_block(3, z, {{0, 0, Rat(1), 0},
                                                            {1, 0, Rat(2), 1},
                                                            {1, 1, Rat(1), 0},
                                                            {2, 0, Rat(1), 2},
                                                            {2, 1, Rat(1), 1},
                                                            {2, 2, Rat(1), 0}})));
    CHECK(blocks_match(build_Z(3, z),
                       expected_block(4, z, {{0, 0, Rat(1), 0},
                                             {1, 0, Rat(3), 1}, {1, 1, Rat(1), 0},
                                             {2, 0, Rat(3), 2}, {2, 1, Rat(2), 1}, {2, 2, Rat(1), 0},
                                             {3, 0, Rat(1), 3}, {3, 1, Rat(1), 2}, {3, 2, Rat(1), 1},
                                             {3, 3, Rat(1), 0}})));
    CHECK(blocks_match(build_Z(4, z),
                       expected_block(5, z, {{0, 0, Rat(1), 0},
                                             {1, 0, Rat(4), 1}, {1, 1, Rat(1), 0},
                                             {2, 0, Rat(6), 2}, {2, 1, Rat(3), 1}, {2, 2, Rat(1), 0},
                                             {3, 0, Rat(4), 3}, {3, 1, Rat(3), 2}, {3, 2, Rat(2), 1},
                                             {3, 3, Rat(1), 0},
                                             {4, 0, Rat(1), 4}, {4, 1, Rat(1), 3}, {4, 2, Rat(1), 2},
                                             {4, 3, Rat(1), 1}, {4, 4, Rat(1), 0}})));

    CHECK(blocks_match(build_Dmat(1, d), expected_block(2, d, {{0, 0, Rat(1), 0},
                                                               {0, 1, Rat(1), 1},
                                                               {1, 1, Rat(1), 0}})));
    CHECK(blocks_match(build_Dmat(2, d), expected_block(3, d, {{0, 0, Rat(1), 0},
                                                               {0, 1, Rat(1), 1},
                                                               {0, 2, Rat(1), 2},
                                                               {1, 1, Rat(1), 0},
                                                               {1, 2, Rat(2), 1},
                                                               {2, 2, Rat(1), 0}})));
    CHECK(blocks_match(build_Dmat(3, d),
                       expected_block(4, d, {{0, 0, Rat(1), 0}, {0, 1, Rat(1), 1},
                                             {0, 2, Rat(1), 2}, {0, 3, Rat(1), 3},
                                             {1, 1, Rat(1), 0}, {1, 2, Rat(2), 1}, {1, 3, Rat(3), 2},
                                             {2, 2, Rat(1), 0}, {2, 3, Rat(3), 1},
                                             {3, 3, Rat(1), 0}})));
    CHECK(blocks_match(build_Dmat(4, d),
                       expected_block(5, d, {{0, 0, Rat(1), 0}, {0, 1, Rat(1), 1},
                                             {0, 2, Rat(1), 2}, {0, 3, Rat(1), 3}, {0, 4, Rat(1), 4},
                                             {1, 1, Rat(1), 0}, {1, 2, Rat(2), 1}, {1, 3, Rat(3), 2},
                                             {1, 4, Rat(4), 3},
                                             {2, 2, Rat(1), 0}, {2, 3, Rat(3), 1}, {2, 4, Rat(6), 2},
                                             {3, 3, Rat(1), 0}, {3, 4, Rat(4), 1},
                                             {4, 4, Rat(1), 0}})));
}

TEST_CASE("printed U+ and U- instances") {
    // U+_{(1)} = diag(1, u-1, u(u-1)); U-_{(1)} reversed; k = n+1 entry of U- is 1
    for (int trial = 0; trial < 4; ++trial) {
        Rat u = rrand();
        auto dm = uminus_eigenvalues(2, u);
        CHECK(dm[0] == u * (u - Rat(1)));
        CHECK(dm[1] == u - Rat(1));
        CHECK(dm[2] == Rat(1));
        auto d1 = uminus_eigenvalues(1, u);
        CHECK(d1[0] == u);
        CHECK(d1[1] == Rat(1));
        auto d3 = uminus_eigenvalues(3, u);
        CHECK(d3[0] == u * (u - Rat(1)) * (u - Rat(2)));
        CHECK(d3[1] == (u - Rat(1)) * (u - Rat(2)));
        CHECK(d3[2] == u - Rat(2));
        CHECK(d3[3] == Rat(1));
        auto d4 = uminus_eigenvalues(4, u);
        CHECK(d4[0] == u * (u - Rat(1)) * (u - Rat(2)) * (u - Rat(3)));
        CHECK(d4[4] == Rat(1));
        // U+ = C U- C: reversed order
        auto inner = BasisDescriptor::monomial(2);
        auto Up = build_Uplus(2, u, inner);
        CHECK(Up.block(0, 0).at(0, 0) == Rat(1));
        CHECK(Up.block(1, 1).at(0, 0) == u - Rat(1));
        CHECK(Up.block(2, 2).at(0, 0) == u * (u - Rat(1)));
    }
}

TEST_CASE("operator route building blocks") {
    // C1 is an involution
    for (int n = 1; n <= 4; ++n) {
        auto C = flip_c1<Rat>(n);
        CHECK((C * C).max_abs_diff_untainted(LinOp<Rat>::identity(C.domain)) == 0.0);
    }
    // exp(z d1) (z1 - x)^n = (z1 + z - x)^n: compare coefficient vectors in the
    // tensor basis at rational x, exact
    for (int n = 1; n <= 3; ++n) {
        int N2 = 6;
        auto inner = BasisDescriptor::monomial(N2);
        auto E = exp_mixed_d1(n, mult_by_coordinate<Rat>(inner), false);
        Rat x(3, 7);
        std::vector<Rat> v(size_t(n + 1) * (N2 + 1), Rat(0));
        for (int i = 0; i <= n; ++i)  // (z1-x)^n = sum_i binom(n,i) (-x)^i z1^{n-i}
            v[size_t(i) * (N2 + 1) + 0] = binomial<Rat>(n, i) * rat_ipow(-x, i);
        auto w = E.apply(v);
        // expect sum_k binom(n,k) z1^k (z-x)^{n-k}: e_{i+1} = z1^{n-i}
        for (int i = 0; i <= n; ++i)
            for (int t = 0; t <= N2; ++t) {
                Rat expect(0);
                int k = n - i;
                if (t <= n - k)
                    expect = binomial<Rat>(n, k) * binomial<Rat>(n - k, t) *
                             rat_ipow(-x, n - k - t);
                CHECK(w[size_t(i) * (N2 + 1) + t] == expect);
            }
    }
}

TEST_CASE("n = 1 equals the Lax operator") {
    Rat u(4, 3), ell(5, 2);
    RationalSpinPair pair = RationalSpinPair::generic_pair(1, ell, 6);
    auto R = build_R_factorized(pair, u);
    auto inner = BasisDescriptor::monomial(pair.carrier_degree());
    auto g = sl2_generators<Rat>(ell, inner);
    auto uid = LinOp<Rat>::scalar(inner, u);
    // [[u + S, S-], [S+, u - S]]
    CHECK(R.block(0, 0).equal_untainted(uid + g.S));
    CHECK(R.block(0, 1).equal_untainted(g.Sm));
    CHECK(R.block(1, 0).equal_untainted(g.Sp));
    CHECK(R.block(1, 1).equal_untainted(uid - g.S));

    // the printed five-factor product with u1 = u - l - 1, u2 = u + l
    auto z = mult_by_coordinate<Rat>(inner);
    auto d = derivative<Rat>(inner);
    auto id = LinOp<Rat>::identity(inner);
    Rat u1 = u - ell - Rat(1), u2 = u + ell;
    BlockOp<Rat> F1(2, inner, inner), F2(2, inner, inner), F3(2, inner, inner),
        F4(2, inner, inner), F5(2, inner, inner);
    F1.block(0, 0) = id; F1.block(1, 0) = Rat(-1) * z; F1.block(1, 1) = id;
    F2.block(0, 0) = id; F2.block(1, 1) = u2 * id;
    F3.block(0, 0) = id; F3.block(0, 1) = d; F3.block(1, 1) = id;
    F4.block(0, 0) = u1 * id; F4.block(1, 1) = id;
    F5.block(0, 0) = id; F5.block(1, 0) = z; F5.block(1, 1) = id;
    auto lax = F1 * F2 * F3 * F4 * F5;
    CHECK(blocks_match(R, lax));
}

TEST_CASE("n = 2 equals the printed five-factor product") {
    Rat u(-2, 5), ell(7, 4);
    RationalSpinPair pair = RationalSpinPair::generic_pair(2, ell, 6);
    auto R = build_R_factorized(pair, u);
    auto inner = BasisDescriptor::monomial(pair.carrier_degree());
    auto z = mult_by_coordinate<Rat>(inner);
    auto d = derivative<Rat>(inner);
    auto id = LinOp<Rat>::identity(inner);
    Rat u1 = u - ell - Rat(1), u2 = u + ell;

    BlockOp<Rat> F1(3, inner, inner);
    F1.block(0, 0) = id;
    F1.block(1, 0) = Rat(-2) * z; F1.block(1, 1) = id;
    F1.block(2, 0) = z * z; F1.block(2, 1) = Rat(-1) * z; F1.block(2, 2) = id;
    BlockOp<Rat> F2(3, inner, inner);
    F2.block(0, 0) = id;
    F2.block(1, 1) = (u2 - Rat(1)) * id;
    F2.block(2, 2) = (u2 * (u2 - Rat(1))) * id;
    BlockOp<Rat> F3(3, inner, inner);
    F3.block(0, 0) = id; F3.block(0, 1) = d; F3.block(0, 2) = d * d;
    F3.block(1, 1) = id; F3.block(1, 2) = Rat(2) * d;
    F3.block(2, 2) = id;
    BlockOp<Rat> F4(3, inner, inner);
    F4.block(0, 0) = (u1 * (u1 - Rat(1))) * id;
    F4.block(1, 1) = (u1 - Rat(1)) * id;
    F4.block(2, 2) = id;
    BlockOp<Rat> F5(3, inner, inner);
    F5.block(0, 0) = id;
    F5.block(1, 0) = Rat(2) * z; F5.block(1, 1) = id;
    F5.block(2, 0) = z * z; F5.block(2, 1) = z; F5.block(2, 2) = id;

    CHECK(blocks_match(R, F1 * F2 * F3 * F4 * F5));
}

TEST_CASE("oracle route reproduces the Lax action") {
    // R e_2 = e_1 d + e_2 (u + l - z d) at n = 1
    Rat u(9, 7), ell(1, 3);
    RationalSpinPair pair = RationalSpinPair::generic_pair(1, ell, 6);
    auto R = build_R_oracle(pair, u);
    auto inner = BasisDescriptor::monomial(pair.carrier_degree());
    auto g = sl2_generators<Rat>(ell, inner);
    auto uid = LinOp<Rat>::scalar(inner, u);
    CHECK(R.block(0, 1).equal_untainted(g.Sm));
    CHECK(R.block(1, 1).equal_untainted(uid + ell * LinOp<Rat>::identity(inner) -
                                        (mult_by_coordinate<Rat>(inner) *
                                         derivative<Rat>(inner))));
    // k = p = 0 term: unit coefficient on (z-x)^n Phi; visible as R_{n+1,1}
    // column acting by u-independent... spot-check full equality instead
    CHECK(blocks_match(R, build_R_factorized(pair, u)));
}

TEST_CASE("three-route equality, spot checks") {
    for (int n = 1; n <= 3; ++n) {
        for (int trial = 0; trial < 2; ++trial) {
            Rat u = rrand();
            RationalSpinPair fin = RationalSpinPair::finite_pair(n, 2);
            auto a = build_R_factorized(fin, u);
            auto b = build_R_oracle(fin, u);
            auto c = build_R_operator_path(fin, u);
            CHECK(routes_equal(a, b, fin));
            CHECK(routes_equal(b, c, fin));
            RationalSpinPair gen = RationalSpinPair::generic_pair(n, Rat(5, 2), 6);
            auto ga = build_R_factorized(gen, u);
            auto gb = build_R_oracle(gen, u);
            auto gc = build_R_operator_path(gen, u);
            CHECK(routes_equal(ga, gb, gen));
            CHECK(routes_equal(gb, gc, gen));
        }
    }
}

TEST_CASE("restriction to finite x finite") {
    Rat u(3, 2);
    auto R = restrict_second(1, 1, u);
    CHECK(R.rows() == 4);
    // basis order [z1*z, z1*1, 1*z, 1*1]; entry on e_2 (x) z is u - 1/2:
    // (u - S) z = (u - 1/2) z at l = 1/2
    CHECK(R.at(2, 2) == u - Rat(1, 2));
    // e_1 (x) z diagonal entry: (u + S) z = (u + 1/2) z
    CHECK(R.at(0, 0) == u + Rat(1, 2));
    // S- maps z -> 1: block (0,1) of LaxNonFact; flat entry (e1 (x) 1, e2 (x) z)
    CHECK(R.at(1, 2) == Rat(1));
}

TEST_CASE("sl2 invariance of the restricted operator") {
    for (auto [n, m] : std::vector<std::pair<int, int>>{{1, 1}, {1, 2}, {2, 2}}) {
        Rat u = rrand();
        auto R = restrict_second(n, m, u);
        auto g1 = finite_sl2_descending<Rat>(n + 1);
        auto g2 = finite_sl2_descending<Rat>(m + 1);
        std::vector<CoproductPair<Rat>> gens;
        for (int a = 0; a < 3; ++a) gens.push_back({g1[a], g2[a], false, "S"});
        auto rep = commutant_residual(R, gens, 0.0, "rational invariance");
        CHECK(rep.exact_zero);
    }
}

TEST_CASE("rational Yang-Baxter equation is exact") {
    auto builder = [](int n, int m, Rat u_phys) {
        Rat u_b = SpectralConvention<Rat>::physical_to_builder(u_phys, n);
        return restrict_second(n, m, u_b);
    };
    for (auto [n, m, k] : std::vector<std::array<int, 3>>{{1, 1, 1}, {1, 2, 1}, {2, 2, 2}}) {
        Rat u = rrand(), v = rrand();
        auto R12 = builder(n, m, u - v);
        auto R13 = builder(n, k, u);
        auto R23 = builder(m, k, v);
        auto rep = ybe_residual(R12, R13, R23, n + 1, m + 1, k + 1, 0.0, "rational");
        CHECK(rep.exact_zero);
    }
}

TEST_CASE("key identity numeric check") {
    std::vector<std::array<double, 3>> pts = {{0.25, 0.5, 1.125}, {0.1, 0.7, 1.4}};
    std::vector<std::vector<double>> phis = {{1.0}, {0.0, 1.0}, {0.5, -1.0, 2.0}};
    for (int n = 1; n <= 3; ++n) {
        auto res = verify_key_identity(n, 1.0 / 3.0, 0.8, pts, phis);
        INFO("n=" << n << " max_abs=" << res.max_abs << " scale=" << res.scale);
        CHECK(res.max_abs < 1e-10 * std::max(1.0, res.scale));
    }
    // Phi = 0 gives 0 = 0; branch guard rejects bad ordering
    auto zero = verify_key_identity(1, 0.5, 0.3, pts, {{0.0}});
    CHECK(zero.max_abs == 0.0);
    CHECK_THROWS_AS(verify_key_identity(1, 0.5, 0.3, {{0.5, 0.25, 1.0}}, phis), BranchGuard);
}
