#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ybx/operator_space.hpp"

using namespace ybx;

static std::mt19937_64 rng(991);
static Cplx crand() {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    return Cplx(d(rng), d(rng));
}
static LinOp<Cplx> random_op(const BasisDescriptor& dom, const BasisDescriptor& cod) {
    LinOp<Cplx> m(dom, cod);
    for (auto& x : m.a) x = crand();
    return m;
}

TEST_CASE("monomial coordinate and derivative") {
    auto b = BasisDescriptor::monomial(5);
    auto z = mult_by_coordinate<Rat>(b);
    auto d = derivative<Rat>(b);
    CHECK(z.at(1, 0) == Rat(1));          // z^0 -> z^1
    CHECK(z.col_taint[5] == 1);           // z^N -> 0, flagged
    for (int r = 0; r < 6; ++r) CHECK(z.at(r, 5) == Rat(0));
    CHECK(d.at(1, 2) == Rat(2));          // d z^2 = 2 z
    for (int r = 0; r < 6; ++r) CHECK(d.at(r, 0) == Rat(0));  // d 1 = 0
    // canonical commutator [d, z] = 1 on untainted columns
    auto comm = d * z - z * d;
    auto id = LinOp<Rat>::identity(b);
    CHECK(comm.equal_untainted(id));
    CHECK(comm.col_taint[5] == 1);
    // sub-diagonal of ones pattern
    for (int k = 0; k < 5; ++k) CHECK(z.at(k + 1, k) == Rat(1));
}

TEST_CASE("laurent operators") {
    ModularParams par;
    auto b = BasisDescriptor::laurent(4, Parity::Both);
    CHECK(b.dim == 9);
    auto s0 = laurent_shift(0, b, par);
    CHECK(s0.equal_untainted(LinOp<Cplx>::identity(b)));
    auto s1 = laurent_shift(1, b, par);
    int i0 = b.index_of_label(0), i2 = b.index_of_label(2);
    CHECK(std::abs(s1.at(i0, i0) - Cplx(1.0, 0.0)) < 1e-15);  // X^0 eigenvalue 1
    CHECK(std::abs(s1.at(i2, i2) - par.q) < 1e-15);           // q^{c j/2} at j=2,c=1
    // shifts compose additively in phase (up to rounding at large |q^{j/2}|)
    auto s2 = laurent_shift(2, b, par), s3 = laurent_shift(3, b, par);
    CHECK((s1 * s2 - s3).max_abs() < 1e-14 * s3.max_abs());

    auto m2 = laurent_mult(2, b), mm2 = laurent_mult(-2, b);
    auto round = mm2 * m2;
    CHECK(round.equal_untainted(LinOp<Cplx>::identity(b)));
    CHECK(m2.col_taint[b.index_of_label(4)] == 1);   // leaves the window
    CHECK(m2.col_taint[b.index_of_label(3)] == 1);
    CHECK(m2.col_taint[b.index_of_label(2)] == 0);
    CHECK(laurent_mult(0, b).equal_untainted(LinOp<Cplx>::identity(b)));

    // parity-restricted window
    auto be = BasisDescriptor::laurent(5, Parity::Even);
    CHECK(be.dim == 5);
    CHECK(be.labels.front() == 4);
    CHECK(be.labels.back() == -4);
    auto bo = BasisDescriptor::laurent(5, Parity::Odd);
    CHECK(bo.dim == 6);
    CHECK(bo.labels.front() == 5);
}

TEST_CASE("tensor and kronecker identity") {
    auto b2 = BasisDescriptor::monomial(1), b3 = BasisDescriptor::monomial(2);
    auto A = random_op(b2, b2), C = random_op(b2, b2);
    auto B = random_op(b3, b3), D = random_op(b3, b3);
    // (A (x) B)(C (x) D) = AC (x) BD
    auto lhs = tensor(A, B) * tensor(C, D);
    auto rhs = tensor(A * C, B * D);
    CHECK((lhs - rhs).max_abs() < 1e-13);
}

TEST_CASE("permutation operator") {
    auto P = permutation<Rat>(3);
    auto P2 = P * P;
    CHECK(P2.max_abs_diff_untainted(LinOp<Rat>::identity(P.domain)) == 0.0);
    // P(e1 (x) e2) = e2 (x) e1
    std::vector<Rat> v(9, Rat(0));
    v[0 * 3 + 1] = Rat(1);
    auto w = P.apply(v);
    CHECK(w[1 * 3 + 0] == Rat(1));
    // trace = d (count of fixed pairs)
    Rat tr(0);
    for (int i = 0; i < 9; ++i) tr += P.at(i, i);
    CHECK(tr == Rat(3));
}

TEST_CASE("embed_pair") {
    int d1 = 2, d2 = 3, d3 = 2;
    auto id12 = LinOp<Cplx>::identity(BasisDescriptor::monomial(d1 * d2 - 1));
    auto e = embed_pair(id12, d1, d2, d3, 12);
    CHECK((e - LinOp<Cplx>::identity(e.domain)).max_abs() == 0.0);

    // embedded diagonal operators on disjoint pairs commute
    auto diag = [&](int da, int db, double seed) {
        LinOp<Cplx> m(BasisDescriptor::monomial(da * db - 1),
                      BasisDescriptor::monomial(da * db - 1));
        for (int i = 0; i < da * db; ++i) m.at(i, i) = Cplx(seed + i, 0.3 * i);
        return m;
    };
    auto e13 = embed_pair(diag(d1, d3, 1.7), d1, d2, d3, 13);
    auto e23 = embed_pair(diag(d2, d3, -0.4), d1, d2, d3, 23);
    CHECK((e13 * e23 - e23 * e13).max_abs() < 1e-14);

    // Kronecker consistency: embed_pair(A (x) B, 12) == A (x) B (x) I
    auto A = random_op(BasisDescriptor::monomial(d1 - 1), BasisDescriptor::monomial(d1 - 1));
    auto B = random_op(BasisDescriptor::monomial(d2 - 1), BasisDescriptor::monomial(d2 - 1));
    auto AB = tensor(A, B);
    AB.domain = id12.domain;
    AB.codomain = id12.domain;
    auto lhs = embed_pair(AB, d1, d2, d3, 12);
    auto rhs = tensor(tensor(A, B), LinOp<Cplx>::identity(BasisDescriptor::monomial(d3 - 1)));
    double m = 0.0;
    for (size_t t = 0; t < lhs.a.size(); ++t) m = std::max(m, std::abs(lhs.a[t] - rhs.a[t]));
    CHECK(m < 1e-14);
}

TEST_CASE("block operator flatten round trip") {
    auto inner = BasisDescriptor::monomial(2);
    BlockOp<Cplx> B(2, inner, inner);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) B.block(i, j) = random_op(inner, inner);
    auto flat = B.flatten();
    auto back = BlockOp<Cplx>::from_flat(flat, 2, inner, inner);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK((B.block(i, j) - back.block(i, j)).max_abs() == 0.0);
}

TEST_CASE("unitriangular inverse") {
    auto inner = BasisDescriptor::monomial(6);
    auto z = mult_by_coordinate<Rat>(inner);
    BlockOp<Rat> Z(3, inner, inner);
    for (int i = 0; i < 3; ++i) Z.block(i, i) = LinOp<Rat>::identity(inner);
    Z.block(1, 0) = Rat(2) * z;
    Z.block(2, 0) = z * z;
    Z.block(2, 1) = z;
    auto Zi = invert_unitriangular(Z);
    auto prod = (Zi * Z).flatten();
    auto id = BlockOp<Rat>::identity(3, inner).flatten();
    CHECK(prod.equal_untainted(id));
}

TEST_CASE("taint propagation through compose") {
    auto b = BasisDescriptor::monomial(3);
    auto z = mult_by_coordinate<Rat>(b);
    auto d = derivative<Rat>(b);
    auto zd = z * d;   // untainted on column 3: d lowers first
    CHECK(zd.col_taint[3] == 0);
    auto dz = d * z;   // z truncates column 3 before d acts
    CHECK(dz.col_taint[3] == 1);
    CHECK(dz.col_taint[2] == 0);
}

TEST_CASE("collocation fit") {
    // polynomial basis fit: exact recovery of a member, flagged non-member
    CollocationGrid g;
    for (int s = 0; s <= 3; ++s) g.points.push_back(Cplx(0.1 + 0.17 * s, 0.05 * s));
    g.validation.push_back(Cplx(0.9, 0.21));
    g.validation.push_back(Cplx(1.1, -0.13));
    auto basis = [](int j, Cplx zz) { return ipow(zz, j); };
    auto member = [](Cplx zz) { return 2.0 * zz * zz - Cplx(0, 1) * zz + 3.0; };
    auto fit = collocation_fit(basis, 4, member, g);
    CHECK(fit.residual < 1e-12);
    CHECK(std::abs(fit.coeffs[2] - Cplx(2.0, 0.0)) < 1e-12);
    auto nonmember = [](Cplx zz) { return std::exp(3.0 * zz); };
    auto bad = collocation_fit(basis, 4, nonmember, g);
    CHECK(bad.residual > 1e-3);
    // condition guard
    CollocationGrid gbad = g;
    gbad.points[1] = gbad.points[0];
    CHECK_THROWS_AS(collocation_fit(basis, 4, member, gbad), IllConditioned);
}
