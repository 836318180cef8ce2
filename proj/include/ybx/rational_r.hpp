// sl2 case: the restricted R-operator built along three independent routes
// (matrix factorization, double-sum expansion, operator composition on the
// tensor space), plus generators, the restriction to finite x finite, and the
// numeric check of the generating identity.
//
// Conventions: the builders take the spectral parameter of the factorization
// formula, i.e. they represent R(u - n/2 | n/2, l) with u1 = u - l - 1 and
// u2 = u + l. The Yang-Baxter harness undoes the shift via physical_to_builder.
// Space-1 basis: e_j = z1^{n+1-j} (descending degree). Space-2 carrier:
// ascending monomials z^0..z^N2 with N2 = (input degree) + 2n so that no
// intermediate of any route truncates below the comparison window.
#pragma once

#include <array>

#include "operator_space.hpp"

namespace ybx {

struct RationalSpinPair {
    int n = 1;            // first spin 2s = n
    bool finite = true;   // second space finite (dimension m+1) or generic
    int m = 1;            // finite mode
    Rat ell = Rat(1, 2);  // generic mode spin
    int trunc_N = 8;      // generic mode comparison degree

    static RationalSpinPair finite_pair(int n, int m) {
        if (n < 0 || m < 0) throw ConfigError("RationalSpinPair: spins must be >= 0");
        RationalSpinPair p;
        p.n = n;
        p.m = m;
        p.finite = true;
        p.ell = Rat(m, 2);
        return p;
    }
    static RationalSpinPair generic_pair(int n, Rat ell, int N) {
        if (n < 0 || N < 0) throw ConfigError("RationalSpinPair: invalid parameters");
        RationalSpinPair p;
        p.n = n;
        p.finite = false;
        p.ell = ell;
        p.trunc_N = N;
        return p;
    }

    int carrier_degree() const { return (finite ? m : trunc_N) + 2 * n; }
    int input_degree() const { return finite ? m : trunc_N; }
};

// u1 = u - l - 1, u2 = u + l and the n/2 shift between the builder parameter
// and the physical spectral parameter of the Yang-Baxter equation.
template <class F>
struct SpectralConvention {
    F u_physical;
    F u1, u2;

    SpectralConvention(const F& u, const F& ell)
        : u_physical(u),
          u1(u - ell - field_traits<F>::one()),
          u2(u + ell) {}

    static F physical_to_builder(const F& u_phys, int n) {
        return u_phys + field_traits<F>::from_int(n) / field_traits<F>::from_int(2);
    }
    static constexpr const char* description() {
        return "builder_u = physical_u + n/2; u1 = u - l - 1, u2 = u + l";
    }
};

// S = z d - l, S- = d, S+ = -z^2 d + 2 l z on the truncated monomial basis.
// Entries come from the closed-form action, so the only truncated column is
// the top degree of S+ (clean when 2 l equals the cutoff: the finite block
// decouples).
template <class F>
struct Sl2Generators {
    LinOp<F> S, Sm, Sp;
};

template <class F>
Sl2Generators<F> sl2_generators(const F& ell, const BasisDescriptor& basis) {
    if (basis.kind != BasisKind::Monomial)
        throw ConfigError("sl2_generators: monomial basis required");
    const int N = basis.dim - 1;
    Sl2Generators<F> g{LinOp<F>(basis, basis), LinOp<F>(basis, basis),
                       LinOp<F>(basis, basis)};
    for (int k = 0; k <= N; ++k) {
        g.S.at(k, k) = field_traits<F>::from_int(k) - ell;
        if (k > 0) g.Sm.at(k - 1, k) = field_traits<F>::from_int(k);
        F top = field_traits<F>::from_int(2) * ell - field_traits<F>::from_int(k);
        if (k < N)
            g.Sp.at(k + 1, k) = top;
        else if (!field_traits<F>::is_zero(top))
            g.Sp.col_taint[k] = 1;
    }
    return g;
}

// (Z)_{ij} = binom(n+1-j, i-j) z^{i-j} for i >= j (1-based), lower triangular.
template <class F>
BlockOp<F> build_Z(int n, const LinOp<F>& z_op) {
    BlockOp<F> Z(n + 1, z_op.domain, z_op.codomain);
    std::vector<LinOp<F>> zpow(n + 1, LinOp<F>::identity(z_op.domain));
    for (int p = 1; p <= n; ++p) zpow[p] = z_op * zpow[p - 1];
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= i; ++j) {
            F c = binomial<F>(n - j, i - j);
            if (!field_traits<F>::is_zero(c)) Z.block(i, j) = c * zpow[i - j];
        }
    return Z;
}

// (D)_{ij} = binom(j-1, j-i) d^{j-i} for j >= i (1-based), upper triangular.
template <class F>
BlockOp<F> build_Dmat(int n, const LinOp<F>& d_op) {
    BlockOp<F> D(n + 1, d_op.domain, d_op.codomain);
    std::vector<LinOp<F>> dpow(n + 1, LinOp<F>::identity(d_op.domain));
    for (int p = 1; p <= n; ++p) dpow[p] = d_op * dpow[p - 1];
    for (int i = 0; i <= n; ++i)
        for (int j = i; j <= n; ++j) {
            F c = binomial<F>(j, j - i);
            if (!field_traits<F>::is_zero(c)) D.block(i, j) = c * dpow[j - i];
        }
    return D;
}

// U-(u) = diag_k prod_{r=k-1}^{n-1} (u - r); U+(u) has the eigenvalues in
// reverse order (U+ = C U- C).
template <class F>
std::vector<F> uminus_eigenvalues(int n, const F& u) {
    std::vector<F> d(n + 1);
    for (int k = 0; k <= n; ++k) {
        F acc = field_traits<F>::one();
        for (int r = k; r <= n - 1; ++r) acc = acc * (u - field_traits<F>::from_int(r));
        d[k] = acc;
    }
    return d;
}

template <class F>
BlockOp<F> build_Uminus(int n, const F& u, const BasisDescriptor& inner) {
    auto d = uminus_eigenvalues(n, u);
    BlockOp<F> U(n + 1, inner, inner);
    for (int k = 0; k <= n; ++k) U.block(k, k) = LinOp<F>::scalar(inner, d[k]);
    return U;
}

template <class F>
BlockOp<F> build_Uplus(int n, const F& u, const BasisDescriptor& inner) {
    auto d = uminus_eigenvalues(n, u);
    BlockOp<F> U(n + 1, inner, inner);
    for (int k = 0; k <= n; ++k) U.block(k, k) = LinOp<F>::scalar(inner, d[n - k]);
    return U;
}

template <class F>
F pair_ell(const RationalSpinPair& pair) {
    return pair.finite
               ? field_traits<F>::from_int(pair.m) / field_traits<F>::from_int(2)
               : from_rat<F>(pair.ell);
}

// Route 1: R = Z^{-1} U+(u2) D U-(u1) Z.
template <class F>
BlockOp<F> build_R_factorized(const RationalSpinPair& pair, const F& u) {
    const int n = pair.n;
    BasisDescriptor inner = BasisDescriptor::monomial(pair.carrier_degree());
    SpectralConvention<F> sc(u, pair_ell<F>(pair));
    BlockOp<F> Z = build_Z<F>(n, mult_by_coordinate<F>(inner));
    BlockOp<F> D = build_Dmat<F>(n, derivative<F>(inner));
    BlockOp<F> Zi = invert_unitriangular(Z);
    return Zi * build_Uplus<F>(n, sc.u2, inner) * D * build_Uminus<F>(n, sc.u1, inner) * Z;
}

// Route 2: the double-sum expansion. Matrix entries are read off by expanding
// the generating function in the auxiliary parameter and the first-space
// coordinate; entry (i, j) (1-based) acts on the second space as
//   sum_{k,p} A_k B_{kp} binom(n-k, j-1) binom(k+p, n+1-i) / binom(n, j-1)
//             * (-1)^{k+p-n-1+i} z^{k+p-n-1+i} d^p z^{n-k-j+1}
// with A_k = binom(n,k) rf(u1+1-n, k), B_{kp} = binom(n-k,p) rf(u2+1-n, n-k-p).
template <class F>
BlockOp<F> build_R_oracle(const RationalSpinPair& pair, const F& u) {
    const int n = pair.n;
    BasisDescriptor inner = BasisDescriptor::monomial(pair.carrier_degree());
    SpectralConvention<F> sc(u, pair_ell<F>(pair));
    LinOp<F> zmul = mult_by_coordinate<F>(inner);
    LinOp<F> dop = derivative<F>(inner);

    std::vector<LinOp<F>> zpow(2 * n + 2, LinOp<F>::identity(inner));
    for (size_t p = 1; p < zpow.size(); ++p) zpow[p] = zmul * zpow[p - 1];
    std::vector<LinOp<F>> dpow(n + 1, LinOp<F>::identity(inner));
    for (int p = 1; p <= n; ++p) dpow[p] = dop * dpow[p - 1];

    F un1 = sc.u1 + field_traits<F>::one() - field_traits<F>::from_int(n);
    F un2 = sc.u2 + field_traits<F>::one() - field_traits<F>::from_int(n);

    BlockOp<F> R(n + 1, inner, inner);
    for (int i1 = 1; i1 <= n + 1; ++i1)
        for (int j1 = 1; j1 <= n + 1; ++j1) {
            LinOp<F> acc = LinOp<F>::zero(inner, inner);
            for (int k = 0; k <= n; ++k) {
                if (j1 - 1 > n - k) continue;
                F Ak = binomial<F>(n, k) * rising_factorial(un1, k);
                for (int p = 0; p <= n - k; ++p) {
                    int zl = k + p - n - 1 + i1;   // left z power
                    int zr = n - k - j1 + 1;       // right z power
                    if (zl < 0 || zr < 0) continue;
                    F c = binomial<F>(n - k, j1 - 1) * binomial<F>(k + p, n + 1 - i1);
                    if (field_traits<F>::is_zero(c)) continue;
                    F Bkp = binomial<F>(n - k, p) * rising_factorial(un2, n - k - p);
                    F coef = Ak * Bkp * c / binomial<F>(n, j1 - 1);
                    if ((k + p - n - 1 + i1) % 2 != 0) coef = -coef;
                    acc = acc + coef * (zpow[zl] * (dpow[p] * zpow[zr]));
                }
            }
            R.block(i1 - 1, j1 - 1) = acc;
        }
    return R;
}

// --- route 3 building blocks (space-1 basis e_{i+1} = z1^{n-i}) ---------------

// z1-derivative matrix on the descending monomial basis.
template <class F>
LinOp<F> space1_derivative(int n) {
    BasisDescriptor outer = BasisDescriptor::monomial(n);
    LinOp<F> d1(outer, outer);
    for (int i = 0; i < n; ++i) d1.at(i + 1, i) = field_traits<F>::from_int(n - i);
    return d1;
}

// The inversion C1: z1^k -> z1^{n-k} (an involution).
template <class F>
LinOp<F> flip_c1(int n) {
    BasisDescriptor outer = BasisDescriptor::monomial(n);
    LinOp<F> C1(outer, outer);
    for (int i = 0; i <= n; ++i) C1.at(n - i, i) = field_traits<F>::one();
    return C1;
}

// Gamma(z1 d1 + u + 1 - n)/Gamma(u + 1 - n): diagonal on z1^k with eigenvalue
// rf(u+1-n, k).
template <class F>
LinOp<F> gamma_ratio_diag(int n, const F& u) {
    BasisDescriptor outer = BasisDescriptor::monomial(n);
    LinOp<F> g(outer, outer);
    F base = u + field_traits<F>::one() - field_traits<F>::from_int(n);
    for (int i = 0; i <= n; ++i) g.at(i, i) = rising_factorial(base, n - i);
    return g;
}

// exp(+- w d1) = sum_r ((+-1)^r/r!) d1^r (x) w^r on the tensor space; the sum
// terminates because d1 is nilpotent on the (n+1)-dimensional first factor.
template <class F>
LinOp<F> exp_mixed_d1(int n, const LinOp<F>& w, bool negate) {
    BasisDescriptor outer = BasisDescriptor::monomial(n);
    LinOp<F> d1 = space1_derivative<F>(n);
    LinOp<F> id2 = LinOp<F>::identity(w.domain);
    LinOp<F> total = tensor(LinOp<F>::identity(outer), id2);
    LinOp<F> d1p = LinOp<F>::identity(outer);
    LinOp<F> wp = id2;
    F fact = field_traits<F>::one();
    for (int r = 1; r <= n; ++r) {
        d1p = d1 * d1p;
        wp = w * wp;
        fact = fact * field_traits<F>::from_int(r);
        F coef = field_traits<F>::one() / fact;
        if (negate && r % 2 == 1) coef = -coef;
        total = total + coef * tensor(d1p, wp);
    }
    return total;
}

// Route 3: the operator composition
//   exp(-z d1) C1 G(u2) exp(d d1) C1 G(u1) exp(z d1)
// on the flattened tensor space.
template <class F>
BlockOp<F> build_R_operator_path(const RationalSpinPair& pair, const F& u) {
    const int n = pair.n;
    BasisDescriptor inner = BasisDescriptor::monomial(pair.carrier_degree());
    SpectralConvention<F> sc(u, pair_ell<F>(pair));

    LinOp<F> id2 = LinOp<F>::identity(inner);
    LinOp<F> zmul = mult_by_coordinate<F>(inner);
    LinOp<F> dop = derivative<F>(inner);
    LinOp<F> C1f = tensor(flip_c1<F>(n), id2);

    LinOp<F> flat = exp_mixed_d1(n, zmul, true) * C1f *
                    tensor(gamma_ratio_diag(n, sc.u2), id2) * exp_mixed_d1(n, dop, false) *
                    C1f * tensor(gamma_ratio_diag(n, sc.u1), id2) *
                    exp_mixed_d1(n, zmul, false);
    return BlockOp<F>::from_flat(flat, n + 1, inner, inner);
}

// Entrywise equality of two routes on every column that neither route
// truncated; also checks that the untainted region covers the pair's input
// degrees, so the comparison is not vacuous.
template <class F>
bool routes_equal(const BlockOp<F>& A, const BlockOp<F>& B, const RationalSpinPair& pair) {
    LinOp<F> fa = A.flatten(), fb = B.flatten();
    if (!fa.equal_untainted(fb)) return false;
    int deg = pair.input_degree();
    int din = A.inner_dom.dim;
    for (int j = 0; j < A.outer_dim; ++j)
        for (int t = 0; t <= deg; ++t)
            if (fa.col_taint[size_t(j) * din + t] || fb.col_taint[size_t(j) * din + t])
                return false;
    return true;
}

// Finite-spin generators on the descending basis [z^{d-1}, ..., z, 1].
template <class F>
std::vector<LinOp<F>> finite_sl2_descending(int d) {
    BasisDescriptor b = BasisDescriptor::monomial(d - 1);
    F ell = field_traits<F>::from_int(d - 1) / field_traits<F>::from_int(2);
    auto g = sl2_generators<F>(ell, b);
    auto reorder = [&](const LinOp<F>& M) {
        LinOp<F> out(b, b);
        int N = d - 1;
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) out.at(r, c) = M.at(N - r, N - c);
        return out;
    };
    return {reorder(g.S), reorder(g.Sm), reorder(g.Sp)};
}

// Restriction to finite x finite at l = m/2: rows above degree m must vanish
// identically; the surviving block is returned on descending bases for both
// factors, flattened with space 1 slowest.
template <class F>
LinOp<F> restrict_second(int n, int m, const F& u) {
    RationalSpinPair pair = RationalSpinPair::finite_pair(n, m);
    BlockOp<F> R = build_R_factorized(pair, u);
    const int d1 = n + 1, d2 = m + 1;
    BasisDescriptor flatb = BasisDescriptor::monomial(d1 * d2 - 1);
    flatb.kind = BasisKind::Tensor;
    flatb.tensor_labels.assign(size_t(d1) * d2, "");
    for (int i = 0; i < d1; ++i)
        for (int a = 0; a < d2; ++a)
            flatb.tensor_labels[size_t(i) * d2 + a] =
                "z1^" + std::to_string(n - i) + "*z^" + std::to_string(m - a);
    LinOp<F> out(flatb, flatb);
    for (int i = 0; i < d1; ++i)
        for (int j = 0; j < d1; ++j) {
            const LinOp<F>& blk = R.block(i, j);
            for (int c = 0; c <= m; ++c) {
                if (blk.col_taint[c])
                    throw InvarianceViolation("restrict_second: truncated column inside block");
                for (int r = m + 1; r < blk.rows(); ++r)
                    if (!field_traits<F>::is_zero(blk.at(r, c)))
                        throw InvarianceViolation(
                            "restrict_second: block does not preserve degree <= m");
            }
            for (int a = 0; a < d2; ++a)
                for (int b = 0; b < d2; ++b)
                    out.at(i * d2 + a, j * d2 + b) = blk.at(m - a, m - b);
        }
    return out;
}

// Numeric check of the generating identity: the factorized route applied to
// (z1 - x)^n Phi(z) against the n-th z-derivative form, at real points
// x < z < z1 (all power bases positive, principal branch safe).
struct KeyIdentityResult {
    double max_abs = 0.0;
    double scale = 0.0;
};

inline KeyIdentityResult verify_key_identity(int n, double ell, double u,
                                             const std::vector<std::array<double, 3>>& points,
                                             const std::vector<std::vector<double>>& phis) {
    int max_deg = 0;
    for (const auto& phi : phis) max_deg = std::max(max_deg, int(phi.size()) - 1);
    const int N2 = max_deg + n + 2 + 2 * n;
    BasisDescriptor inner = BasisDescriptor::monomial(N2);
    SpectralConvention<Cplx> sc(Cplx(u, 0.0), Cplx(ell, 0.0));
    BlockOp<Cplx> Z = build_Z<Cplx>(n, mult_by_coordinate<Cplx>(inner));
    BlockOp<Cplx> D = build_Dmat<Cplx>(n, derivative<Cplx>(inner));
    BlockOp<Cplx> R = invert_unitriangular(Z) * build_Uplus<Cplx>(n, sc.u2, inner) * D *
                      build_Uminus<Cplx>(n, sc.u1, inner) * Z;
    const double u1 = u - ell - 1.0, u2 = u + ell;

    auto factorial = [](int k) {
        double f = 1.0;
        for (int j = 2; j <= k; ++j) f *= j;
        return f;
    };

    KeyIdentityResult res;
    for (const auto& pt : points) {
        double x = pt[0], z = pt[1], z1 = pt[2];
        if (!(z - x > 0.0) || !(z1 - z > 0.0))
            throw BranchGuard("verify_key_identity: need x < z < z1");
        for (const auto& phi : phis) {
            // LHS: sum_i z1^{n-i} sum_j binom(n,j) (-x)^j (R_{ij} phi)(z)
            Cplx lhs(0.0, 0.0);
            for (int i = 0; i <= n; ++i) {
                Cplx row(0.0, 0.0);
                for (int j = 0; j <= n; ++j) {
                    const LinOp<Cplx>& blk = R.block(i, j);
                    Cplx val(0.0, 0.0), zp(1.0, 0.0);
                    for (int r = 0; r <= N2; ++r) {
                        Cplx coef(0.0, 0.0);
                        for (int c = 0; c < int(phi.size()); ++c)
                            coef += blk.at(r, c) * phi[c];
                        val += coef * zp;
                        zp *= z;
                    }
                    row += binomial_d(n, j) * std::pow(-x, j) * val;
                }
                lhs += std::pow(z1, n - i) * row;
            }
            // RHS: (z-x)^{-u1-1+n} (z1-z)^{u2+1} d_z^n [(z1-z)^{-u2-1+n} (z-x)^{u1+1} phi(z)]
            // by the generalized Leibniz rule with principal real powers
            const double alpha = -u2 - 1.0 + n, beta = u1 + 1.0;
            double dn = 0.0;
            for (int a = 0; a <= n; ++a)
                for (int b = 0; a + b <= n; ++b) {
                    int c = n - a - b;
                    double fa = ((a % 2) ? -1.0 : 1.0) * falling_factorial_d(alpha, a) *
                                std::pow(z1 - z, alpha - a);
                    double fb = falling_factorial_d(beta, b) * std::pow(z - x, beta - b);
                    double fc = 0.0;
                    for (int t = c; t < int(phi.size()); ++t)
                        fc += falling_factorial_d(double(t), c) * phi[t] * std::pow(z, t - c);
                    dn += factorial(n) / (factorial(a) * factorial(b) * factorial(c)) *
                          fa * fb * fc;
                }
            double rhs = std::pow(z - x, -u1 - 1.0 + n) * std::pow(z1 - z, u2 + 1.0) * dn;
            res.max_abs = std::max(res.max_abs, std::abs(lhs - Cplx(rhs, 0.0)));
            res.scale = std::max(res.scale, std::abs(rhs));
        }
    }
    return res;
}

}  // namespace ybx
