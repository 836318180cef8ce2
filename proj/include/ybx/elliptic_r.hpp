// Sklyanin algebra case: generators as finite-difference operators on the
// space of even theta functions of order 2n, the intertwiner M(n eta) and its
// first-order factor chain, the V matrices, the factorized R-operator, the
// generating-formula oracle, and the restriction to finite x finite.
//
// Every operator action on Theta+_{2n} goes through pointwise evaluation plus
// a collocation fit; the fit residual at held-out points is the membership
// test. Spectral combinations: u1 = (u+g)/2, u2 = (u-g)/2 with g the spin of
// the second space. The output basis of the R matrix is phi, the input basis
// is psi; restrict_second_elliptic returns the operator in the phi (x) phi
// basis, converting with the psi->phi change of basis.
#pragma once

#include <array>
#include <functional>
#include <memory>

#include "operator_space.hpp"

namespace ybx {

inline Cplx elliptic_gn(int n, const EllipticParams& par) {
    return double(n + 1) * par.eta + par.tau / 2.0;
}

// theta_1(x + w) theta_1(-x + w), the even-in-x building block.
inline Cplx theta_pair(Cplx x, Cplx w, const EllipticParams& par) {
    return par.theta_tau(1, x + w) * par.theta_tau(1, -x + w);
}

// --- bases of Theta+_{2n} -------------------------------------------------------

struct ThetaBases {
    int n;
    const EllipticParams& par;
    CollocationGrid grid;
    CMat fit_matrix;                       // phi_j at grid points
    Eigen::FullPivLU<CMat> fit_lu;
    double cond_bound;

    explicit ThetaBases(int n_, const EllipticParams& p, double cond_bound_ = 1e8)
        : n(n_), par(p), grid(CollocationGrid::for_theta_plus(n_)),
          cond_bound(cond_bound_) {
        for (Cplx z : grid.points)
            if (std::abs(par.theta_tau(1, 2.0 * z)) < 1e-6)
                throw IllConditioned("ThetaBases: grid point too close to a zero of theta1(2z)");
        fit_matrix.resize(n + 1, n + 1);
        for (int s = 0; s <= n; ++s)
            for (int j = 1; j <= n + 1; ++j) fit_matrix(s, j - 1) = phi(j, grid.points[s]);
        if (cond_svd(fit_matrix) > cond_bound)
            throw IllConditioned("ThetaBases: fit matrix condition exceeds bound");
        fit_lu.compute(fit_matrix);
    }

    // phi_{j} = tb3(z)^{j-1} tb4(z)^{n-j+1}, j = 1..n+1
    Cplx phi(int j, Cplx z) const {
        return ipow(par.btheta(3, z), j - 1) * ipow(par.btheta(4, z), n - (j - 1));
    }

    // psi_j: symmetrized products over shifted arguments z + (n-1-2r) eta with
    // tb3 appearing j-1 times
    Cplx psi(int j, Cplx z) const {
        int want = j - 1;
        Cplx total(0.0, 0.0);
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
            if (__builtin_popcount(mask) != want) continue;
            Cplx term(1.0, 0.0);
            for (int r = 0; r < n; ++r) {
                Cplx arg = z + double(n - 1 - 2 * r) * par.eta;
                term *= par.btheta((mask >> r) & 1u ? 3 : 4, arg);
            }
            total += term;
        }
        return total;
    }

    // coefficients of F over the phi basis plus the membership residual at the
    // validation points
    FitResult fit(const std::function<Cplx(Cplx)>& F) const {
        CVec b(n + 1);
        for (int s = 0; s <= n; ++s) b(s) = F(grid.points[s]);
        CVec c = fit_lu.solve(b);
        FitResult out;
        out.coeffs.assign(c.data(), c.data() + c.size());
        out.cond = cond_svd(fit_matrix);
        double scale = b.cwiseAbs().maxCoeff();
        for (Cplx zv : grid.validation) {
            Cplx fitv(0.0, 0.0);
            for (int j = 1; j <= n + 1; ++j) fitv += out.coeffs[j - 1] * phi(j, zv);
            Cplx truth = F(zv);
            scale = std::max(scale, std::abs(truth));
            out.residual_abs = std::max(out.residual_abs, std::abs(fitv - truth));
        }
        out.scale = scale;
        out.residual = scale > 0.0 ? out.residual_abs / scale : out.residual_abs;
        return out;
    }

    // psi_j = sum_l T_{lj} phi_l
    CMat psi_in_phi() const {
        CMat T(n + 1, n + 1);
        for (int j = 1; j <= n + 1; ++j) {
            CVec b(n + 1);
            for (int s = 0; s <= n; ++s) b(s) = psi(j, grid.points[s]);
            T.col(j - 1) = fit_lu.solve(b);
        }
        return T;
    }
};

// The antidiagonal flip (C)_{lj} = delta_{n+2-l, j}.
inline LinOp<Cplx> antidiag_flip(int n) {
    BasisDescriptor b = BasisDescriptor::theta_plus(n);
    LinOp<Cplx> C(b, b);
    for (int l = 0; l <= n; ++l) C.at(l, n - l) = Cplx(1.0, 0.0);
    return C;
}

// --- Sklyanin generators ---------------------------------------------------------

struct SklyaninStructureConsts {
    Cplx J1, J2, J3;
    explicit SklyaninStructureConsts(const EllipticParams& par) {
        auto t = [&](int a, Cplx z) { return par.theta_tau(a, z); };
        Cplx e2 = 2.0 * par.eta;
        J1 = t(2, e2) * t(2, Cplx(0, 0)) / (t(2, par.eta) * t(2, par.eta));
        J2 = t(3, e2) * t(3, Cplx(0, 0)) / (t(3, par.eta) * t(3, par.eta));
        J3 = t(4, e2) * t(4, Cplx(0, 0)) / (t(4, par.eta) * t(4, par.eta));
    }
    Cplx J(int a) const { return a == 1 ? J1 : (a == 2 ? J2 : J3); }
    // J_{ab} = (J_b - J_a)/J_c, c the remaining index
    Cplx Jab(int a, int b) const {
        int c = 6 - a - b;
        return (J(b) - J(a)) / J(c);
    }
};

// Pointwise action of S^a (a = 0..3) at spin g. The similarity conjugation by
// exp(+-i pi z^2/eta) is absorbed into the exp(-+2 pi i z) prefactors.
inline Cplx sklyanin_apply(int a, Cplx g, const std::function<Cplx(Cplx)>& f, Cplx z,
                           const EllipticParams& par) {
    Cplx th1_2z = par.theta_tau(1, 2.0 * z);
    if (std::abs(th1_2z) < 1e-9)
        throw PoleProximity("sklyanin_apply: theta1(2z) too small");
    Cplx coef = par.theta_tau(a + 1, par.eta) / th1_2z * std::exp(-kI * kPi * par.eta);
    if (a == 2) coef *= kI;
    Cplx plus = par.theta_tau(a + 1, 2.0 * z - g + par.eta) *
                std::exp(-2.0 * kPi * kI * z) * f(z + par.eta);
    Cplx minus = par.theta_tau(a + 1, -2.0 * z - g + par.eta) *
                 std::exp(2.0 * kPi * kI * z) * f(z - par.eta);
    return coef * (plus - minus);
}

struct SklyaninGenerators {
    std::array<LinOp<Cplx>, 4> S;  // S^0..S^3 on the phi basis
    double membership_residual = 0.0;
};

// Matrices of S^a on Theta+_{2n} by pointwise evaluation + collocation; the
// membership residual must stay small at g = g_n (invariant subspace).
inline SklyaninGenerators sklyanin_generators(Cplx g, int n, const ThetaBases& bases,
                                              double tol = 1e-8) {
    const EllipticParams& par = bases.par;
    BasisDescriptor b = BasisDescriptor::theta_plus(n);
    SklyaninGenerators out{{LinOp<Cplx>(b, b), LinOp<Cplx>(b, b), LinOp<Cplx>(b, b),
                            LinOp<Cplx>(b, b)},
                           0.0};
    for (int a = 0; a < 4; ++a) {
        // residuals are measured against the whole generator's scale: a column
        // the generator annihilates carries no membership information
        double worst_abs = 0.0, scale = 0.0;
        for (int j = 1; j <= n + 1; ++j) {
            auto phi_j = [&](Cplx z) { return bases.phi(j, z); };
            auto Sphi = [&](Cplx z) { return sklyanin_apply(a, g, phi_j, z, par); };
            FitResult fit = bases.fit(Sphi);
            worst_abs = std::max(worst_abs, fit.residual_abs);
            scale = std::max(scale, fit.scale);
            for (int l = 0; l <= n; ++l) out.S[a].at(l, j - 1) = fit.coeffs[l];
        }
        if (scale > 0.0)
            out.membership_residual = std::max(out.membership_residual, worst_abs / scale);
    }
    if (out.membership_residual > tol)
        throw InvarianceViolation("sklyanin_generators: action leaves Theta+_{2n}, residual " +
                                  std::to_string(out.membership_residual));
    return out;
}

// --- intertwiner -----------------------------------------------------------------

// A_a(g) f(z), the first-order factor of the intertwiner chain (a = 3 or 4;
// bar-theta coefficients, theta1(2z) denominator at the full modular parameter).
inline Cplx intertwiner_A(int a, Cplx g, const std::function<Cplx(Cplx)>& f, Cplx z,
                          const EllipticParams& par) {
    Cplx th1_2z = par.theta_tau(1, 2.0 * z);
    if (std::abs(th1_2z) < 1e-9)
        throw PoleProximity("intertwiner_A: theta1(2z) too small");
    Cplx plus = par.btheta(a, z + g + par.eta) * std::exp(-2.0 * kPi * kI * z) *
                f(z + par.eta);
    Cplx minus = par.btheta(a, z - g - par.eta) * std::exp(2.0 * kPi * kI * z) *
                 f(z - par.eta);
    return std::exp(-kI * kPi * par.eta) / th1_2z * (plus - minus);
}

// M(n eta) f = A_a((n-1) eta) ... A_a(eta) A_a(0) [ tb_a^{-n} f ], evaluated
// pointwise through the recursive shift tree.
inline Cplx intertwiner_chain_apply(int a, int n, const std::function<Cplx(Cplx)>& f,
                                    Cplx z, const EllipticParams& par) {
    std::function<Cplx(int, Cplx)> level = [&](int m, Cplx w) -> Cplx {
        if (m == 0) return f(w) / ipow(par.btheta(a, w), n);
        auto prev = [&](Cplx ww) { return level(m - 1, ww); };
        return intertwiner_A(a, double(m - 1) * par.eta, prev, w, par);
    };
    return level(n, z);
}

// Coefficients beta_l(z) of M(n eta) = sum_l beta_l(z) exp((n-2l) eta d_z),
// extracted from the action on exponentials exp(lambda_t z), t = 0..2n+1
// (least-squares solve, condition-guarded).
struct Intertwiner {
    int n;
    const EllipticParams& par;
    int branch;  // 3 or 4

    std::vector<Cplx> beta(Cplx z) const {
        const int rows = 2 * n + 2, cols = n + 1;
        CMat A(rows, cols);
        CVec b(rows);
        for (int t = 0; t < rows; ++t) {
            Cplx lam = 0.3 + 0.15 * t;
            for (int l = 0; l <= n; ++l)
                A(t, l) = std::exp(lam * (z + double(n - 2 * l) * par.eta));
            auto expf = [&](Cplx w) { return std::exp(lam * w); };
            b(t) = intertwiner_chain_apply(branch, n, expf, z, par);
        }
        CVec sol = guarded_solve(A, b, 1e8, "intertwiner beta");
        return std::vector<Cplx>(sol.data(), sol.data() + sol.size());
    }

    Cplx apply(const std::function<Cplx(Cplx)>& f, Cplx z) const {
        return intertwiner_chain_apply(branch, n, f, z, par);
    }
};

inline Intertwiner build_intertwiner(int n, const EllipticParams& par, int branch = 4) {
    if (branch != 3 && branch != 4) throw ConfigError("build_intertwiner: branch must be 3 or 4");
    return Intertwiner{n, par, branch};
}

// --- V matrices ------------------------------------------------------------------

// V(z, u): column l is the expansion over phi_j(x) of the defining product of
// theta1(+-x + w) factors. The x-grid Vandermonde is factored once.
struct VMatrix {
    int n;
    const EllipticParams& par;
    Cplx u;
    Cplx gn_half;
    std::shared_ptr<ThetaBases> bases;

    VMatrix(int n_, Cplx u_, const EllipticParams& p)
        : n(n_), par(p), u(u_), gn_half(elliptic_gn(n_, p) / 2.0),
          bases(std::make_shared<ThetaBases>(n_, p)) {}

    // the n shifted arguments of column l (1-based)
    std::vector<Cplx> column_args(int l, Cplx z) const {
        std::vector<Cplx> w;
        for (int r = 0; r <= n - l; ++r)
            w.push_back(z - u + gn_half + 2.0 * par.eta * (0.5 * n - l - r));
        for (int r = 2; r <= l; ++r)
            w.push_back(z + u - gn_half + 2.0 * par.eta * (0.5 * n - l + r));
        return w;
    }

    // entries row-major, (V)_{jl} with j, l = 1..n+1
    std::vector<Cplx> eval(Cplx z) const {
        const int d = n + 1;
        std::vector<Cplx> V(size_t(d) * d);
        for (int l = 1; l <= d; ++l) {
            auto args = column_args(l, z);
            CVec b(d);
            for (int s = 0; s < d; ++s) {
                Cplx x = bases->grid.points[s];
                Cplx prod(1.0, 0.0);
                for (Cplx w : args) prod *= theta_pair(x, w, par);
                b(s) = prod;
            }
            CVec c = bases->fit_lu.solve(b);
            for (int j = 1; j <= d; ++j) V[size_t(j - 1) * d + (l - 1)] = c(j - 1);
        }
        return V;
    }
};

// --- spin pair and spectral bookkeeping -------------------------------------------

struct EllipticSpinPair {
    int n = 1;
    bool finite = true;
    int n2 = 1;
    Cplx g = Cplx(0, 0);

    static EllipticSpinPair finite_pair(int n, int n2) {
        if (n < 0 || n2 < 0) throw ConfigError("EllipticSpinPair: spins must be >= 0");
        EllipticSpinPair p;
        p.n = n;
        p.n2 = n2;
        p.finite = true;
        return p;
    }
    static EllipticSpinPair generic_pair(int n, Cplx g) {
        EllipticSpinPair p;
        p.n = n;
        p.finite = false;
        p.g = g;
        return p;
    }
    Cplx spin2(const EllipticParams& par) const {
        return finite ? elliptic_gn(n2, par) : g;
    }
};

struct EllipticSpectral {
    Cplx u, u1, u2;
    EllipticSpectral(Cplx u_, Cplx g) : u(u_), u1((u_ + g) / 2.0), u2((u_ - g) / 2.0) {}
    static constexpr const char* description() { return "u1 = (u+g)/2, u2 = (u-g)/2"; }
};

// --- factorized route --------------------------------------------------------------

// R = V(u1, z) D(z, d) C V^T(u2, z) C. Entry (l, j) applied to f at z:
//   sum_k V_{lk}(u1, z) beta_{k-1}(z) V_{n+2-j, n+2-k}(u2, z + (n+2-2k) eta)
//        * f(z + (n+2-2k) eta)
struct EllipticRFactorized {
    int n;
    const EllipticParams& par;
    EllipticSpectral spec;
    VMatrix V1, V2;
    Intertwiner M;

    EllipticRFactorized(const EllipticSpinPair& pair, Cplx u, const EllipticParams& p)
        : n(pair.n), par(p), spec(u, pair.spin2(p)),
          V1(pair.n, spec.u1, p), V2(pair.n, spec.u2, p),
          M(build_intertwiner(pair.n, p)) {}

    // (n+1)x(n+1) table of (R_{lj} f)(z), row-major
    std::vector<Cplx> action_table(const std::function<Cplx(Cplx)>& f, Cplx z) const {
        const int d = n + 1;
        std::vector<Cplx> out(size_t(d) * d, Cplx(0, 0));
        std::vector<Cplx> bet = M.beta(z);
        std::vector<Cplx> v1 = V1.eval(z);
        for (int k = 1; k <= d; ++k) {
            Cplx zs = z + double(n + 2 - 2 * k) * par.eta;
            std::vector<Cplx> v2 = V2.eval(zs);
            Cplx fz = f(zs);
            for (int l = 1; l <= d; ++l)
                for (int j = 1; j <= d; ++j)
                    out[size_t(l - 1) * d + (j - 1)] +=
                        v1[size_t(l - 1) * d + (k - 1)] * bet[k - 1] *
                        v2[size_t(n + 1 - j) * d + (n + 1 - k)] * fz;
        }
        return out;
    }
};

// --- generating-formula oracle ------------------------------------------------------

// Evaluates the right-hand side of the generating formula pointwise in
// (z1, z3, z) and separates matrix entries by collocation: j against
// phi_{n+2-j}(z3), l against phi_l(z1).
struct EllipticROracle {
    int n;
    const EllipticParams& par;
    EllipticSpinPair pair;
    Cplx u;
    EllipticSpectral spec;
    Intertwiner M;
    std::shared_ptr<ThetaBases> bases;
    std::vector<Cplx> grid_z1, grid_z3;
    CMat lu1_m, lu3_m;
    Eigen::FullPivLU<CMat> lu1, lu3;

    EllipticROracle(const EllipticSpinPair& pair_, Cplx u_, const EllipticParams& p)
        : n(pair_.n), par(p), pair(pair_), u(u_), spec(u_, pair_.spin2(p)),
          M(build_intertwiner(pair_.n, p)),
          bases(std::make_shared<ThetaBases>(pair_.n, p)) {
        for (int s = 0; s <= n; ++s) {
            grid_z1.push_back(Cplx(0.17 + 0.055 * s, -0.021 * s - 0.008));
            grid_z3.push_back(Cplx(0.11 + 0.07 * s, 0.013 * s + 0.004));
        }
        lu1_m.resize(n + 1, n + 1);
        lu3_m.resize(n + 1, n + 1);
        for (int s = 0; s <= n; ++s)
            for (int j = 1; j <= n + 1; ++j) {
                lu1_m(s, j - 1) = bases->phi(j, grid_z1[s]);
                lu3_m(s, j - 1) = bases->phi(j, grid_z3[s]);
            }
        if (cond_svd(lu1_m) > 1e8 || cond_svd(lu3_m) > 1e8)
            throw IllConditioned("EllipticROracle: separation grids ill-conditioned");
        lu1.compute(lu1_m);
        lu3.compute(lu3_m);
    }

    // prefactor constant of the generating expansion
    Cplx gen_constant() const {
        Cplx R = par.r_tau();
        return ipow(Cplx(-2.0, 0.0), n) * ipow(R, -2L * n) *
               std::exp(-kI * kPi * par.tau * double(n) / 2.0);
    }

    Cplx gamma4_ratio(Cplx a, Cplx b, Cplx cnum, Cplx a2, Cplx b2, Cplx cden) const {
        Cplx num = elliptic_gamma4(a, b, cnum, par);
        Cplx den = elliptic_gamma4(a2, b2, cden, par);
        if (std::abs(den) < 1e-12) throw PoleProximity("oracle: gamma ratio denominator");
        return num / den;
    }

    // RHS of the generating formula at (z1, z3, z)
    Cplx rhs(Cplx z1, Cplx z3, Cplx z, const std::function<Cplx(Cplx)>& f) const {
        Cplx gn = elliptic_gn(n, par), g = pair.spin2(par);
        Cplx half = par.eta + par.tau / 2.0;
        Cplx ratio1 = gamma4_ratio(z, z3, -u / 2.0 + (gn + g) / 2.0,
                                   z1, z, -u / 2.0 - (gn + g) / 2.0 + half);
        std::vector<Cplx> bet = M.beta(z);
        Cplx sum(0, 0);
        for (int l = 0; l <= n; ++l) {
            Cplx zs = z + double(n - 2 * l) * par.eta;
            Cplx ratio2 = gamma4_ratio(z1, zs, -u / 2.0 + (gn - g) / 2.0,
                                       zs, z3, -u / 2.0 + (g - gn) / 2.0 + half);
            sum += bet[l] * ratio2 * f(zs);
        }
        return ratio1 * sum;
    }

    // (n+1)x(n+1) table of (R_{lj} f)(z), row-major
    std::vector<Cplx> action_table(const std::function<Cplx(Cplx)>& f, Cplx z) const {
        const int d = n + 1;
        Cplx c = gen_constant();
        // W[J][r]: coefficients against phi_J(z3) for each z1 grid point r
        CMat W(d, d);
        for (int r = 0; r < d; ++r) {
            CVec F(d);
            for (int s = 0; s < d; ++s) F(s) = c * rhs(grid_z1[r], grid_z3[s], z, f);
            W.col(r) = lu3.solve(F);
        }
        // separate l against phi_l(z1): for each J solve over the z1 grid
        std::vector<Cplx> out(size_t(d) * d);
        for (int J = 0; J < d; ++J) {
            CVec H = lu1.solve(CVec(W.row(J).transpose()));
            int j = n + 1 - J;  // phi_{n+2-j}(z3) carried index J = (n+2-j)-1
            for (int l = 1; l <= d; ++l)
                out[size_t(l - 1) * d + (j - 1)] = H(l - 1);
        }
        return out;
    }
};

// --- restriction -------------------------------------------------------------------

struct EllipticRestriction {
    LinOp<Cplx> op;           // operator in the phi (x) phi basis
    LinOp<Cplx> raw;          // matrix with psi input basis in space 1
    double membership = 0.0;  // worst collocation residual in space 2
};

// Apply the factorized entries to the phi basis of Theta+_{2 n2} in space 2 and
// fit the results back; the fit residual is the invariance test. Space 1 input
// coordinates are converted from psi to phi.
inline EllipticRestriction restrict_second_elliptic(int n, int n2, Cplx u,
                                                    const EllipticParams& par,
                                                    double tol = 1e-7) {
    EllipticSpinPair pair = EllipticSpinPair::finite_pair(n, n2);
    EllipticRFactorized R(pair, u, par);
    ThetaBases b2(n2, par);
    const int d1 = n + 1, d2 = n2 + 1;

    BasisDescriptor flatb = BasisDescriptor::monomial(d1 * d2 - 1);
    flatb.kind = BasisKind::Tensor;
    flatb.tensor_labels.assign(size_t(d1) * d2, "");
    for (int l = 0; l < d1; ++l)
        for (int s = 0; s < d2; ++s)
            flatb.tensor_labels[size_t(l) * d2 + s] =
                "phi1_" + std::to_string(l + 1) + "*phi2_" + std::to_string(s + 1);
    LinOp<Cplx> raw(flatb, flatb);
    // membership is judged against the scale of the whole operator: entries
    // that vanish identically carry no information
    double worst_abs = 0.0, scale = 0.0;

    for (int t = 1; t <= d2; ++t) {
        auto phi_t = [&](Cplx z) { return b2.phi(t, z); };
        // table of actions at every fit/validation point, one pass
        std::vector<std::vector<Cplx>> tables;
        for (Cplx z : b2.grid.points) tables.push_back(R.action_table(phi_t, z));
        std::vector<std::vector<Cplx>> vtables;
        for (Cplx z : b2.grid.validation) vtables.push_back(R.action_table(phi_t, z));
        for (int l = 1; l <= d1; ++l)
            for (int j = 1; j <= d1; ++j) {
                CVec vals(d2);
                for (int s = 0; s < d2; ++s)
                    vals(s) = tables[s][size_t(l - 1) * d1 + (j - 1)];
                CVec coeff = b2.fit_lu.solve(vals);
                scale = std::max(scale, vals.cwiseAbs().maxCoeff());
                for (size_t vi = 0; vi < b2.grid.validation.size(); ++vi) {
                    Cplx fitv(0, 0);
                    for (int s = 1; s <= d2; ++s)
                        fitv += coeff(s - 1) * b2.phi(s, b2.grid.validation[vi]);
                    Cplx truth = vtables[vi][size_t(l - 1) * d1 + (j - 1)];
                    scale = std::max(scale, std::abs(truth));
                    worst_abs = std::max(worst_abs, std::abs(fitv - truth));
                }
                for (int s = 0; s < d2; ++s)
                    raw.at((l - 1) * d2 + s, (j - 1) * d2 + (t - 1)) = coeff(s);
            }
    }
    double membership = scale > 0.0 ? worst_abs / scale : worst_abs;
    if (membership > tol)
        throw InvarianceViolation("restrict_second_elliptic: membership residual " +
                                  std::to_string(membership));

    // psi -> phi conversion on the space-1 input index
    ThetaBases b1(n, par);
    CMat T = b1.psi_in_phi();
    CMat Tinv = guarded_inverse(T, 1e8, "psi->phi change of basis");
    LinOp<Cplx> op = raw;
    for (int r = 0; r < d1 * d2; ++r)
        for (int j = 0; j < d1; ++j)
            for (int t = 0; t < d2; ++t) {
                Cplx acc(0, 0);
                for (int jp = 0; jp < d1; ++jp)
                    acc += raw.at(r, jp * d2 + t) * Tinv(jp, j);
                op.at(r, j * d2 + t) = acc;
            }
    return EllipticRestriction{op, raw, membership};
}

// The elliptic builders close the Yang-Baxter equation at plain arguments
// (u - v, u, v); no spin-dependent offset is needed (verified to machine
// precision on spin triples (1,1,1) and (1,1,2)).
inline Cplx elliptic_physical_to_builder(Cplx u_phys, int /*n_first*/,
                                         const EllipticParams& /*par*/) {
    return u_phys;
}
inline constexpr const char* elliptic_shift_description() {
    return "builder_u = physical_u; u1 = (u+g)/2, u2 = (u-g)/2";
}

}  // namespace ybx
