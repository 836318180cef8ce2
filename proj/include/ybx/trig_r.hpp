// Modular double case: U_q(sl2) generators on Laurent windows, the coefficient
// families d_k and d_{jk}(u), the M(u) matrices, two factorization routes for
// the restricted R-operator, and the finite x finite restriction.
//
// Basis: e_j = X^{m+2-2j} (descending Laurent exponents). The builders take
// the spectral parameter of the factorization formula directly; u1 = u + s/2,
// u2 = u - s/2 with s the spin of the second space.
#pragma once

#include "operator_space.hpp"

namespace ybx {

// s_m = -omega'' - m omega', the spin at which an (m+1)-dimensional block
// decouples (the omega' line of the quantized lattice).
inline Cplx trig_spin_sm(int m, const ModularParams& par) {
    return -par.omega_dblprime - double(m) * par.omega_prime;
}

// U(u) = exp(i pi u / (2 omega))
inline Cplx trig_U(Cplx u, const ModularParams& par) {
    return std::exp(kI * kPi * u / (2.0 * par.omega));
}

struct TrigSpinPair {
    int m = 1;            // first spin s_m
    bool finite = true;
    int m2 = 1;           // finite second spin s_{m2}
    Cplx s = Cplx(0, 0);  // generic second spin
    int window = 8;       // generic mode Laurent window

    static TrigSpinPair finite_pair(int m, int m2) {
        if (m < 0 || m2 < 0) throw ConfigError("TrigSpinPair: spins must be >= 0");
        TrigSpinPair p;
        p.m = m;
        p.m2 = m2;
        p.finite = true;
        return p;
    }
    static TrigSpinPair generic_pair(int m, Cplx s, int window) {
        TrigSpinPair p;
        p.m = m;
        p.finite = false;
        p.s = s;
        p.window = window;
        return p;
    }

    Cplx spin2(const ModularParams& par) const {
        return finite ? trig_spin_sm(m2, par) : s;
    }
    // every intermediate of Z M D M Z^{-1} applied to the finite block stays
    // inside this window; both parities are admitted because Z shifts exponents
    // by odd amounts when m is odd
    BasisDescriptor basis(const ModularParams&) const {
        if (finite) return BasisDescriptor::laurent(2 * m + m2 + 2, Parity::Both);
        return BasisDescriptor::laurent(window, Parity::Both);
    }
};

struct TrigSpectral {
    Cplx u, u1, u2;
    TrigSpectral(Cplx u_, Cplx s) : u(u_), u1(u_ + s / 2.0), u2(u_ - s / 2.0) {}
    static constexpr const char* description() { return "u1 = u + s/2, u2 = u - s/2"; }
};

// The builders carry a first-spin-dependent offset relative to the additive
// Yang-Baxter parametrization: the YBE holds for builder(u - s_{m_1}/2) at the
// plain arguments (u - v, u, v). Verified to machine precision on mixed-spin
// triples; offsets differing by f(s_1) - f(s_2) give the same residuals.
inline Cplx trig_physical_to_builder(Cplx u_phys, int m_first, const ModularParams& par) {
    return u_phys - trig_spin_sm(m_first, par) / 2.0;
}
inline constexpr const char* trig_shift_description() {
    return "builder_u = physical_u - s_{m1}/2; u1 = u + s/2, u2 = u - s/2";
}

// --- generators ----------------------------------------------------------------

struct ModularGenerators {
    LinOp<Cplx> K, E, F;
};

// K = q^{j/2} on X^j; E, F shift by X^{+-2} with the phase factors read off the
// finite-difference realization (momentum eigenvalue j/(4 omega) on X^j).
inline ModularGenerators modular_generators(Cplx s, const BasisDescriptor& basis,
                                            const ModularParams& par) {
    if (basis.kind != BasisKind::Laurent)
        throw ConfigError("modular_generators: laurent basis required");
    ModularGenerators g{LinOp<Cplx>(basis, basis), LinOp<Cplx>(basis, basis),
                        LinOp<Cplx>(basis, basis)};
    const Cplx sigma = std::exp(kI * kPi * (s + par.omega_dblprime) / (2.0 * par.omega));
    const Cplx qdiff = par.q - 1.0 / par.q;
    for (int c = 0; c < basis.dim; ++c) {
        long j = basis.labels[c];
        g.K.at(c, c) = par.q_half_pow(j);
        int up = basis.index_of_label(j + 2);
        Cplx ecoef = (par.q_half_pow(j) * sigma - par.q_half_pow(-j) / sigma) / qdiff;
        if (up >= 0)
            g.E.at(up, c) = ecoef;
        else if (std::abs(ecoef) > 0.0)
            g.E.col_taint[c] = 1;
        int dn = basis.index_of_label(j - 2);
        Cplx fcoef = (par.q_half_pow(-j) * sigma - par.q_half_pow(j) / sigma) / qdiff;
        if (dn >= 0)
            g.F.at(dn, c) = fcoef;
        else if (std::abs(fcoef) > 0.0)
            g.F.col_taint[c] = 1;
    }
    return g;
}

// --- coefficient families --------------------------------------------------------

// d_k = (q^2;q^2)_m q^{(k-1)(k-m-1)} / ((q^2;q^2)_{k-1} (q^2;q^2)_{m-k+1}), 1-based.
inline Cplx coeff_dk(int m, int k, const ModularParams& par) {
    if (k < 1 || k > m + 1) throw ConfigError("coeff_dk: need 1 <= k <= m+1");
    return q_pochhammer_q2(par.q, m) * par.q_half_pow(2L * (k - 1) * (k - m - 1)) /
           (q_pochhammer_q2(par.q, k - 1) * q_pochhammer_q2(par.q, m - k + 1));
}

// d_{jk}(u): the expansion coefficients of D_u(x) D_{-u+m w'}(x + (2j-m-2) w')
// over X^{m+2-2k}; summation over p in [max(0, k+j-2-m), min(k-1, j-1)].
inline Cplx coeff_djk(int m, int j, int k, Cplx u, const ModularParams& par) {
    if (j < 1 || j > m + 1 || k < 1 || k > m + 1)
        throw ConfigError("coeff_djk: indices out of range");
    const Cplx U = trig_U(u, par);
    const Cplx num = q_pochhammer_q2(par.q, j - 1) * q_pochhammer_q2(par.q, m - j + 1);
    Cplx sum(0.0, 0.0);
    for (int p = std::max(0, k + j - 2 - m); p <= std::min(k - 1, j - 1); ++p) {
        long qe = 2L * ((k - p - 1) * (k - p - 1) + p * (p + 2 - 2 * j) + j - 1) - m;
        Cplx den = q_pochhammer_q2(par.q, p) * q_pochhammer_q2(par.q, j - 1 - p) *
                   q_pochhammer_q2(par.q, k - p - 1) *
                   q_pochhammer_q2(par.q, m - j + 2 - k + p);
        sum += num * par.q_half_pow(qe) / den * ipow(U, 2L * (2 * p - j - k + 2) + m);
    }
    return sum;
}

// dbar_{jk}(u) = d_j d_{jk}(u) q^{j(m-1)+1-m(m+1)/2}, symmetric in (j,k).
inline Cplx coeff_dbar(int m, int j, int k, Cplx u, const ModularParams& par) {
    return coeff_dk(m, j, par) * coeff_djk(m, j, k, u, par) *
           par.q_half_pow(2L * j * (m - 1) + 2 - (long(m) * (m + 1)));
}

// Row normalization that makes the expansion rows close under the shift of the
// second product argument by 2 omega' (the first-order difference equations of
// the D-function force P_{j+1}(x) = P_j(x) cos-ratio; the bare rows miss it by
// q^{-(m-1)} per step). The factorization routes need this normalization.
inline Cplx coeff_djk_normalized(int m, int j, int k, Cplx u, const ModularParams& par) {
    return coeff_djk(m, j, k, u, par) * par.q_half_pow(2L * (m - 1) * (j - 1));
}

// The finite product for D_u(x) D_{-u+m w'}(x + (2j-m-2) w'); independent oracle
// for d_{jk}(u) via a Vandermonde solve in X^{m+2-2k}.
inline Cplx ddprod(int m, int j, Cplx u, Cplx x, const ModularParams& par) {
    const Cplx U = trig_U(u, par);
    const Cplx X = par.X(x);
    const Cplx Xi2 = 1.0 / (X * X);
    Cplx acc = ipow(U, m + 2 - 2L * j) * par.q_half_pow(2L * j - m - 2) * ipow(X, m);
    for (int k = 0; k <= m - j; ++k)
        acc *= 1.0 + par.q_half_pow(2 + 4L * k) * Xi2 / (U * U);
    for (int k = 0; k <= j - 2; ++k)
        acc *= 1.0 + par.q_half_pow(2L * (3 - 2 * j) + 4L * k) * Xi2 * (U * U);
    return acc;
}

// --- M matrices -----------------------------------------------------------------

// (M(u))_{kj}, the hypergeometric sum; equal to d_{jk}(u) q^{j(m-1)+1-m(m+1)/2}.
inline std::vector<Cplx> build_M(int m, Cplx u, const ModularParams& par) {
    const int d = m + 1;
    const Cplx U = trig_U(u, par);
    std::vector<Cplx> M(size_t(d) * d, Cplx(0, 0));
    for (int k = 1; k <= d; ++k)
        for (int j = 1; j <= d; ++j) {
            const Cplx num =
                q_pochhammer_q2(par.q, j - 1) * q_pochhammer_q2(par.q, m - j + 1);
            Cplx sum(0.0, 0.0);
            for (int p = std::max(0, k + j - 2 - m); p <= std::min(k - 1, j - 1); ++p) {
                long qe = 2L * ((k - p - 1) * (k - p - 1) + p * (p + 2 - 2 * j) +
                                (j - 1) * m) -
                          long(m) * m;
                Cplx den = q_pochhammer_q2(par.q, p) * q_pochhammer_q2(par.q, j - 1 - p) *
                           q_pochhammer_q2(par.q, k - p - 1) *
                           q_pochhammer_q2(par.q, m + 2 - j - k + p);
                sum += num * par.q_half_pow(qe) / den *
                       ipow(U, 2L * (2 * p - j - k + 2) + m);
            }
            M[size_t(k - 1) * d + (j - 1)] = sum;
        }
    return M;
}

// --- factorization routes ---------------------------------------------------------

namespace detail {

inline BlockOp<Cplx> trig_Z(int m, const BasisDescriptor& b, bool inverse) {
    std::vector<LinOp<Cplx>> diag;
    for (int k = 0; k <= m; ++k)
        diag.push_back(laurent_mult(inverse ? (m - 2L * k) : (2L * k - m), b));
    return BlockOp<Cplx>::diagonal(diag);
}

// The diagonal of shift operators. With the phase q^{m(m-1)} it compensates the
// normalization of the M matrices so that both factorization routes coincide
// exactly (the phase is constant across the diagonal: moving the d_k diagonal
// through the shifts leaves no k-dependence behind).
inline BlockOp<Cplx> trig_D(int m, const BasisDescriptor& b, const ModularParams& par,
                            bool with_phase) {
    std::vector<LinOp<Cplx>> diag;
    for (int k = 0; k <= m; ++k) {
        LinOp<Cplx> op = laurent_shift(m - 2L * k, b, par);
        if (with_phase) op = par.q_half_pow(2L * m * (m - 1)) * op;
        diag.push_back(op);
    }
    return BlockOp<Cplx>::diagonal(diag);
}

}  // namespace detail

// Route 1: R = Z M(u2) D M(u1) Z^{-1}, all factors read off the factorization
// formula (Z, D diagonal; M numeric).
inline BlockOp<Cplx> build_R_trig_factorized(const TrigSpinPair& pair, Cplx u,
                                             const ModularParams& par) {
    const int m = pair.m;
    BasisDescriptor b = pair.basis(par);
    TrigSpectral ts(u, pair.spin2(par));
    BlockOp<Cplx> Z = detail::trig_Z(m, b, false);
    BlockOp<Cplx> Zi = detail::trig_Z(m, b, true);
    BlockOp<Cplx> D = detail::trig_D(m, b, par, true);
    BlockOp<Cplx> M2 = BlockOp<Cplx>::from_numeric(build_M(m, ts.u2, par), m + 1, b);
    BlockOp<Cplx> M1 = BlockOp<Cplx>::from_numeric(build_M(m, ts.u1, par), m + 1, b);
    return Z * M2 * D * M1 * Zi;
}

// Route 2: R = Z M2(u2) Dbar M1(u1) Z^{-1} with (M1)_{ik} = d_{ik}(u)/d_k,
// (M2)_{ik} = d_k d_{ki}(u) and Dbar the bare shifts. Exactly equal to route 1:
// the derivation only moves a diagonal factor through the product.
inline BlockOp<Cplx> build_R_trig_oracle(const TrigSpinPair& pair, Cplx u,
                                         const ModularParams& par) {
    const int m = pair.m;
    const int d = m + 1;
    BasisDescriptor b = pair.basis(par);
    TrigSpectral ts(u, pair.spin2(par));
    std::vector<Cplx> M1(size_t(d) * d), M2(size_t(d) * d);
    for (int i = 1; i <= d; ++i)
        for (int k = 1; k <= d; ++k) {
            M1[size_t(i - 1) * d + (k - 1)] =
                coeff_djk_normalized(m, i, k, ts.u1, par) / coeff_dk(m, k, par);
            M2[size_t(i - 1) * d + (k - 1)] =
                coeff_dk(m, k, par) * coeff_djk_normalized(m, k, i, ts.u2, par);
        }
    BlockOp<Cplx> Z = detail::trig_Z(m, b, false);
    BlockOp<Cplx> Zi = detail::trig_Z(m, b, true);
    BlockOp<Cplx> Dbar = detail::trig_D(m, b, par, false);
    return Z * BlockOp<Cplx>::from_numeric(M2, d, b) * Dbar *
           BlockOp<Cplx>::from_numeric(M1, d, b) * Zi;
}

// --- restriction -------------------------------------------------------------------

// Evaluate the block operator on the parity-admissible sub-basis X^{m2-2l} and
// assert invariance: components on window exponents outside the sub-basis must
// stay below tol (relative). Returns the (m+1)(m2+1) matrix, both factors on
// descending bases, space 1 slowest.
inline LinOp<Cplx> restrict_second_trig(int m, int m2, Cplx u, const ModularParams& par,
                                        double tol = 1e-10) {
    TrigSpinPair pair = TrigSpinPair::finite_pair(m, m2);
    BlockOp<Cplx> R = build_R_trig_factorized(pair, u, par);
    const BasisDescriptor& win = R.inner_dom;
    BasisDescriptor sub = BasisDescriptor::laurent(m2, (m2 % 2 == 0) ? Parity::Even
                                                                     : Parity::Odd);
    const int d1 = m + 1, d2 = m2 + 1;

    std::vector<int> win_index(d2), sub_of_win(win.dim, -1);
    for (int l = 0; l < d2; ++l) {
        win_index[l] = win.index_of_label(sub.labels[l]);
        if (win_index[l] < 0) throw ConfigError("restrict_second_trig: window too small");
        sub_of_win[win_index[l]] = l;
    }

    double scale = 0.0;
    for (const auto& blk : R.blocks)
        for (int l = 0; l < d2; ++l)
            for (int r = 0; r < win.dim; ++r)
                scale = std::max(scale, std::abs(blk.at(r, win_index[l])));

    BasisDescriptor flatb = BasisDescriptor::monomial(d1 * d2 - 1);
    flatb.kind = BasisKind::Tensor;
    flatb.tensor_labels.assign(size_t(d1) * d2, "");
    for (int i = 0; i < d1; ++i)
        for (int a = 0; a < d2; ++a)
            flatb.tensor_labels[size_t(i) * d2 + a] =
                "X1^" + std::to_string(m - 2 * i) + "*X^" + std::to_string(sub.labels[a]);
    LinOp<Cplx> out(flatb, flatb);
    for (int i = 0; i < d1; ++i)
        for (int j = 0; j < d1; ++j) {
            const LinOp<Cplx>& blk = R.block(i, j);
            for (int l = 0; l < d2; ++l) {
                int c = win_index[l];
                if (blk.col_taint[c])
                    throw InvarianceViolation("restrict_second_trig: truncated column");
                for (int r = 0; r < win.dim; ++r) {
                    Cplx v = blk.at(r, c);
                    if (sub_of_win[r] >= 0)
                        out.at(i * d2 + sub_of_win[r], j * d2 + l) = v;
                    else if (std::abs(v) > tol * scale)
                        throw InvarianceViolation(
                            "restrict_second_trig: out-of-span component " +
                            std::to_string(std::abs(v) / scale));
                }
            }
        }
    return out;
}

// K on the finite descending basis X^{m-2l} (for the weight-conservation check).
inline LinOp<Cplx> trig_finite_K(int m, const ModularParams& par) {
    BasisDescriptor sub =
        BasisDescriptor::laurent(m, (m % 2 == 0) ? Parity::Even : Parity::Odd);
    LinOp<Cplx> K(sub, sub);
    for (int l = 0; l <= m; ++l) K.at(l, l) = par.q_half_pow(sub.labels[l]);
    return K;
}

}  // namespace ybx
